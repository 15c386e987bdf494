#include <doctest.h>

#include <algorithm>
#include <random>
#include <set>

#include "naive_rs.hpp"
#include "sdeqr/gf256.hpp"

using namespace sdeqr;
using namespace sdeqr::gf256;

TEST_CASE("multiplication matches the schoolbook oracle on every pair") {
    for (int a = 0; a < 256; ++a)
        for (int b = 0; b < 256; ++b)
            REQUIRE(mul(static_cast<uint8_t>(a), static_cast<uint8_t>(b)) ==
                    naive_rs::gf_mul(static_cast<uint8_t>(a), static_cast<uint8_t>(b)));
}

TEST_CASE("field basics") {
    CHECK(mul(2, 2) == 4);
    CHECK(exp_alpha(8) == 0x1D);
    for (int a = 0; a < 256; ++a) {
        CHECK(mul(static_cast<uint8_t>(a), 1) == a);
        CHECK(add(static_cast<uint8_t>(a), static_cast<uint8_t>(a)) == 0);
    }
}

TEST_CASE("axioms hold on sampled triples") {
    std::mt19937 rng(7001);
    std::uniform_int_distribution<int> byte(0, 255);
    for (int i = 0; i < 5000; ++i) {
        auto a = static_cast<uint8_t>(byte(rng));
        auto b = static_cast<uint8_t>(byte(rng));
        auto c = static_cast<uint8_t>(byte(rng));
        CHECK(mul(a, b) == mul(b, a));
        CHECK(mul(mul(a, b), c) == mul(a, mul(b, c)));
        CHECK(mul(a, add(b, c)) == add(mul(a, b), mul(a, c)));
    }
}

TEST_CASE("exp and log are consistent") {
    for (int a = 1; a < 256; ++a)
        CHECK(exp_alpha(log_alpha(static_cast<uint8_t>(a))) == a);
    for (int i = 0; i < 255; ++i) {
        CHECK(log_alpha(exp_alpha(i)) == i);
        CHECK(exp_alpha(i + 255) == exp_alpha(i));
    }
    CHECK(exp_alpha(-1) == exp_alpha(254));
    std::set<uint8_t> seen;
    for (int i = 0; i < 255; ++i)
        seen.insert(exp_alpha(i));
    CHECK(seen.size() == 255);
}

TEST_CASE("inverse and division") {
    for (int a = 1; a < 256; ++a) {
        CHECK(mul(static_cast<uint8_t>(a), inv(static_cast<uint8_t>(a))) == 1);
        CHECK(div(static_cast<uint8_t>(a), static_cast<uint8_t>(a)) == 1);
    }
    std::mt19937 rng(7002);
    std::uniform_int_distribution<int> byte(0, 255);
    for (int i = 0; i < 1000; ++i) {
        auto a = static_cast<uint8_t>(byte(rng));
        auto b = static_cast<uint8_t>(byte(rng) | 1);
        CHECK(div(mul(a, b), b) == a);
    }
}

TEST_CASE("generator polynomials") {
    CHECK(rs_generator(1).coefficients == std::vector<uint8_t>{1, 1});
    CHECK(rs_generator(2).coefficients == std::vector<uint8_t>{1, 3, 2});
    for (int n_ec = 1; n_ec <= 68; ++n_ec) {
        GfPoly g = rs_generator(n_ec);
        REQUIRE(g.coefficients.size() == static_cast<std::size_t>(n_ec) + 1);
        CHECK(g.coefficients.front() == 1);
        CHECK(g.coefficients == naive_rs::generator(n_ec));
        for (int j = 0; j < n_ec; ++j)
            CHECK(g.eval(exp_alpha(j)) == 0);
        CHECK(g.eval(exp_alpha(n_ec)) != 0);
    }
    CHECK_THROWS_AS(rs_generator(0), std::invalid_argument);
    CHECK_THROWS_AS(rs_generator(69), std::invalid_argument);
}

TEST_CASE("rs_encode matches the oracle and its defining property") {
    CHECK(rs_encode(std::vector<uint8_t>{0x40}, 2) == std::vector<uint8_t>({0xC0, 0x80}));
    CHECK(rs_encode(std::vector<uint8_t>(5, 0), 4) == std::vector<uint8_t>(4, 0));
    CHECK_THROWS_AS(rs_encode(std::vector<uint8_t>{}, 2), std::invalid_argument);

    std::mt19937 rng(7003);
    std::uniform_int_distribution<int> byte(0, 255);
    for (int n_ec : {1, 2, 5, 7, 10, 13, 17, 22, 28, 30, 68}) {
        for (int round = 0; round < 20; ++round) {
            std::uniform_int_distribution<int> len(1, 100);
            std::vector<uint8_t> data(static_cast<std::size_t>(len(rng)));
            for (auto &v : data)
                v = static_cast<uint8_t>(byte(rng));
            std::vector<uint8_t> ec = rs_encode(data, n_ec);
            CHECK(ec == naive_rs::rs_encode(data, n_ec));

            // data || ec must vanish at every generator root.
            std::vector<uint8_t> block = data;
            block.insert(block.end(), ec.begin(), ec.end());
            GfPoly poly{block};
            for (int j = 0; j < n_ec; ++j)
                CHECK(poly.eval(exp_alpha(j)) == 0);
        }
    }
}

namespace {

std::vector<uint8_t> random_block(std::mt19937 &rng, int data_len, int n_ec) {
    std::uniform_int_distribution<int> byte(0, 255);
    std::vector<uint8_t> data(static_cast<std::size_t>(data_len));
    for (auto &v : data)
        v = static_cast<uint8_t>(byte(rng));
    std::vector<uint8_t> ec = rs_encode(data, n_ec);
    data.insert(data.end(), ec.begin(), ec.end());
    return data;
}

// Flips `count` distinct positions to strictly different values.
std::vector<uint8_t> corrupt(std::mt19937 &rng, std::vector<uint8_t> block, int count) {
    std::uniform_int_distribution<int> pos_dist(0, static_cast<int>(block.size()) - 1);
    std::uniform_int_distribution<int> delta(1, 255);
    std::set<int> positions;
    while (static_cast<int>(positions.size()) < count)
        positions.insert(pos_dist(rng));
    for (int p : positions)
        block[static_cast<std::size_t>(p)] ^= static_cast<uint8_t>(delta(rng));
    return block;
}

}  // namespace

TEST_CASE("rs_decode recovers up to capacity") {
    std::mt19937 rng(7004);
    for (int n_ec : {2, 4, 5, 10, 15, 30}) {
        int capacity = n_ec / 2;
        for (int e = 0; e <= capacity; ++e) {
            std::vector<uint8_t> block = random_block(rng, 12, n_ec);
            std::vector<uint8_t> received = corrupt(rng, block, e);
            RsDecodeResult result = rs_decode(received, n_ec);
            CHECK(result.corrected == block);
            CHECK(result.errors_fixed == e);
        }
    }
}

TEST_CASE("rs_decode beyond capacity fails or lands on another codeword") {
    std::mt19937 rng(7005);
    int rejected = 0;
    for (int round = 0; round < 60; ++round) {
        int n_ec = 10;
        std::vector<uint8_t> block = random_block(rng, 10, n_ec);
        std::vector<uint8_t> received = corrupt(rng, block, n_ec / 2 + 1);
        try {
            RsDecodeResult result = rs_decode(received, n_ec);
            // A returned result is never a silent wrong answer: it must be a
            // consistent codeword, and it cannot be the original (which is
            // further away than the correction radius).
            CHECK(result.corrected != block);
            std::vector<uint8_t> data(result.corrected.begin(),
                                      result.corrected.end() - n_ec);
            std::vector<uint8_t> ec(result.corrected.end() - n_ec,
                                    result.corrected.end());
            CHECK(rs_encode(data, n_ec) == ec);
        } catch (const Error &e) {
            CHECK(e.code() == Errc::DecodeFailure);
            ++rejected;
        }
    }
    CHECK(rejected > 0);
}

TEST_CASE("rs_decode agrees with brute-force nearest codeword on tiny blocks") {
    // k=2 data bytes: the whole codebook is enumerable. Minimum distance is
    // n_ec+1, so within floor(n_ec/2) the nearest codeword is unique.
    for (int n_ec : {3, 5}) {
        int capacity = n_ec / 2;
        std::vector<std::vector<uint8_t>> codebook;
        codebook.reserve(65536);
        for (int a = 0; a < 256; ++a)
            for (int b = 0; b < 256; ++b) {
                std::vector<uint8_t> data{static_cast<uint8_t>(a),
                                          static_cast<uint8_t>(b)};
                std::vector<uint8_t> ec = naive_rs::rs_encode(data, n_ec);
                data.insert(data.end(), ec.begin(), ec.end());
                codebook.push_back(std::move(data));
            }

        std::mt19937 rng(7006 + n_ec);
        std::uniform_int_distribution<int> byte(0, 255);
        int decodable = 0;
        int undecodable = 0;
        for (int round = 0; round < 120; ++round) {
            std::vector<uint8_t> received(static_cast<std::size_t>(2 + n_ec));
            if (round % 2 == 0) {
                // Half the rounds: start from a codeword and corrupt a few
                // positions so the decodable branch is exercised.
                received = codebook[static_cast<std::size_t>(
                    byte(rng) * 256 + byte(rng))];
                std::uniform_int_distribution<int> e_dist(0, capacity + 1);
                received = corrupt(rng, received, e_dist(rng));
            } else {
                for (auto &v : received)
                    v = static_cast<uint8_t>(byte(rng));
            }

            int best_distance = 999;
            std::size_t best_index = 0;
            for (std::size_t i = 0; i < codebook.size(); ++i) {
                int d = 0;
                for (std::size_t j = 0; j < received.size(); ++j)
                    d += codebook[i][j] != received[j];
                if (d < best_distance) {
                    best_distance = d;
                    best_index = i;
                }
            }

            if (best_distance <= capacity) {
                RsDecodeResult result = rs_decode(received, n_ec);
                CHECK(result.corrected == codebook[best_index]);
                CHECK(result.errors_fixed == best_distance);
                ++decodable;
            } else {
                CHECK_THROWS_AS(rs_decode(received, n_ec), Error);
                ++undecodable;
            }
        }
        CHECK(decodable > 0);
        CHECK(undecodable > 0);
    }
}
