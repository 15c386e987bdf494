#include <doctest.h>

#include <algorithm>
#include <bit>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "sdeqr/gf256.hpp"
#include "sdeqr/qrdecode.hpp"
#include "sdeqr/qrencode.hpp"

using namespace sdeqr;
using namespace sdeqr::qr;

namespace {

std::vector<uint8_t> random_payload(std::mt19937 &rng, std::size_t length) {
    std::uniform_int_distribution<int> byte(0, 255);
    std::vector<uint8_t> out(length);
    for (auto &b : out)
        b = static_cast<uint8_t>(byte(rng));
    return out;
}

// Builds a symbol from raw data codewords, bypassing segment assembly, so
// tests can plant malformed bitstreams behind valid error correction.
ModuleMatrix symbol_from_codewords(const std::vector<uint8_t> &data, int version,
                                   EcLevel ec, int mask) {
    ModuleMatrix matrix = build_function_patterns(version);
    place_data(matrix, interleave_blocks(data, version, ec));
    apply_mask(matrix, mask);
    draw_format(matrix, ec, mask);
    return matrix;
}

std::vector<uint8_t> pad_codewords(std::vector<uint8_t> head, int version, EcLevel ec) {
    bool first = true;
    while (head.size() < static_cast<std::size_t>(data_codewords(version, ec))) {
        head.push_back(first ? 0xEC : 0x11);
        first = !first;
    }
    return head;
}

}  // namespace

TEST_CASE("read_format round-trips all 32 words") {
    for (int e = 0; e < 4; ++e)
        for (int mask = 0; mask < 8; ++mask) {
            EcLevel ec = static_cast<EcLevel>(e);
            ModuleMatrix m = build_function_patterns(1);
            draw_format(m, ec, mask);
            auto [rec_ec, rec_mask] = read_format(m);
            CHECK(rec_ec == ec);
            CHECK(rec_mask == mask);
        }
}

TEST_CASE("read_format survives three damaged bits in one copy") {
    std::mt19937 rng(5601);
    auto copy1 = format_positions_copy1(21);
    for (int round = 0; round < 40; ++round) {
        EcLevel ec = static_cast<EcLevel>(round % 4);
        int mask = round % 8;
        ModuleMatrix m = build_function_patterns(1);
        draw_format(m, ec, mask);

        std::vector<int> idx(15);
        std::iota(idx.begin(), idx.end(), 0);
        std::shuffle(idx.begin(), idx.end(), rng);
        for (int k = 0; k < 3; ++k) {
            auto [r, c] = copy1[static_cast<std::size_t>(idx[static_cast<std::size_t>(k)])];
            m.set_function(r, c, !m.dark(r, c));
        }

        auto [rec_ec, rec_mask] = read_format(m);
        CHECK(rec_ec == ec);
        CHECK(rec_mask == mask);
    }
}

TEST_CASE("read_format rejects a word far from every codeword") {
    // Find a 15-bit word at distance >= 4 from all 32 format words; the
    // radius-3 balls cover fewer than half the space, so one exists.
    std::vector<uint16_t> words;
    for (int e = 0; e < 4; ++e)
        for (int mask = 0; mask < 8; ++mask)
            words.push_back(format_bits(static_cast<EcLevel>(e), mask));
    int bad = -1;
    for (int w = 0; w < (1 << 15) && bad < 0; ++w) {
        int closest = 15;
        for (uint16_t word : words)
            closest = std::min(closest, std::popcount(static_cast<unsigned>(w ^ word)));
        if (closest >= 4)
            bad = w;
    }
    REQUIRE(bad >= 0);

    ModuleMatrix m = build_function_patterns(1);
    auto copy1 = format_positions_copy1(21);
    auto copy2 = format_positions_copy2(21);
    for (int i = 0; i < 15; ++i) {
        bool bit = ((bad >> i) & 1) != 0;
        m.set_function(copy1[static_cast<std::size_t>(i)].first,
                       copy1[static_cast<std::size_t>(i)].second, bit);
        m.set_function(copy2[static_cast<std::size_t>(i)].first,
                       copy2[static_cast<std::size_t>(i)].second, bit);
    }
    try {
        read_format(m);
        FAIL("expected FormatUnreadable");
    } catch (const Error &e) {
        CHECK(e.code() == Errc::FormatUnreadable);
    }
}

TEST_CASE("extract_codewords inverts place_data under every mask") {
    std::mt19937 rng(5602);
    for (int version = 1; version <= 10; ++version) {
        std::vector<uint8_t> codewords =
            random_payload(rng, static_cast<std::size_t>(total_codewords(version)));
        for (int mask : {0, 3, 7}) {
            ModuleMatrix m = build_function_patterns(version);
            place_data(m, codewords);
            apply_mask(m, mask);
            CHECK(extract_codewords(m, version, mask) == codewords);
        }
    }
}

TEST_CASE("extraction depends on the mask argument") {
    std::mt19937 rng(5603);
    std::vector<uint8_t> codewords = random_payload(rng, 26);
    ModuleMatrix m = build_function_patterns(1);
    place_data(m, codewords);
    apply_mask(m, 4);
    CHECK(extract_codewords(m, 1, 4) == codewords);
    CHECK(extract_codewords(m, 1, 2) != codewords);
}

TEST_CASE("de_interleave inverts interleave_blocks everywhere") {
    std::mt19937 rng(5604);
    for (int version = 1; version <= 40; ++version) {
        for (EcLevel ec : {EcLevel::L, EcLevel::M, EcLevel::Q, EcLevel::H}) {
            BlockStructure bs = block_structure(version, ec);
            std::vector<uint8_t> data =
                random_payload(rng, static_cast<std::size_t>(bs.data_codewords()));
            std::vector<uint8_t> stream = interleave_blocks(data, version, ec);
            std::vector<std::vector<uint8_t>> blocks = de_interleave(stream, version, ec);
            REQUIRE(static_cast<int>(blocks.size()) == bs.num_blocks);

            std::size_t offset = 0;
            for (int b = 0; b < bs.num_blocks; ++b) {
                int n_data = bs.block_data_len(b);
                REQUIRE(static_cast<int>(blocks[static_cast<std::size_t>(b)].size()) ==
                        n_data + bs.ec_per_block);
                std::span<const uint8_t> block_data(blocks[static_cast<std::size_t>(b)]);
                CHECK(std::equal(block_data.begin(), block_data.begin() + n_data,
                                 data.begin() + static_cast<std::ptrdiff_t>(offset)));
                std::vector<uint8_t> ec_tail = gf256::rs_encode(
                    block_data.subspan(0, static_cast<std::size_t>(n_data)),
                    bs.ec_per_block);
                CHECK(std::equal(ec_tail.begin(), ec_tail.end(),
                                 block_data.begin() + n_data));
                offset += static_cast<std::size_t>(n_data);
            }
        }
    }
}

TEST_CASE("decode_symbol inverts encode_symbol across versions, levels, masks") {
    std::mt19937 rng(5605);
    for (int version = 1; version <= 10; ++version) {
        for (EcLevel ec : {EcLevel::L, EcLevel::M, EcLevel::Q, EcLevel::H}) {
            std::size_t capacity = static_cast<std::size_t>(data_codewords(version, ec));
            std::vector<uint8_t> payload = random_payload(rng, capacity - 4);
            for (int mask = 0; mask < 8; ++mask) {
                EncodeOptions options;
                options.ec = ec;
                options.forced_version = version;
                options.forced_mask = mask;
                EncodedSymbol symbol = encode_symbol(payload, options);
                DecodedSymbol decoded = decode_symbol(symbol.matrix);
                CHECK(decoded.payload == payload);
                CHECK(decoded.version == version);
                CHECK(decoded.ec == ec);
                CHECK(decoded.mask == mask);
                CHECK(decoded.errors_corrected == 0);
            }
        }
    }
}

TEST_CASE("decode_symbol with automatic version and mask selection") {
    std::string text = "module-level round trip with automatic choices 0123456789";
    std::vector<uint8_t> payload(text.begin(), text.end());
    EncodedSymbol symbol = encode_symbol(payload);
    DecodedSymbol decoded = decode_symbol(symbol.matrix);
    CHECK(decoded.payload == payload);
    CHECK(decoded.version == symbol.version);
    CHECK(decoded.mask == symbol.mask);
}

TEST_CASE("module damage within error correction capacity is repaired") {
    std::string text = "CORRECTION TEST PAYLOAD";
    std::vector<uint8_t> payload(text.begin(), text.end());
    EncodeOptions options;
    options.ec = EcLevel::H;
    EncodedSymbol symbol = encode_symbol(payload, options);

    ModuleMatrix damaged = symbol.matrix;
    int side = damaged.size();
    // The bottom-right corner modules are earliest in the placement walk,
    // so both flips land inside real codewords.
    damaged.flip(side - 1, side - 1);
    damaged.flip(side - 5, side - 1);

    DecodedSymbol decoded = decode_symbol(damaged);
    CHECK(decoded.payload == payload);
    CHECK(decoded.errors_corrected >= 1);
    CHECK(decoded.errors_corrected <= 4);
}

TEST_CASE("damage beyond capacity never yields the original payload silently") {
    std::string text = "damage check!";
    std::vector<uint8_t> payload(text.begin(), text.end());
    EncodeOptions options;
    options.ec = EcLevel::L;
    options.forced_version = 1;
    EncodedSymbol symbol = encode_symbol(payload, options);

    std::mt19937 rng(5606);
    std::uniform_int_distribution<int> coord(0, symbol.matrix.size() - 1);
    ModuleMatrix damaged = symbol.matrix;
    int flipped = 0;
    while (flipped < 60) {
        int r = coord(rng);
        int c = coord(rng);
        if (damaged.is_function(r, c))
            continue;
        damaged.flip(r, c);
        ++flipped;
    }

    bool recovered_original = false;
    try {
        DecodedSymbol decoded = decode_symbol(damaged);
        recovered_original = decoded.payload == payload;
    } catch (const Error &) {
    }
    CHECK_FALSE(recovered_original);
}

TEST_CASE("matrix sizes that match no version are rejected") {
    CHECK_THROWS_AS(decode_symbol(ModuleMatrix(20)), Error);
    CHECK_THROWS_AS(decode_symbol(ModuleMatrix(22)), Error);
    try {
        decode_symbol(ModuleMatrix(16));
        FAIL("expected MalformedInput");
    } catch (const Error &e) {
        CHECK(e.code() == Errc::MalformedInput);
    }
}

TEST_CASE("version information must agree with the matrix size") {
    std::vector<uint8_t> payload(90, 0x37);
    EncodeOptions options;
    options.ec = EcLevel::H;
    options.forced_version = 7;
    EncodedSymbol symbol = encode_symbol(payload, options);
    REQUIRE(decode_symbol(symbol.matrix).payload == payload);

    // Overwrite both version blocks with the version-8 pattern; the decoder
    // must notice that neither copy is near the version-7 word.
    ModuleMatrix lying = symbol.matrix;
    int side = lying.size();
    uint32_t wrong = version_bits(8);
    for (int i = 0; i < 18; ++i) {
        bool bit = ((wrong >> i) & 1) != 0;
        int a = side - 11 + i % 3;
        int b = i / 3;
        lying.set_function(b, a, bit);
        lying.set_function(a, b, bit);
    }
    CHECK_THROWS_AS(decode_symbol(lying), Error);

    // Three damaged bits in a single copy stay within tolerance.
    ModuleMatrix scuffed = symbol.matrix;
    for (int i = 0; i < 3; ++i) {
        int a = side - 11 + i % 3;
        int b = i / 3;
        scuffed.set_function(b, a, !scuffed.dark(b, a));
    }
    CHECK(decode_symbol(scuffed).payload == payload);
}

TEST_CASE("kanji and unknown mode indicators are rejected") {
    // Indicator 1000 (kanji) followed by a count field.
    std::vector<uint8_t> kanji = pad_codewords({0x80, 0x10, 0x00}, 1, EcLevel::L);
    ModuleMatrix km = symbol_from_codewords(kanji, 1, EcLevel::L, 0);
    try {
        decode_symbol(km);
        FAIL("expected MalformedBitstream");
    } catch (const Error &e) {
        CHECK(e.code() == Errc::MalformedBitstream);
        CHECK(std::string(e.what()).find("kanji") != std::string::npos);
    }

    // Indicator 0111 matches no supported segment mode.
    std::vector<uint8_t> unknown = pad_codewords({0x70, 0x00, 0x00}, 1, EcLevel::L);
    ModuleMatrix um = symbol_from_codewords(unknown, 1, EcLevel::L, 0);
    CHECK_THROWS_AS(decode_symbol(um), Error);
}

TEST_CASE("nonzero fill after the terminator is rejected") {
    // numeric "7": 0001 0000000001 0111, terminator 0000, then two fill
    // bits that must be zero set to 11.
    std::vector<uint8_t> bad_fill = pad_codewords({0x10, 0x05, 0xC3}, 1, EcLevel::L);
    ModuleMatrix m = symbol_from_codewords(bad_fill, 1, EcLevel::L, 0);
    try {
        decode_symbol(m);
        FAIL("expected MalformedBitstream");
    } catch (const Error &e) {
        CHECK(e.code() == Errc::MalformedBitstream);
    }

    // Same stream with clean fill decodes to the digit 7.
    std::vector<uint8_t> good = pad_codewords({0x10, 0x05, 0xC0}, 1, EcLevel::L);
    ModuleMatrix gm = symbol_from_codewords(good, 1, EcLevel::L, 0);
    DecodedSymbol decoded = decode_symbol(gm);
    CHECK(decoded.payload == std::vector<uint8_t>{'7'});
}

TEST_CASE("pad codewords must follow the alternating pattern") {
    std::vector<uint8_t> tampered = pad_codewords({0x10, 0x05, 0xC0}, 1, EcLevel::L);
    REQUIRE(tampered[7] == 0xEC);
    tampered[7] = 0xAB;
    ModuleMatrix m = symbol_from_codewords(tampered, 1, EcLevel::L, 0);
    try {
        decode_symbol(m);
        FAIL("expected MalformedBitstream");
    } catch (const Error &e) {
        CHECK(e.code() == Errc::MalformedBitstream);
        CHECK(std::string(e.what()).find("pad") != std::string::npos);
    }
}

TEST_CASE("numeric group values are range checked") {
    // A 3-digit numeric group holding 1000 cannot come from digits.
    // 0001 0000000011 1111101000 <terminator>
    std::vector<uint8_t> out_of_range =
        pad_codewords({0x10, 0x0F, 0xE8, 0x00}, 1, EcLevel::L);
    ModuleMatrix m = symbol_from_codewords(out_of_range, 1, EcLevel::L, 0);
    try {
        decode_symbol(m);
        FAIL("expected MalformedBitstream");
    } catch (const Error &e) {
        CHECK(e.code() == Errc::MalformedBitstream);
    }
}

TEST_CASE("alphanumeric payloads round trip through the matrix") {
    std::string text = "SDEQR TEST 0123456789 $%*+-./:";
    std::vector<uint8_t> payload(text.begin(), text.end());
    REQUIRE(select_mode(text) == Mode::Alphanumeric);
    EncodedSymbol symbol = encode_symbol(payload);
    DecodedSymbol decoded = decode_symbol(symbol.matrix);
    CHECK(decoded.payload == payload);
}

TEST_CASE("numeric payloads round trip through the matrix") {
    std::string text = "31415926535897932384626433832795028841971";
    std::vector<uint8_t> payload(text.begin(), text.end());
    REQUIRE(select_mode(text) == Mode::Numeric);
    for (int extra = 0; extra < 3; ++extra) {
        std::vector<uint8_t> p(payload.begin(),
                               payload.end() - static_cast<std::ptrdiff_t>(extra));
        EncodedSymbol symbol = encode_symbol(p);
        CHECK(decode_symbol(symbol.matrix).payload == p);
    }
}
