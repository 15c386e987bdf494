#include "sdeqr/qrdecode.hpp"

#include <array>
#include <bit>
#include <exception>
#include <string>

#include "sdeqr/bitstream.hpp"
#include "sdeqr/gf256.hpp"
#include "sdeqr/qrencode.hpp"

namespace sdeqr::qr {

namespace {

uint16_t read_format_copy(const ModuleMatrix &m,
                          const std::array<std::pair<int, int>, 15> &positions) {
    uint16_t word = 0;
    for (int i = 0; i < 15; ++i) {
        auto [row, col] = positions[static_cast<std::size_t>(i)];
        if (m.dark(row, col))
            word |= static_cast<uint16_t>(1u << i);
    }
    return word;
}

}  // namespace

std::pair<EcLevel, int> read_format(const ModuleMatrix &matrix) {
    version_from_side(matrix.size());
    uint16_t copies[2] = {
        read_format_copy(matrix, format_positions_copy1(matrix.size())),
        read_format_copy(matrix, format_positions_copy2(matrix.size())),
    };

    // Nearest valid codeword over the 32-word space; the code has distance
    // 7, so up to 3 flipped bits per copy still decode unambiguously.
    int best_distance = 16;
    EcLevel best_ec = EcLevel::L;
    int best_mask = 0;
    for (int e = 0; e < 4; ++e) {
        for (int mask = 0; mask < 8; ++mask) {
            uint16_t word = format_bits(static_cast<EcLevel>(e), mask);
            for (uint16_t copy : copies) {
                int distance = std::popcount(static_cast<unsigned>(word ^ copy));
                if (distance < best_distance) {
                    best_distance = distance;
                    best_ec = static_cast<EcLevel>(e);
                    best_mask = mask;
                }
            }
        }
    }
    if (best_distance > 3)
        throw Error(Errc::FormatUnreadable, "format information beyond BCH capacity");
    return {best_ec, best_mask};
}

std::vector<uint8_t> extract_codewords(const ModuleMatrix &matrix, int version,
                                       int mask) {
    check_version(version);
    if (matrix.size() != side_of_version(version))
        throw Error(Errc::MalformedInput, "matrix size does not match the version");

    // Trust only the rebuilt template, not the input's function annotations.
    ModuleMatrix reference = build_function_patterns(version);
    int side = matrix.size();
    std::vector<uint8_t> codewords(static_cast<std::size_t>(total_codewords(version)), 0);
    std::size_t total_bits = codewords.size() * 8;

    std::size_t i = 0;
    for (int right = side - 1; right >= 1; right -= 2) {
        if (right == 6)
            right = 5;
        for (int vert = 0; vert < side; ++vert) {
            for (int j = 0; j < 2; ++j) {
                int col = right - j;
                bool upward = ((right + 1) & 2) == 0;
                int row = upward ? side - 1 - vert : vert;
                if (!reference.is_function(row, col) && i < total_bits) {
                    bool bit = matrix.dark(row, col) ^ mask_predicate(mask, row, col);
                    if (bit)
                        codewords[i >> 3] |= static_cast<uint8_t>(1u << (7 - (i & 7)));
                    ++i;
                }
            }
        }
    }
    if (i != total_bits)
        throw std::logic_error("module count does not match the codeword total");
    return codewords;
}

std::vector<std::vector<uint8_t>> de_interleave(std::span<const uint8_t> codewords,
                                                int version, EcLevel ec) {
    BlockStructure bs = block_structure(version, ec);
    if (codewords.size() != static_cast<std::size_t>(bs.total()))
        throw Error(Errc::MalformedInput, "codeword count does not match the version");

    std::vector<std::vector<uint8_t>> blocks(static_cast<std::size_t>(bs.num_blocks));
    for (int b = 0; b < bs.num_blocks; ++b)
        blocks[static_cast<std::size_t>(b)].reserve(
            static_cast<std::size_t>(bs.block_data_len(b) + bs.ec_per_block));

    std::size_t pos = 0;
    int longest = bs.short_block_data + (bs.num_short_blocks < bs.num_blocks ? 1 : 0);
    for (int i = 0; i < longest; ++i)
        for (int b = 0; b < bs.num_blocks; ++b)
            if (i < bs.block_data_len(b))
                blocks[static_cast<std::size_t>(b)].push_back(codewords[pos++]);
    for (int i = 0; i < bs.ec_per_block; ++i)
        for (int b = 0; b < bs.num_blocks; ++b)
            blocks[static_cast<std::size_t>(b)].push_back(codewords[pos++]);
    return blocks;
}

CorrectedData correct_blocks(const std::vector<std::vector<uint8_t>> &blocks,
                             int version, EcLevel ec, ExecPolicy policy) {
    BlockStructure bs = block_structure(version, ec);
    if (blocks.size() != static_cast<std::size_t>(bs.num_blocks))
        throw Error(Errc::MalformedInput, "block count does not match the version");

    std::vector<gf256::RsDecodeResult> results(blocks.size());
    if (policy == ExecPolicy::Parallel) {
#ifdef SDEQR_HAVE_OPENMP
        std::exception_ptr failure;
#pragma omp parallel for schedule(static)
        for (int b = 0; b < bs.num_blocks; ++b) {
            try {
                results[static_cast<std::size_t>(b)] =
                    gf256::rs_decode(blocks[static_cast<std::size_t>(b)], bs.ec_per_block);
            } catch (...) {
#pragma omp critical
                if (!failure)
                    failure = std::current_exception();
            }
        }
        if (failure)
            std::rethrow_exception(failure);
#else
        for (int b = 0; b < bs.num_blocks; ++b)
            results[static_cast<std::size_t>(b)] =
                gf256::rs_decode(blocks[static_cast<std::size_t>(b)], bs.ec_per_block);
#endif
    } else {
        for (int b = 0; b < bs.num_blocks; ++b)
            results[static_cast<std::size_t>(b)] =
                gf256::rs_decode(blocks[static_cast<std::size_t>(b)], bs.ec_per_block);
    }

    CorrectedData out;
    out.data.reserve(static_cast<std::size_t>(bs.data_codewords()));
    for (int b = 0; b < bs.num_blocks; ++b) {
        const auto &r = results[static_cast<std::size_t>(b)];
        out.data.insert(out.data.end(), r.corrected.begin(),
                        r.corrected.begin() + bs.block_data_len(b));
        out.errors_fixed += r.errors_fixed;
    }
    return out;
}

std::vector<uint8_t> parse_payload(const std::vector<uint8_t> &data, int version) {
    check_version(version);
    BitReader bits(data);
    std::vector<uint8_t> payload;

    bool terminated = false;
    while (!terminated) {
        if (bits.remaining() < 4)
            break;  // Implicit terminator: too few bits for another segment.
        uint32_t indicator = bits.read_bits(4);
        if (indicator == 0) {
            terminated = true;
            break;
        }
        Mode mode;
        switch (indicator) {
            case 0b0001: mode = Mode::Numeric; break;
            case 0b0010: mode = Mode::Alphanumeric; break;
            case 0b0100: mode = Mode::Byte; break;
            case 0b1000:
                throw Error(Errc::MalformedBitstream, "kanji segments are not supported");
            default:
                throw Error(Errc::MalformedBitstream,
                            "unknown mode indicator " + std::to_string(indicator));
        }
        int count_width = char_count_bits(version, mode);
        if (bits.remaining() < static_cast<std::size_t>(count_width))
            throw Error(Errc::MalformedBitstream, "truncated character count");
        uint32_t count = bits.read_bits(count_width);

        switch (mode) {
            case Mode::Numeric: {
                uint32_t left = count;
                while (left > 0) {
                    int digits = left >= 3 ? 3 : static_cast<int>(left);
                    int width = digits == 3 ? 10 : digits == 2 ? 7 : 4;
                    if (bits.remaining() < static_cast<std::size_t>(width))
                        throw Error(Errc::MalformedBitstream, "truncated numeric group");
                    uint32_t value = bits.read_bits(width);
                    uint32_t limit = digits == 3 ? 1000 : digits == 2 ? 100 : 10;
                    if (value >= limit)
                        throw Error(Errc::MalformedBitstream, "numeric group out of range");
                    char text[4] = {};
                    for (int i = digits - 1; i >= 0; --i) {
                        text[i] = static_cast<char>('0' + value % 10);
                        value /= 10;
                    }
                    for (int i = 0; i < digits; ++i)
                        payload.push_back(static_cast<uint8_t>(text[i]));
                    left -= static_cast<uint32_t>(digits);
                }
                break;
            }
            case Mode::Alphanumeric: {
                uint32_t left = count;
                while (left > 0) {
                    if (left >= 2) {
                        if (bits.remaining() < 11)
                            throw Error(Errc::MalformedBitstream,
                                        "truncated alphanumeric pair");
                        uint32_t value = bits.read_bits(11);
                        if (value >= 45 * 45)
                            throw Error(Errc::MalformedBitstream,
                                        "alphanumeric pair out of range");
                        payload.push_back(
                            static_cast<uint8_t>(kAlphanumericCharset[value / 45]));
                        payload.push_back(
                            static_cast<uint8_t>(kAlphanumericCharset[value % 45]));
                        left -= 2;
                    } else {
                        if (bits.remaining() < 6)
                            throw Error(Errc::MalformedBitstream,
                                        "truncated alphanumeric character");
                        uint32_t value = bits.read_bits(6);
                        if (value >= 45)
                            throw Error(Errc::MalformedBitstream,
                                        "alphanumeric value out of range");
                        payload.push_back(static_cast<uint8_t>(kAlphanumericCharset[value]));
                        left -= 1;
                    }
                }
                break;
            }
            case Mode::Byte:
                if (bits.remaining() < static_cast<std::size_t>(count) * 8)
                    throw Error(Errc::MalformedBitstream, "truncated byte segment");
                for (uint32_t i = 0; i < count; ++i)
                    payload.push_back(static_cast<uint8_t>(bits.read_bits(8)));
                break;
            case Mode::Kanji:
                break;  // unreachable
        }
    }

    // Whatever follows the terminator must be the zero fill to the byte
    // boundary and then the alternating pad codewords.
    while (bits.position() % 8 != 0) {
        if (bits.read_bit())
            throw Error(Errc::MalformedBitstream, "nonzero fill after terminator");
    }
    uint8_t expected = 0xEC;
    while (bits.remaining() >= 8) {
        if (bits.read_bits(8) != expected)
            throw Error(Errc::MalformedBitstream, "unexpected pad codeword");
        expected = expected == 0xEC ? 0x11 : 0xEC;
    }
    return payload;
}

DecodedSymbol decode_symbol(const ModuleMatrix &matrix, ExecPolicy policy) {
    int version = version_from_side(matrix.size());

    if (version >= 7) {
        uint32_t expected = version_bits(version);
        int side = matrix.size();
        uint32_t copy_a = 0;
        uint32_t copy_b = 0;
        for (int i = 0; i < 18; ++i) {
            int a = side - 11 + i % 3;
            int b = i / 3;
            if (matrix.dark(b, a))
                copy_a |= 1u << i;
            if (matrix.dark(a, b))
                copy_b |= 1u << i;
        }
        // Each copy independently tolerates up to 3 flipped bits.
        if (std::popcount(copy_a ^ expected) > 3 && std::popcount(copy_b ^ expected) > 3)
            throw Error(Errc::MalformedInput,
                        "version information disagrees with the matrix size");
    }

    auto [ec, mask] = read_format(matrix);
    std::vector<uint8_t> codewords = extract_codewords(matrix, version, mask);
    std::vector<std::vector<uint8_t>> blocks = de_interleave(codewords, version, ec);
    CorrectedData corrected = correct_blocks(blocks, version, ec, policy);
    std::vector<uint8_t> payload = parse_payload(corrected.data, version);

    DecodedSymbol out;
    out.payload = std::move(payload);
    out.version = version;
    out.ec = ec;
    out.mask = mask;
    out.errors_corrected = corrected.errors_fixed;
    return out;
}

}  // namespace sdeqr::qr
