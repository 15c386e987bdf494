#include "sdeqr/qrencode.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <exception>
#include <stdexcept>
#include <utility>

#include "sdeqr/gf256.hpp"

#ifdef SDEQR_HAVE_OPENMP
#include <omp.h>
#endif

namespace sdeqr::qr {

Mode select_mode(std::string_view text) {
    if (text.empty())
        throw Error(Errc::EmptyInput, "cannot select a mode for empty input");
    bool numeric = true;
    bool alphanumeric = true;
    for (char c : text) {
        if (c < '0' || c > '9')
            numeric = false;
        if (alphanumeric_value(c) < 0)
            alphanumeric = false;
    }
    if (numeric)
        return Mode::Numeric;
    if (alphanumeric)
        return Mode::Alphanumeric;
    return Mode::Byte;
}

Segment make_segment(std::span<const uint8_t> payload) {
    if (payload.empty())
        throw Error(Errc::EmptyInput, "cannot encode an empty payload");
    std::string_view text(reinterpret_cast<const char *>(payload.data()), payload.size());
    Segment segment;
    segment.mode = select_mode(text);
    segment.data.assign(payload.begin(), payload.end());
    return segment;
}

std::size_t segment_bit_length(const Segment &segment, int version) {
    std::size_t n = segment.data.size();
    std::size_t payload_bits = 0;
    switch (segment.mode) {
        case Mode::Numeric:
            payload_bits = (n / 3) * 10 + (n % 3 == 2 ? 7 : n % 3 == 1 ? 4 : 0);
            break;
        case Mode::Alphanumeric:
            payload_bits = (n / 2) * 11 + (n % 2) * 6;
            break;
        case Mode::Byte:
            payload_bits = n * 8;
            break;
        case Mode::Kanji:
            throw Error(Errc::InvalidCharacter, "kanji segments are not produced");
    }
    return 4 + static_cast<std::size_t>(char_count_bits(version, segment.mode)) +
           payload_bits;
}

BitWriter encode_segment(const Segment &segment, int version) {
    check_version(version);
    if (segment.data.empty())
        throw Error(Errc::EmptyInput, "cannot encode an empty segment");

    BitWriter bits;
    bits.append_bits(static_cast<uint32_t>(mode_indicator(segment.mode)), 4);
    int count_bits = char_count_bits(version, segment.mode);
    std::size_t count = segment.char_count();
    if (count >= (1u << count_bits))
        throw Error(Errc::TooLarge, "segment length does not fit its count field");
    bits.append_bits(static_cast<uint32_t>(count), count_bits);

    const auto &data = segment.data;
    switch (segment.mode) {
        case Mode::Numeric: {
            std::size_t i = 0;
            while (i < data.size()) {
                std::size_t group = std::min<std::size_t>(3, data.size() - i);
                uint32_t value = 0;
                for (std::size_t j = 0; j < group; ++j) {
                    char c = static_cast<char>(data[i + j]);
                    if (c < '0' || c > '9')
                        throw Error(Errc::InvalidCharacter,
                                    "non-digit in numeric segment");
                    value = value * 10 + static_cast<uint32_t>(c - '0');
                }
                bits.append_bits(value, group == 3 ? 10 : group == 2 ? 7 : 4);
                i += group;
            }
            break;
        }
        case Mode::Alphanumeric: {
            std::size_t i = 0;
            while (i < data.size()) {
                int a = alphanumeric_value(static_cast<char>(data[i]));
                if (a < 0)
                    throw Error(Errc::InvalidCharacter,
                                "character outside the alphanumeric set");
                if (i + 1 < data.size()) {
                    int b = alphanumeric_value(static_cast<char>(data[i + 1]));
                    if (b < 0)
                        throw Error(Errc::InvalidCharacter,
                                    "character outside the alphanumeric set");
                    bits.append_bits(static_cast<uint32_t>(a * 45 + b), 11);
                    i += 2;
                } else {
                    bits.append_bits(static_cast<uint32_t>(a), 6);
                    i += 1;
                }
            }
            break;
        }
        case Mode::Byte:
            for (uint8_t b : data)
                bits.append_bits(b, 8);
            break;
        case Mode::Kanji:
            throw Error(Errc::InvalidCharacter, "kanji segments are not produced");
    }
    return bits;
}

int choose_version(std::span<const Segment> segments, EcLevel ec) {
    if (segments.empty())
        throw Error(Errc::EmptyInput, "no segments to place");
    for (int version = kMinVersion; version <= kMaxVersion; ++version) {
        std::size_t capacity = static_cast<std::size_t>(data_codewords(version, ec)) * 8;
        std::size_t needed = 0;
        for (const Segment &s : segments)
            needed += segment_bit_length(s, version);
        if (needed <= capacity)
            return version;
    }
    throw Error(Errc::TooLarge, "payload does not fit any symbol version");
}

std::vector<uint8_t> assemble_codewords(std::span<const Segment> segments, int version,
                                        EcLevel ec) {
    check_version(version);
    if (segments.empty())
        throw Error(Errc::EmptyInput, "no segments to place");

    std::size_t capacity = static_cast<std::size_t>(data_codewords(version, ec)) * 8;
    BitWriter bits;
    for (const Segment &s : segments) {
        BitWriter part = encode_segment(s, version);
        for (std::size_t i = 0; i < part.bit_length(); ++i)
            bits.append_bit((part.bytes()[i >> 3] >> (7 - (i & 7))) & 1);
    }
    if (bits.bit_length() > capacity)
        throw Error(Errc::TooLarge, "segments exceed the data capacity");

    // Terminator: up to four zero bits, fewer when capacity is tight.
    std::size_t terminator = std::min<std::size_t>(4, capacity - bits.bit_length());
    bits.append_bits(0, static_cast<int>(terminator));
    while (bits.bit_length() % 8 != 0)
        bits.append_bit(false);

    std::vector<uint8_t> codewords = bits.bytes();
    uint8_t pad = 0xEC;
    while (codewords.size() * 8 < capacity) {
        codewords.push_back(pad);
        pad = pad == 0xEC ? 0x11 : 0xEC;
    }
    return codewords;
}

std::vector<uint8_t> interleave_blocks(std::span<const uint8_t> data, int version,
                                       EcLevel ec) {
    BlockStructure bs = block_structure(version, ec);
    if (data.size() != static_cast<std::size_t>(bs.data_codewords()))
        throw std::invalid_argument("data codeword count does not match the version");

    std::vector<std::span<const uint8_t>> blocks;
    std::vector<std::vector<uint8_t>> ec_blocks;
    blocks.reserve(static_cast<std::size_t>(bs.num_blocks));
    ec_blocks.reserve(static_cast<std::size_t>(bs.num_blocks));
    std::size_t offset = 0;
    for (int b = 0; b < bs.num_blocks; ++b) {
        std::size_t len = static_cast<std::size_t>(bs.block_data_len(b));
        std::span<const uint8_t> block = data.subspan(offset, len);
        offset += len;
        blocks.push_back(block);
        ec_blocks.push_back(gf256::rs_encode(block, bs.ec_per_block));
    }

    std::vector<uint8_t> out;
    out.reserve(static_cast<std::size_t>(bs.total()));
    int longest = bs.short_block_data + (bs.num_short_blocks < bs.num_blocks ? 1 : 0);
    for (int i = 0; i < longest; ++i)
        for (int b = 0; b < bs.num_blocks; ++b)
            if (i < bs.block_data_len(b))
                out.push_back(blocks[static_cast<std::size_t>(b)][static_cast<std::size_t>(i)]);
    for (int i = 0; i < bs.ec_per_block; ++i)
        for (int b = 0; b < bs.num_blocks; ++b)
            out.push_back(ec_blocks[static_cast<std::size_t>(b)][static_cast<std::size_t>(i)]);
    return out;
}

namespace {

// 9x9 stamp centered on a finder position; ring at distance 2 and the
// separator at distance 4 stay light. Cells outside the grid are clipped.
void draw_finder(ModuleMatrix &m, int row, int col) {
    for (int dr = -4; dr <= 4; ++dr) {
        for (int dc = -4; dc <= 4; ++dc) {
            int r = row + dr;
            int c = col + dc;
            if (r < 0 || r >= m.size() || c < 0 || c >= m.size())
                continue;
            int dist = std::max(std::abs(dr), std::abs(dc));
            m.set_function(r, c, dist != 2 && dist != 4);
        }
    }
}

void draw_alignment(ModuleMatrix &m, int row, int col) {
    for (int dr = -2; dr <= 2; ++dr)
        for (int dc = -2; dc <= 2; ++dc)
            m.set_function(row + dr, col + dc, std::max(std::abs(dr), std::abs(dc)) != 1);
}

}  // namespace

uint16_t format_bits(EcLevel ec, int mask) {
    if (mask < 0 || mask > 7)
        throw std::invalid_argument("mask id out of range");
    int data = ec_format_bits(ec) << 3 | mask;
    int rem = data;
    for (int i = 0; i < 10; ++i)
        rem = (rem << 1) ^ ((rem >> 9) * 0x537);
    return static_cast<uint16_t>(((data << 10 | rem) ^ 0x5412) & 0x7FFF);
}

uint32_t version_bits(int version) {
    if (version < 7 || version > kMaxVersion)
        throw std::invalid_argument("only versions 7-40 carry version info");
    uint32_t rem = static_cast<uint32_t>(version);
    for (int i = 0; i < 12; ++i)
        rem = (rem << 1) ^ ((rem >> 11) * 0x1F25);
    return (static_cast<uint32_t>(version) << 12 | rem) & 0x3FFFF;
}

std::array<std::pair<int, int>, 15> format_positions_copy1(int side) {
    (void)side;
    std::array<std::pair<int, int>, 15> pos{};
    for (int i = 0; i <= 5; ++i)
        pos[static_cast<std::size_t>(i)] = {i, 8};
    pos[6] = {7, 8};
    pos[7] = {8, 8};
    pos[8] = {8, 7};
    for (int i = 9; i < 15; ++i)
        pos[static_cast<std::size_t>(i)] = {8, 14 - i};
    return pos;
}

std::array<std::pair<int, int>, 15> format_positions_copy2(int side) {
    std::array<std::pair<int, int>, 15> pos{};
    for (int i = 0; i < 8; ++i)
        pos[static_cast<std::size_t>(i)] = {8, side - 1 - i};
    for (int i = 8; i < 15; ++i)
        pos[static_cast<std::size_t>(i)] = {side - 15 + i, 8};
    return pos;
}

void draw_format(ModuleMatrix &matrix, EcLevel ec, int mask) {
    uint16_t bits = format_bits(ec, mask);
    auto copy1 = format_positions_copy1(matrix.size());
    auto copy2 = format_positions_copy2(matrix.size());
    for (int i = 0; i < 15; ++i) {
        bool bit = (bits >> i) & 1;
        matrix.set_function(copy1[static_cast<std::size_t>(i)].first,
                            copy1[static_cast<std::size_t>(i)].second, bit);
        matrix.set_function(copy2[static_cast<std::size_t>(i)].first,
                            copy2[static_cast<std::size_t>(i)].second, bit);
    }
}

ModuleMatrix build_function_patterns(int version) {
    check_version(version);
    int side = side_of_version(version);
    ModuleMatrix m(side);

    for (int i = 0; i < side; ++i) {
        m.set_function(6, i, i % 2 == 0);
        m.set_function(i, 6, i % 2 == 0);
    }
    draw_finder(m, 3, 3);
    draw_finder(m, 3, side - 4);
    draw_finder(m, side - 4, 3);

    const std::vector<int> &centers = alignment_positions(version);
    std::size_t n = centers.size();
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            bool corner = (i == 0 && j == 0) || (i == 0 && j == n - 1) ||
                          (i == n - 1 && j == 0);
            if (!corner)
                draw_alignment(m, centers[i], centers[j]);
        }
    }

    // Reserve both format copies; real values are drawn after masking.
    draw_format(m, EcLevel::L, 0);
    m.set_function(4 * version + 9, 8, true);

    if (version >= 7) {
        uint32_t bits = version_bits(version);
        for (int i = 0; i < 18; ++i) {
            bool bit = (bits >> i) & 1;
            int a = side - 11 + i % 3;
            int b = i / 3;
            m.set_function(b, a, bit);
            m.set_function(a, b, bit);
        }
    }
    return m;
}

bool mask_predicate(int mask, int row, int col) {
    switch (mask) {
        case 0: return (row + col) % 2 == 0;
        case 1: return row % 2 == 0;
        case 2: return col % 3 == 0;
        case 3: return (row + col) % 3 == 0;
        case 4: return (row / 2 + col / 3) % 2 == 0;
        case 5: return row * col % 2 + row * col % 3 == 0;
        case 6: return (row * col % 2 + row * col % 3) % 2 == 0;
        case 7: return ((row + col) % 2 + row * col % 3) % 2 == 0;
        default: throw std::invalid_argument("mask id out of range");
    }
}

void apply_mask(ModuleMatrix &matrix, int mask) {
    if (mask < 0 || mask > 7)
        throw std::invalid_argument("mask id out of range");
    for (int row = 0; row < matrix.size(); ++row)
        for (int col = 0; col < matrix.size(); ++col)
            if (!matrix.is_function(row, col) && mask_predicate(mask, row, col))
                matrix.flip(row, col);
}

void place_data(ModuleMatrix &matrix, std::span<const uint8_t> codewords) {
    int side = matrix.size();
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
                if (!matrix.is_function(row, col) && i < total_bits) {
                    bool bit = (codewords[i >> 3] >> (7 - (i & 7))) & 1;
                    matrix.set_dark(row, col, bit);
                    ++i;
                }
                // Remainder bits stay light.
            }
        }
    }
    if (i != total_bits)
        throw std::logic_error("codeword count does not match the data modules");
}

long penalty_score(const ModuleMatrix &matrix) {
    const int side = matrix.size();
    long score = 0;

    // Rule 1: runs of 5+ same-colored modules in a row or column.
    for (int row = 0; row < side; ++row) {
        int run = 1;
        for (int col = 1; col <= side; ++col) {
            if (col < side && matrix.dark(row, col) == matrix.dark(row, col - 1)) {
                ++run;
            } else {
                if (run >= 5)
                    score += 3 + (run - 5);
                run = 1;
            }
        }
    }
    for (int col = 0; col < side; ++col) {
        int run = 1;
        for (int row = 1; row <= side; ++row) {
            if (row < side && matrix.dark(row, col) == matrix.dark(row - 1, col)) {
                ++run;
            } else {
                if (run >= 5)
                    score += 3 + (run - 5);
                run = 1;
            }
        }
    }

    // Rule 2: every 2x2 block of a single color.
    for (int row = 0; row + 1 < side; ++row)
        for (int col = 0; col + 1 < side; ++col) {
            bool d = matrix.dark(row, col);
            if (d == matrix.dark(row, col + 1) && d == matrix.dark(row + 1, col) &&
                d == matrix.dark(row + 1, col + 1))
                score += 3;
        }

    // Rule 3: 1:1:3:1:1 finder-like run with a 4-module light margin on
    // either side, horizontally and vertically.
    for (int row = 0; row < side; ++row) {
        uint32_t window = 0;
        for (int col = 0; col < side; ++col) {
            window = ((window << 1) | (matrix.dark(row, col) ? 1u : 0u)) & 0x7FF;
            if (col >= 10 && (window == 0x05D || window == 0x5D0))
                score += 40;
        }
    }
    for (int col = 0; col < side; ++col) {
        uint32_t window = 0;
        for (int row = 0; row < side; ++row) {
            window = ((window << 1) | (matrix.dark(row, col) ? 1u : 0u)) & 0x7FF;
            if (row >= 10 && (window == 0x05D || window == 0x5D0))
                score += 40;
        }
    }

    // Rule 4: ten points per 5% step the dark share deviates from 50%.
    long dark = matrix.count_dark();
    long total = static_cast<long>(side) * side;
    long k = std::labs(dark * 20 - total * 10) / total;
    score += 10 * k;
    return score;
}

int choose_mask(const ModuleMatrix &placed, EcLevel ec, ExecPolicy policy,
                std::array<long, 8> *scores) {
    std::array<long, 8> penalties{};
    auto score_one = [&](int mask) {
        ModuleMatrix candidate = placed;
        apply_mask(candidate, mask);
        draw_format(candidate, ec, mask);
        return penalty_score(candidate);
    };

    if (policy == ExecPolicy::Parallel) {
#ifdef SDEQR_HAVE_OPENMP
        std::exception_ptr failure;
#pragma omp parallel for schedule(static)
        for (int mask = 0; mask < 8; ++mask) {
            try {
                penalties[static_cast<std::size_t>(mask)] = score_one(mask);
            } catch (...) {
#pragma omp critical
                if (!failure)
                    failure = std::current_exception();
            }
        }
        if (failure)
            std::rethrow_exception(failure);
#else
        for (int mask = 0; mask < 8; ++mask)
            penalties[static_cast<std::size_t>(mask)] = score_one(mask);
#endif
    } else {
        for (int mask = 0; mask < 8; ++mask)
            penalties[static_cast<std::size_t>(mask)] = score_one(mask);
    }

    int best = 0;
    for (int mask = 1; mask < 8; ++mask)
        if (penalties[static_cast<std::size_t>(mask)] <
            penalties[static_cast<std::size_t>(best)])
            best = mask;
    if (scores != nullptr)
        *scores = penalties;
    return best;
}

EncodedSymbol encode_symbol(std::span<const uint8_t> payload,
                            const EncodeOptions &options) {
    Segment segment = make_segment(payload);
    std::span<const Segment> segments(&segment, 1);

    int version;
    if (options.forced_version != 0) {
        check_version(options.forced_version);
        std::size_t capacity =
            static_cast<std::size_t>(data_codewords(options.forced_version, options.ec)) * 8;
        if (segment_bit_length(segment, options.forced_version) > capacity)
            throw Error(Errc::InvalidForcedVersion,
                        "payload does not fit the forced version");
        version = options.forced_version;
    } else {
        version = choose_version(segments, options.ec);
    }

    std::vector<uint8_t> data = assemble_codewords(segments, version, options.ec);
    std::vector<uint8_t> codewords = interleave_blocks(data, version, options.ec);

    ModuleMatrix matrix = build_function_patterns(version);
    place_data(matrix, codewords);

    int mask = options.forced_mask;
    if (mask < 0)
        mask = choose_mask(matrix, options.ec, options.policy);
    else if (mask > 7)
        throw std::invalid_argument("mask id out of range");

    apply_mask(matrix, mask);
    draw_format(matrix, options.ec, mask);

    return {std::move(matrix), version, options.ec, mask};
}

}  // namespace sdeqr::qr
