#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "sdeqr/bitstream.hpp"
#include "sdeqr/parallel.hpp"
#include "sdeqr/qr.hpp"

namespace sdeqr::qr {

struct Segment {
    Mode mode = Mode::Byte;
    std::vector<uint8_t> data;

    std::size_t char_count() const { return data.size(); }
};

// Smallest applicable charset: Numeric, else Alphanumeric, else Byte.
// Kanji is never auto-selected.
Mode select_mode(std::string_view text);

Segment make_segment(std::span<const uint8_t> payload);

// Mode indicator + character count + payload bits.
BitWriter encode_segment(const Segment &segment, int version);

// Exact bit cost of a segment at a version (header width is band-dependent).
std::size_t segment_bit_length(const Segment &segment, int version);

// Smallest version whose data capacity holds the segments at the EC level.
int choose_version(std::span<const Segment> segments, EcLevel ec);

// Segment bits + terminator + byte padding + alternating pad codewords
// 0xEC/0x11 up to the data capacity of (version, ec).
std::vector<uint8_t> assemble_codewords(std::span<const Segment> segments, int version,
                                        EcLevel ec);

// Splits data codewords into RS blocks, appends EC codewords per block and
// interleaves both column-wise into the final transmission order.
std::vector<uint8_t> interleave_blocks(std::span<const uint8_t> data, int version,
                                       EcLevel ec);

// Finder, separator, timing and alignment patterns, the dark module, and
// reserved format/version areas (version info already drawn for v >= 7).
ModuleMatrix build_function_patterns(int version);

bool mask_predicate(int mask, int row, int col);

// Toggles every data module where the mask predicate holds. Involution.
void apply_mask(ModuleMatrix &matrix, int mask);

// Zigzag placement of codeword bits into the data modules.
void place_data(ModuleMatrix &matrix, std::span<const uint8_t> codewords);

// Four-rule score: same-color runs, 2x2 blocks, finder-like patterns, and
// dark-proportion deviation in 5% steps.
long penalty_score(const ModuleMatrix &matrix);

// 15-bit BCH-protected format word, XORed with the fixed mask pattern.
uint16_t format_bits(EcLevel ec, int mask);

// 18-bit BCH-protected version word; only versions 7..40 carry it.
uint32_t version_bits(int version);

void draw_format(ModuleMatrix &matrix, EcLevel ec, int mask);

// Bit positions (row, col) of one format-info copy, index = bit number.
std::array<std::pair<int, int>, 15> format_positions_copy1(int side);
std::array<std::pair<int, int>, 15> format_positions_copy2(int side);

// Minimum-penalty mask over all 8 candidates; ties break to the lowest id.
// The parallel policy scores candidates concurrently with identical results.
int choose_mask(const ModuleMatrix &placed, EcLevel ec, ExecPolicy policy,
                std::array<long, 8> *scores = nullptr);

struct EncodeOptions {
    EcLevel ec = EcLevel::H;
    int forced_mask = -1;    // -1 = choose by penalty
    int forced_version = 0;  // 0 = smallest fitting version
    ExecPolicy policy = ExecPolicy::Serial;
};

struct EncodedSymbol {
    ModuleMatrix matrix;
    int version = 0;
    EcLevel ec = EcLevel::H;
    int mask = 0;
};

EncodedSymbol encode_symbol(std::span<const uint8_t> payload,
                            const EncodeOptions &options = {});

}  // namespace sdeqr::qr
