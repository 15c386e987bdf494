#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "sdeqr/parallel.hpp"
#include "sdeqr/qr.hpp"

namespace sdeqr::qr {

struct DecodedSymbol {
    std::vector<uint8_t> payload;
    int version = 0;
    EcLevel ec = EcLevel::H;
    int mask = 0;
    int errors_corrected = 0;
};

// Reads both format-info copies and BCH-corrects up to 3 bit errors; either
// copy suffices. Throws FormatUnreadable when neither decodes.
std::pair<EcLevel, int> read_format(const ModuleMatrix &matrix);

// Unmasks the data modules against a rebuilt function-pattern template and
// walks the zigzag placement back into the interleaved codeword sequence.
std::vector<uint8_t> extract_codewords(const ModuleMatrix &matrix, int version,
                                       int mask);

// Splits the interleaved sequence back into per-block (data + ec) codewords.
std::vector<std::vector<uint8_t>> de_interleave(std::span<const uint8_t> codewords,
                                                int version, EcLevel ec);

struct CorrectedData {
    std::vector<uint8_t> data;
    int errors_fixed = 0;
};

// RS-corrects each block and concatenates the data codewords in block order.
// The parallel policy decodes blocks concurrently with identical results.
CorrectedData correct_blocks(const std::vector<std::vector<uint8_t>> &blocks,
                             int version, EcLevel ec,
                             ExecPolicy policy = ExecPolicy::Serial);

// Parses the segment bit stream out of the data codewords; verifies the
// zero fill after the terminator and the alternating 0xEC/0x11 pads.
std::vector<uint8_t> parse_payload(const std::vector<uint8_t> &data, int version);

DecodedSymbol decode_symbol(const ModuleMatrix &matrix,
                            ExecPolicy policy = ExecPolicy::Serial);

}  // namespace sdeqr::qr
