#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "sdeqr/error.hpp"

namespace sdeqr::qr {

inline constexpr int kMinVersion = 1;
inline constexpr int kMaxVersion = 40;

enum class Mode { Numeric = 0, Alphanumeric = 1, Byte = 2, Kanji = 3 };

// 4-bit mode indicator written at the head of each segment.
constexpr int mode_indicator(Mode mode) {
    switch (mode) {
        case Mode::Numeric: return 0b0001;
        case Mode::Alphanumeric: return 0b0010;
        case Mode::Byte: return 0b0100;
        case Mode::Kanji: return 0b1000;
    }
    return 0;
}

enum class EcLevel { L = 0, M = 1, Q = 2, H = 3 };

// Two-bit field in the format information.
constexpr int ec_format_bits(EcLevel ec) {
    switch (ec) {
        case EcLevel::L: return 0b01;
        case EcLevel::M: return 0b00;
        case EcLevel::Q: return 0b11;
        case EcLevel::H: return 0b10;
    }
    return 0;
}

const char *ec_name(EcLevel ec);
EcLevel ec_from_name(const std::string &name);

constexpr int side_of_version(int version) { return version * 4 + 17; }

// Side length back to version; throws MalformedInput when no version fits.
int version_from_side(int side);

void check_version(int version);

// Character count field width per version band and mode.
int char_count_bits(int version, Mode mode);

// Codeword totals of a version, independent of EC level.
int total_codewords(int version);
int remainder_bits(int version);

// Per (version, ec) split into RS blocks. Short blocks precede long blocks,
// which carry one data codeword more.
struct BlockStructure {
    int num_blocks = 0;
    int ec_per_block = 0;
    int short_block_data = 0;
    int num_short_blocks = 0;

    int data_codewords() const {
        return num_blocks * short_block_data + (num_blocks - num_short_blocks);
    }
    int total() const { return data_codewords() + num_blocks * ec_per_block; }
    int block_data_len(int block) const {
        return short_block_data + (block < num_short_blocks ? 0 : 1);
    }
};

BlockStructure block_structure(int version, EcLevel ec);

int data_codewords(int version, EcLevel ec);

// Alignment pattern center coordinates for a version (empty for v1).
const std::vector<int> &alignment_positions(int version);

// The 45-character alphanumeric set, in value order.
extern const char kAlphanumericCharset[46];

// Value 0-44 for an alphanumeric character, -1 otherwise.
int alphanumeric_value(char c);

// Square module grid. Function modules are the reserved ones (finder,
// timing, alignment, format/version areas, dark module); masking and data
// placement never touch them.
class ModuleMatrix {
public:
    ModuleMatrix() = default;
    explicit ModuleMatrix(int size)
        : size_(size), dark_(static_cast<std::size_t>(size) * size, 0),
          function_(static_cast<std::size_t>(size) * size, 0) {}

    int size() const { return size_; }

    bool dark(int row, int col) const { return dark_[index(row, col)] != 0; }
    void set_dark(int row, int col, bool dark) { dark_[index(row, col)] = dark ? 1 : 0; }
    void flip(int row, int col) { dark_[index(row, col)] ^= 1; }

    bool is_function(int row, int col) const { return function_[index(row, col)] != 0; }
    void set_function(int row, int col, bool dark) {
        dark_[index(row, col)] = dark ? 1 : 0;
        function_[index(row, col)] = 1;
    }

    int count_dark() const {
        int n = 0;
        for (uint8_t d : dark_)
            n += d;
        return n;
    }
    int count_data_modules() const {
        int n = 0;
        for (uint8_t f : function_)
            n += f == 0;
        return n;
    }

    bool operator==(const ModuleMatrix &) const = default;

private:
    std::size_t index(int row, int col) const {
        return static_cast<std::size_t>(row) * static_cast<std::size_t>(size_) +
               static_cast<std::size_t>(col);
    }

    int size_ = 0;
    std::vector<uint8_t> dark_;
    std::vector<uint8_t> function_;
};

}  // namespace sdeqr::qr
