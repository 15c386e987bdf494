#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "sdeqr/error.hpp"

namespace sdeqr {

// Append-only MSB-first bit sequence. Length is tracked in bits, not bytes.
class BitWriter {
public:
    void append_bit(bool bit) {
        if (bit_len_ % 8 == 0)
            bytes_.push_back(0);
        if (bit)
            bytes_.back() |= static_cast<uint8_t>(1u << (7 - bit_len_ % 8));
        ++bit_len_;
    }

    // Appends the low `count` bits of `value`, most significant first.
    void append_bits(uint32_t value, int count) {
        for (int i = count - 1; i >= 0; --i)
            append_bit(((value >> i) & 1u) != 0);
    }

    std::size_t bit_length() const { return bit_len_; }

    // Backing bytes; trailing bits of the last byte are zero.
    const std::vector<uint8_t> &bytes() const { return bytes_; }

private:
    std::vector<uint8_t> bytes_;
    std::size_t bit_len_ = 0;
};

// MSB-first reader over a codeword sequence.
class BitReader {
public:
    explicit BitReader(const std::vector<uint8_t> &bytes)
        : bytes_(bytes), bit_len_(bytes.size() * 8) {}

    std::size_t remaining() const { return bit_len_ - pos_; }

    std::size_t position() const { return pos_; }

    bool read_bit() {
        if (pos_ >= bit_len_)
            throw Error(Errc::MalformedBitstream, "read past end of bit stream");
        bool bit = (bytes_[pos_ >> 3] >> (7 - (pos_ & 7))) & 1;
        ++pos_;
        return bit;
    }

    uint32_t read_bits(int count) {
        uint32_t value = 0;
        for (int i = 0; i < count; ++i)
            value = (value << 1) | (read_bit() ? 1u : 0u);
        return value;
    }

private:
    const std::vector<uint8_t> &bytes_;
    std::size_t bit_len_;
    std::size_t pos_ = 0;
};

}  // namespace sdeqr
