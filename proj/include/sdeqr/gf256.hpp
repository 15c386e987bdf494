#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "sdeqr/error.hpp"

namespace sdeqr::gf256 {

// GF(2^8) with reduction polynomial x^8+x^4+x^3+x^2+1 (0x11D), generator
// alpha = 2. Exp/log tables are computed at compile time.
inline constexpr uint16_t kReductionPoly = 0x11D;

namespace detail {

struct Tables {
    std::array<uint8_t, 512> exp{};
    std::array<uint8_t, 256> log{};
};

consteval Tables build_tables() {
    Tables t;
    uint16_t x = 1;
    for (int i = 0; i < 255; ++i) {
        t.exp[i] = static_cast<uint8_t>(x);
        t.log[x] = static_cast<uint8_t>(i);
        x <<= 1;
        if (x & 0x100)
            x ^= kReductionPoly;
    }
    for (int i = 255; i < 512; ++i)
        t.exp[i] = t.exp[i - 255];
    return t;
}

inline constexpr Tables kTables = build_tables();

}  // namespace detail

constexpr uint8_t exp_alpha(int power) {
    int r = power % 255;
    if (r < 0)
        r += 255;
    return detail::kTables.exp[r];
}

constexpr uint8_t log_alpha(uint8_t a) { return detail::kTables.log[a]; }

constexpr uint8_t add(uint8_t a, uint8_t b) { return a ^ b; }

constexpr uint8_t mul(uint8_t a, uint8_t b) {
    if (a == 0 || b == 0)
        return 0;
    return detail::kTables.exp[detail::kTables.log[a] + detail::kTables.log[b]];
}

constexpr uint8_t inv(uint8_t a) {
    return detail::kTables.exp[255 - detail::kTables.log[a]];
}

constexpr uint8_t div(uint8_t a, uint8_t b) {
    if (a == 0)
        return 0;
    return detail::kTables.exp[detail::kTables.log[a] + 255 - detail::kTables.log[b]];
}

// Polynomial over GF(256), coefficients highest degree first. Normalized so
// the leading coefficient is nonzero unless the polynomial is zero.
struct GfPoly {
    std::vector<uint8_t> coefficients;

    std::size_t degree() const { return coefficients.empty() ? 0 : coefficients.size() - 1; }

    // Horner evaluation.
    uint8_t eval(uint8_t x) const {
        uint8_t acc = 0;
        for (uint8_t c : coefficients)
            acc = static_cast<uint8_t>(mul(acc, x) ^ c);
        return acc;
    }
};

// Monic generator polynomial prod_{j=0..n_ec-1} (x - alpha^j).
GfPoly rs_generator(int n_ec);

/// Remainder of data * x^n_ec divided by the generator: the EC codewords.
std::vector<uint8_t> rs_encode(std::span<const uint8_t> data, int n_ec);

struct RsDecodeResult {
    std::vector<uint8_t> corrected;
    int errors_fixed = 0;
};

// Syndrome decoding (Berlekamp-Massey, Chien search, Forney). Corrects up to
/// floor(n_ec/2) codeword errors; throws Error(Errc::DecodeFailure) beyond
// that or when the correction is inconsistent.
RsDecodeResult rs_decode(std::span<const uint8_t> received, int n_ec);

}  // namespace sdeqr::gf256
