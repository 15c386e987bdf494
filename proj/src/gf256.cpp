#include "sdeqr/gf256.hpp"

#include <stdexcept>

namespace sdeqr::gf256 {

GfPoly rs_generator(int n_ec) {
    if (n_ec < 1 || n_ec > 68)
        throw std::invalid_argument("rs_generator: n_ec out of range");
    // Running product, lowest degree first for convenient append.
    std::vector<uint8_t> poly{1};
    for (int j = 0; j < n_ec; ++j) {
        uint8_t root = exp_alpha(j);
        std::vector<uint8_t> next(poly.size() + 1, 0);
        for (std::size_t i = 0; i < poly.size(); ++i) {
            next[i + 1] ^= poly[i];               // * x
            next[i] ^= mul(poly[i], root);        // * alpha^j
        }
        poly = std::move(next);
    }
    GfPoly out;
    out.coefficients.assign(poly.rbegin(), poly.rend());
    return out;
}

std::vector<uint8_t> rs_encode(std::span<const uint8_t> data, int n_ec) {
    if (data.empty())
        throw std::invalid_argument("rs_encode: empty data");
    GfPoly gen = rs_generator(n_ec);
    // Synthetic long division of data * x^n_ec by the monic generator.
    std::vector<uint8_t> remainder(static_cast<std::size_t>(n_ec), 0);
    for (uint8_t byte : data) {
        uint8_t factor = byte ^ remainder.front();
        remainder.erase(remainder.begin());
        remainder.push_back(0);
        for (std::size_t j = 0; j < remainder.size(); ++j)
            remainder[j] ^= mul(gen.coefficients[j + 1], factor);
    }
    return remainder;
}

namespace {

// Syndromes S_j = R(alpha^j), j = 0..n_ec-1; received[0] is the highest
// degree coefficient.
std::vector<uint8_t> syndromes(std::span<const uint8_t> received, int n_ec) {
    std::vector<uint8_t> out(static_cast<std::size_t>(n_ec), 0);
    for (int j = 0; j < n_ec; ++j) {
        uint8_t x = exp_alpha(j);
        uint8_t acc = 0;
        for (uint8_t r : received)
            acc = static_cast<uint8_t>(mul(acc, x) ^ r);
        out[static_cast<std::size_t>(j)] = acc;
    }
    return out;
}

}  // namespace

RsDecodeResult rs_decode(std::span<const uint8_t> received, int n_ec) {
    if (n_ec < 1 || static_cast<int>(received.size()) <= n_ec)
        throw std::invalid_argument("rs_decode: received block too short");

    std::vector<uint8_t> synd = syndromes(received, n_ec);
    bool clean = true;
    for (uint8_t s : synd)
        clean = clean && s == 0;
    if (clean)
        return {std::vector<uint8_t>(received.begin(), received.end()), 0};

    // Berlekamp-Massey, polynomials lowest degree first.
    std::vector<uint8_t> sigma{1};
    std::vector<uint8_t> prev{1};
    int errors = 0;      // current LFSR length L
    int shift = 1;       // m: x^shift applied to prev
    uint8_t prev_d = 1;  // discrepancy that produced prev
    for (int n = 0; n < n_ec; ++n) {
        uint8_t d = synd[static_cast<std::size_t>(n)];
        for (int i = 1; i <= errors && i < static_cast<int>(sigma.size()); ++i)
            d ^= mul(sigma[static_cast<std::size_t>(i)], synd[static_cast<std::size_t>(n - i)]);
        if (d == 0) {
            ++shift;
            continue;
        }
        std::vector<uint8_t> adjusted(prev.size() + static_cast<std::size_t>(shift), 0);
        uint8_t scale = div(d, prev_d);
        for (std::size_t i = 0; i < prev.size(); ++i)
            adjusted[i + static_cast<std::size_t>(shift)] = mul(prev[i], scale);
        if (2 * errors <= n) {
            std::vector<uint8_t> tmp = sigma;
            if (sigma.size() < adjusted.size())
                sigma.resize(adjusted.size(), 0);
            for (std::size_t i = 0; i < adjusted.size(); ++i)
                sigma[i] ^= adjusted[i];
            errors = n + 1 - errors;
            prev = std::move(tmp);
            prev_d = d;
            shift = 1;
        } else {
            if (sigma.size() < adjusted.size())
                sigma.resize(adjusted.size(), 0);
            for (std::size_t i = 0; i < adjusted.size(); ++i)
                sigma[i] ^= adjusted[i];
            ++shift;
        }
    }

    int capacity = n_ec / 2;
    if (errors > capacity)
        throw Error(Errc::DecodeFailure, "error count exceeds correction capacity");

    // Chien search over the shortened block: a root of sigma at alpha^-i
    // locates an error in the coefficient of x^i.
    std::size_t n = received.size();
    std::vector<std::size_t> error_degrees;
    for (std::size_t i = 0; i < n; ++i) {
        uint8_t x = exp_alpha(-static_cast<int>(i));
        uint8_t acc = 0;
        for (std::size_t k = sigma.size(); k-- > 0;)
            acc = static_cast<uint8_t>(mul(acc, x) ^ sigma[k]);
        if (acc == 0)
            error_degrees.push_back(i);
    }
    if (static_cast<int>(error_degrees.size()) != errors)
        throw Error(Errc::DecodeFailure, "error locator does not match block");

    // Forney: omega = S * sigma mod x^n_ec; magnitude at locator X is
    // X * omega(1/X) / sigma'(1/X).
    std::vector<uint8_t> omega(static_cast<std::size_t>(n_ec), 0);
    for (std::size_t i = 0; i < sigma.size(); ++i) {
        for (std::size_t j = 0; j < synd.size(); ++j) {
            if (i + j < omega.size())
                omega[i + j] ^= mul(sigma[i], synd[j]);
        }
    }

    std::vector<uint8_t> corrected(received.begin(), received.end());
    for (std::size_t degree : error_degrees) {
        uint8_t x_inv = exp_alpha(-static_cast<int>(degree));
        uint8_t omega_val = 0;
        for (std::size_t k = omega.size(); k-- > 0;)
            omega_val = static_cast<uint8_t>(mul(omega_val, x_inv) ^ omega[k]);
        // Formal derivative keeps odd-degree terms only.
        uint8_t deriv = 0;
        for (std::size_t k = 1; k < sigma.size(); k += 2) {
            uint8_t term = sigma[k];
            for (std::size_t p = 0; p + 1 < k; ++p)
                term = mul(term, x_inv);
            deriv ^= term;
        }
        if (deriv == 0)
            throw Error(Errc::DecodeFailure, "degenerate error locator derivative");
        uint8_t magnitude = mul(exp_alpha(static_cast<int>(degree)), div(omega_val, deriv));
        corrected[n - 1 - degree] ^= magnitude;
    }

    std::vector<uint8_t> recheck = syndromes(corrected, n_ec);
    for (uint8_t s : recheck) {
        if (s != 0)
            throw Error(Errc::DecodeFailure, "residual syndrome after correction");
    }
    return {std::move(corrected), errors};
}

}  // namespace sdeqr::gf256
