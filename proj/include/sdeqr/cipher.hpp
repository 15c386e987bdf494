#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "sdeqr/error.hpp"

namespace sdeqr::cipher {

// Password-derived key material: n = plen^2 * sum(bytes), code = digit sum
// of n, applied once.
struct SecretCode {
    std::vector<uint8_t> password;
    uint64_t n = 0;
    uint32_t code = 0;

    std::size_t plen() const { return password.size(); }
};

enum class Stage { Added, Reversed, Final };

// Ciphertext as 16-bit words. The stage records which transforms have been
// applied; transforms that are involutions move the stage both ways.
struct CipherWords {
    std::vector<uint16_t> words;
    Stage stage = Stage::Added;

    bool operator==(const CipherWords &other) const { return words == other.words; }
};

// Plaintext as Unicode scalar values. Each scalar must satisfy
// scalar + code <= 0xFFFF at encryption time.
struct PlainMessage {
    std::u32string chars;

    bool operator==(const PlainMessage &) const = default;
};

enum class Serialization { Entity, Raw16 };

SecretCode derive_code(std::span<const uint8_t> password);

// Text password to raw bytes: every scalar must fit in one byte.
std::vector<uint8_t> password_from_text(std::string_view utf8);

PlainMessage message_from_utf8(std::string_view utf8);
std::string message_to_utf8(const PlainMessage &message);

CipherWords add_code(const PlainMessage &message, const SecretCode &key);
CipherWords reverse_words(const CipherWords &words);
CipherWords complement16(const CipherWords &words);

CipherWords encrypt(const PlainMessage &message, std::span<const uint8_t> password);
PlainMessage decrypt(const CipherWords &words, std::span<const uint8_t> password);

std::vector<uint8_t> serialize(const CipherWords &words, Serialization format);
CipherWords deserialize(std::span<const uint8_t> data, Serialization format);

}  // namespace sdeqr::cipher
