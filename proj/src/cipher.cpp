#include "sdeqr/cipher.hpp"

#include <algorithm>
#include <charconv>

namespace sdeqr::cipher {

namespace {

uint32_t digit_sum(uint64_t n) {
    uint32_t sum = 0;
    do {
        sum += static_cast<uint32_t>(n % 10);
        n /= 10;
    } while (n != 0);
    return sum;
}

bool is_scalar_value(uint32_t value) {
    return value <= 0x10FFFF && !(value >= 0xD800 && value <= 0xDFFF);
}

// Strict UTF-8 decoder; rejects overlong forms, surrogates and truncation.
std::u32string decode_utf8(std::string_view utf8) {
    std::u32string out;
    std::size_t i = 0;
    while (i < utf8.size()) {
        uint8_t lead = static_cast<uint8_t>(utf8[i]);
        uint32_t scalar = 0;
        int tail = 0;
        if (lead < 0x80) {
            scalar = lead;
        } else if ((lead & 0xE0) == 0xC0) {
            scalar = lead & 0x1F;
            tail = 1;
        } else if ((lead & 0xF0) == 0xE0) {
            scalar = lead & 0x0F;
            tail = 2;
        } else if ((lead & 0xF8) == 0xF0) {
            scalar = lead & 0x07;
            tail = 3;
        } else {
            throw Error(Errc::InvalidUtf8, "bad lead byte", i);
        }
        if (i + tail >= utf8.size())
            throw Error(Errc::InvalidUtf8, "truncated sequence", i);
        for (int k = 1; k <= tail; ++k) {
            uint8_t byte = static_cast<uint8_t>(utf8[i + k]);
            if ((byte & 0xC0) != 0x80)
                throw Error(Errc::InvalidUtf8, "bad continuation byte", i + k);
            scalar = (scalar << 6) | (byte & 0x3F);
        }
        static constexpr uint32_t kMinForTail[4] = {0, 0x80, 0x800, 0x10000};
        if (scalar < kMinForTail[tail] || !is_scalar_value(scalar))
            throw Error(Errc::InvalidUtf8, "invalid scalar value", i);
        out.push_back(static_cast<char32_t>(scalar));
        i += 1 + tail;
    }
    return out;
}

std::string encode_utf8(const std::u32string &chars) {
    std::string out;
    for (char32_t c : chars) {
        uint32_t v = static_cast<uint32_t>(c);
        if (v < 0x80) {
            out.push_back(static_cast<char>(v));
        } else if (v < 0x800) {
            out.push_back(static_cast<char>(0xC0 | (v >> 6)));
            out.push_back(static_cast<char>(0x80 | (v & 0x3F)));
        } else if (v < 0x10000) {
            out.push_back(static_cast<char>(0xE0 | (v >> 12)));
            out.push_back(static_cast<char>(0x80 | ((v >> 6) & 0x3F)));
            out.push_back(static_cast<char>(0x80 | (v & 0x3F)));
        } else {
            out.push_back(static_cast<char>(0xF0 | (v >> 18)));
            out.push_back(static_cast<char>(0x80 | ((v >> 12) & 0x3F)));
            out.push_back(static_cast<char>(0x80 | ((v >> 6) & 0x3F)));
            out.push_back(static_cast<char>(0x80 | (v & 0x3F)));
        }
    }
    return out;
}

}  // namespace

SecretCode derive_code(std::span<const uint8_t> password) {
    if (password.empty())
        throw Error(Errc::EmptyPassword, "password must be non-empty");
    SecretCode key;
    key.password.assign(password.begin(), password.end());
    uint64_t byte_sum = 0;
    for (uint8_t b : password)
        byte_sum += b;
    uint64_t plen = password.size();
    key.n = plen * plen * byte_sum;
    key.code = digit_sum(key.n);
    return key;
}

std::vector<uint8_t> password_from_text(std::string_view utf8) {
    std::u32string scalars = decode_utf8(utf8);
    std::vector<uint8_t> bytes;
    bytes.reserve(scalars.size());
    for (std::size_t i = 0; i < scalars.size(); ++i) {
        if (static_cast<uint32_t>(scalars[i]) > 0xFF)
            throw Error(Errc::InvalidPassword, "password character does not fit in a byte", i);
        bytes.push_back(static_cast<uint8_t>(scalars[i]));
    }
    return bytes;
}

PlainMessage message_from_utf8(std::string_view utf8) {
    return PlainMessage{decode_utf8(utf8)};
}

std::string message_to_utf8(const PlainMessage &message) {
    return encode_utf8(message.chars);
}

CipherWords add_code(const PlainMessage &message, const SecretCode &key) {
    CipherWords out;
    out.stage = Stage::Added;
    out.words.reserve(message.chars.size());
    for (std::size_t i = 0; i < message.chars.size(); ++i) {
        uint32_t value = static_cast<uint32_t>(message.chars[i]) + key.code;
        if (value > 0xFFFF)
            throw Error(Errc::Overflow16, "character + code exceeds 16 bits", i);
        out.words.push_back(static_cast<uint16_t>(value));
    }
    return out;
}

CipherWords reverse_words(const CipherWords &words) {
    if (words.stage == Stage::Final)
        throw std::logic_error("reverse_words applied at Final stage");
    CipherWords out;
    out.words.assign(words.words.rbegin(), words.words.rend());
    out.stage = words.stage == Stage::Added ? Stage::Reversed : Stage::Added;
    return out;
}

CipherWords complement16(const CipherWords &words) {
    if (words.stage == Stage::Added)
        throw std::logic_error("complement16 applied at Added stage");
    CipherWords out;
    out.words.reserve(words.words.size());
    for (uint16_t w : words.words)
        out.words.push_back(static_cast<uint16_t>(w ^ 0xFFFF));
    out.stage = words.stage == Stage::Reversed ? Stage::Final : Stage::Reversed;
    return out;
}

CipherWords encrypt(const PlainMessage &message, std::span<const uint8_t> password) {
    SecretCode key = derive_code(password);
    return complement16(reverse_words(add_code(message, key)));
}

PlainMessage decrypt(const CipherWords &words, std::span<const uint8_t> password) {
    SecretCode key = derive_code(password);
    CipherWords staged = words;
    staged.stage = Stage::Final;
    CipherWords added = reverse_words(complement16(staged));
    PlainMessage out;
    out.chars.reserve(added.words.size());
    for (std::size_t i = 0; i < added.words.size(); ++i) {
        int32_t value = static_cast<int32_t>(added.words[i]) - static_cast<int32_t>(key.code);
        if (value < 0)
            throw Error(Errc::InvalidWord, "word smaller than code", i);
        if (!is_scalar_value(static_cast<uint32_t>(value)))
            throw Error(Errc::InvalidWord, "word does not decode to a scalar value", i);
        out.chars.push_back(static_cast<char32_t>(value));
    }
    return out;
}

std::vector<uint8_t> serialize(const CipherWords &words, Serialization format) {
    std::vector<uint8_t> out;
    if (format == Serialization::Entity) {
        for (uint16_t w : words.words) {
            out.push_back('&');
            out.push_back('#');
            char buf[8];
            auto [end, ec] = std::to_chars(buf, buf + sizeof buf, w);
            (void)ec;
            out.insert(out.end(), buf, end);
            out.push_back(';');
        }
    } else {
        out.reserve(words.words.size() * 2);
        for (uint16_t w : words.words) {
            out.push_back(static_cast<uint8_t>(w >> 8));
            out.push_back(static_cast<uint8_t>(w & 0xFF));
        }
    }
    return out;
}

CipherWords deserialize(std::span<const uint8_t> data, Serialization format) {
    CipherWords out;
    out.stage = Stage::Final;
    if (format == Serialization::Raw16) {
        if (data.size() % 2 != 0)
            throw Error(Errc::OddLength, "raw16 data must have even length");
        out.words.reserve(data.size() / 2);
        for (std::size_t i = 0; i < data.size(); i += 2)
            out.words.push_back(static_cast<uint16_t>(data[i] << 8 | data[i + 1]));
        return out;
    }
    // Entity tokens are "&#" digits, with the ';' terminator optional: the
    // next '&' (or end of input) also closes a token.
    std::size_t i = 0;
    while (i < data.size()) {
        if (data[i] != '&' || i + 1 >= data.size() || data[i + 1] != '#')
            throw Error(Errc::MalformedEntity, "expected '&#' token start", i);
        i += 2;
        if (i >= data.size() || data[i] < '0' || data[i] > '9')
            throw Error(Errc::MalformedEntity, "expected digits", i);
        uint32_t value = 0;
        while (i < data.size() && data[i] >= '0' && data[i] <= '9') {
            value = value * 10 + (data[i] - '0');
            if (value > 0xFFFF)
                throw Error(Errc::MalformedEntity, "value exceeds 16 bits", i);
            ++i;
        }
        if (i < data.size()) {
            if (data[i] == ';')
                ++i;
            else if (data[i] != '&')
                throw Error(Errc::MalformedEntity, "unexpected byte in token", i);
        }
        out.words.push_back(static_cast<uint16_t>(value));
    }
    return out;
}

}  // namespace sdeqr::cipher
