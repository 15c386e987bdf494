#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>

namespace sdeqr {

enum class Errc {
    EmptyPassword,
    InvalidPassword,
    InvalidUtf8,
    Overflow16,
    InvalidWord,
    MalformedEntity,
    OddLength,
    EmptyInput,
    InvalidCharacter,
    TooLarge,
    InvalidForcedVersion,
    InvalidVersion,
    DecodeFailure,
    FormatUnreadable,
    MalformedBitstream,
    MalformedInput,
    ChecksumMismatch,
    OrderMismatch,
};

const char *errc_name(Errc code);

class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string &message)
        : std::runtime_error(std::string(errc_name(code)) + ": " + message), code_(code) {}

    Error(Errc code, const std::string &message, std::size_t index)
        : std::runtime_error(std::string(errc_name(code)) + ": " + message +
                             " (index " + std::to_string(index) + ")"),
          code_(code), index_(index) {}

    Errc code() const noexcept { return code_; }

    // Offending element position, when the error is tied to one.
    std::optional<std::size_t> index() const noexcept { return index_; }

private:
    Errc code_;
    std::optional<std::size_t> index_;
};

inline const char *errc_name(Errc code) {
    switch (code) {
        case Errc::EmptyPassword: return "EmptyPassword";
        case Errc::InvalidPassword: return "InvalidPassword";
        case Errc::InvalidUtf8: return "InvalidUtf8";
        case Errc::Overflow16: return "Overflow16";
        case Errc::InvalidWord: return "InvalidWord";
        case Errc::MalformedEntity: return "MalformedEntity";
        case Errc::OddLength: return "OddLength";
        case Errc::EmptyInput: return "EmptyInput";
        case Errc::InvalidCharacter: return "InvalidCharacter";
        case Errc::TooLarge: return "TooLarge";
        case Errc::InvalidForcedVersion: return "InvalidForcedVersion";
        case Errc::InvalidVersion: return "InvalidVersion";
        case Errc::DecodeFailure: return "DecodeFailure";
        case Errc::FormatUnreadable: return "FormatUnreadable";
        case Errc::MalformedBitstream: return "MalformedBitstream";
        case Errc::MalformedInput: return "MalformedInput";
        case Errc::ChecksumMismatch: return "ChecksumMismatch";
        case Errc::OrderMismatch: return "OrderMismatch";
    }
    return "UnknownError";
}

}  // namespace sdeqr
