#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "sdeqr/cipher.hpp"
#include "sdeqr/parallel.hpp"
#include "sdeqr/qrencode.hpp"

namespace sdeqr::pipeline {

// Ciphertext split threshold, in serialized bytes per symbol.
inline constexpr std::size_t kDefaultLimit = 1264;

// CRC-32 (reflected, polynomial 0xEDB88320, init/xorout 0xFFFFFFFF).
uint32_t crc32(std::span<const uint8_t> data);

// Greedy split into chunks of at most `limit` bytes. ENTITY data is split
// only between "&#N;" tokens, RAW16 only between 16-bit words, so every
// chunk deserializes on its own. Empty data yields one empty chunk, which
// the symbol encoder then rejects. Throws TooLarge when a single token
// exceeds the limit.
std::vector<std::vector<uint8_t>> split_payload(std::span<const uint8_t> data,
                                                cipher::Serialization serialization,
                                                std::size_t limit = kDefaultLimit);

// Sidecar describing a symbol set. The checksum covers only the serialized
// ciphertext, never the plaintext.
struct Manifest {
    int total = 0;
    cipher::Serialization serialization = cipher::Serialization::Entity;
    qr::EcLevel ec = qr::EcLevel::H;
    std::vector<std::size_t> chunk_lengths;
    uint32_t crc32 = 0;

    bool operator==(const Manifest &) const = default;
};

std::string manifest_to_json(const Manifest &manifest);
Manifest manifest_from_json(std::string_view json);

struct SymbolSet {
    std::vector<qr::EncodedSymbol> symbols;
    Manifest manifest;
};

struct PipelineOptions {
    qr::EcLevel ec = qr::EcLevel::H;
    cipher::Serialization serialization = cipher::Serialization::Entity;
    int forced_mask = -1;
    int forced_version = 0;
    std::size_t limit = kDefaultLimit;
    ExecPolicy policy = ExecPolicy::Serial;
};

// encrypt -> serialize -> split -> one symbol per chunk. Symbols are
// encoded concurrently under the parallel policy; output order is the
// chunk order either way.
SymbolSet encrypt_to_symbols(std::string_view message_utf8,
                             std::span<const uint8_t> password,
                             const PipelineOptions &options = {});

// Full inverse: decode each matrix, concatenate payloads in order, check
// the manifest (when given), deserialize and decrypt. Without a manifest
// the serialization must be supplied and no checksum is verified.
std::string decrypt_from_symbols(std::span<const qr::ModuleMatrix> matrices,
                                 const std::optional<Manifest> &manifest,
                                 std::span<const uint8_t> password,
                                 cipher::Serialization fallback_serialization =
                                     cipher::Serialization::Entity,
                                 ExecPolicy policy = ExecPolicy::Serial);

}  // namespace sdeqr::pipeline
