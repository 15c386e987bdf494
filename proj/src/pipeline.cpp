#include "sdeqr/pipeline.hpp"

#include <array>
#include <exception>

#include <json.hpp>

#include "sdeqr/qrdecode.hpp"

namespace sdeqr::pipeline {

namespace {

constexpr std::array<uint32_t, 256> make_crc_table() {
    std::array<uint32_t, 256> table{};
    for (uint32_t i = 0; i < 256; ++i) {
        uint32_t c = i;
        for (int k = 0; k < 8; ++k)
            c = (c & 1u) != 0 ? 0xEDB88320u ^ (c >> 1) : c >> 1;
        table[i] = c;
    }
    return table;
}

constexpr auto kCrcTable = make_crc_table();

const char *serialization_name(cipher::Serialization s) {
    return s == cipher::Serialization::Entity ? "entity" : "raw16";
}

cipher::Serialization serialization_from_name(const std::string &name) {
    if (name == "entity")
        return cipher::Serialization::Entity;
    if (name == "raw16")
        return cipher::Serialization::Raw16;
    throw Error(Errc::MalformedInput, "unknown serialization '" + name + "'");
}

}  // namespace

uint32_t crc32(std::span<const uint8_t> data) {
    uint32_t c = 0xFFFFFFFFu;
    for (uint8_t b : data)
        c = kCrcTable[(c ^ b) & 0xFFu] ^ (c >> 8);
    return c ^ 0xFFFFFFFFu;
}

std::vector<std::vector<uint8_t>> split_payload(std::span<const uint8_t> data,
                                                cipher::Serialization serialization,
                                                std::size_t limit) {
    if (limit == 0)
        throw std::invalid_argument("chunk limit must be positive");
    std::vector<std::vector<uint8_t>> chunks;
    if (data.empty()) {
        chunks.emplace_back();
        return chunks;
    }

    if (serialization == cipher::Serialization::Raw16) {
        std::size_t step = limit - limit % 2;
        if (step == 0)
            throw Error(Errc::TooLarge, "a 16-bit word does not fit the chunk limit");
        for (std::size_t i = 0; i < data.size(); i += step) {
            std::size_t len = std::min(step, data.size() - i);
            chunks.emplace_back(data.begin() + static_cast<std::ptrdiff_t>(i),
                                data.begin() + static_cast<std::ptrdiff_t>(i + len));
        }
        return chunks;
    }

    // ENTITY: tokens run from '&' to the following ';' or the next '&'.
    std::vector<uint8_t> current;
    std::size_t i = 0;
    while (i < data.size()) {
        std::size_t end = i + 1;
        while (end < data.size() && data[end] != '&') {
            if (data[end] == ';') {
                ++end;
                break;
            }
            ++end;
        }
        std::size_t token_len = end - i;
        if (token_len > limit)
            throw Error(Errc::TooLarge, "a serialized token exceeds the chunk limit");
        if (current.size() + token_len > limit) {
            chunks.push_back(std::move(current));
            current.clear();
        }
        current.insert(current.end(), data.begin() + static_cast<std::ptrdiff_t>(i),
                       data.begin() + static_cast<std::ptrdiff_t>(end));
        i = end;
    }
    chunks.push_back(std::move(current));
    return chunks;
}

std::string manifest_to_json(const Manifest &manifest) {
    nlohmann::json j;
    j["total"] = manifest.total;
    j["serialization"] = serialization_name(manifest.serialization);
    j["ec_level"] = qr::ec_name(manifest.ec);
    j["chunk_lengths"] = manifest.chunk_lengths;
    j["crc32"] = manifest.crc32;
    return j.dump(2) + "\n";
}

Manifest manifest_from_json(std::string_view json) {
    nlohmann::json j = nlohmann::json::parse(json, nullptr, false);
    if (j.is_discarded())
        throw Error(Errc::MalformedInput, "manifest is not valid JSON");

    Manifest m;
    try {
        m.total = j.at("total").get<int>();
        m.serialization =
            serialization_from_name(j.at("serialization").get<std::string>());
        m.ec = qr::ec_from_name(j.at("ec_level").get<std::string>());
        m.chunk_lengths = j.at("chunk_lengths").get<std::vector<std::size_t>>();
        m.crc32 = j.at("crc32").get<uint32_t>();
    } catch (const nlohmann::json::exception &e) {
        throw Error(Errc::MalformedInput, std::string("manifest field error: ") + e.what());
    }
    if (m.total <= 0)
        throw Error(Errc::MalformedInput, "manifest total must be positive");
    if (m.chunk_lengths.size() != static_cast<std::size_t>(m.total))
        throw Error(Errc::MalformedInput,
                    "manifest chunk_lengths length disagrees with total");
    return m;
}

SymbolSet encrypt_to_symbols(std::string_view message_utf8,
                             std::span<const uint8_t> password,
                             const PipelineOptions &options) {
    cipher::PlainMessage message = cipher::message_from_utf8(message_utf8);
    cipher::CipherWords ciphertext = cipher::encrypt(message, password);
    std::vector<uint8_t> serialized = cipher::serialize(ciphertext, options.serialization);
    std::vector<std::vector<uint8_t>> chunks =
        split_payload(serialized, options.serialization, options.limit);

    qr::EncodeOptions encode_options;
    encode_options.ec = options.ec;
    encode_options.forced_mask = options.forced_mask;
    encode_options.forced_version = options.forced_version;
    encode_options.policy = options.policy;

    SymbolSet set;
    set.symbols.resize(chunks.size());
    int count = static_cast<int>(chunks.size());
    if (options.policy == ExecPolicy::Parallel) {
#ifdef SDEQR_HAVE_OPENMP
        std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic)
        for (int i = 0; i < count; ++i) {
            try {
                set.symbols[static_cast<std::size_t>(i)] =
                    qr::encode_symbol(chunks[static_cast<std::size_t>(i)], encode_options);
            } catch (...) {
#pragma omp critical
                if (!failure)
                    failure = std::current_exception();
            }
        }
        if (failure)
            std::rethrow_exception(failure);
#else
        for (int i = 0; i < count; ++i)
            set.symbols[static_cast<std::size_t>(i)] =
                qr::encode_symbol(chunks[static_cast<std::size_t>(i)], encode_options);
#endif
    } else {
        for (int i = 0; i < count; ++i)
            set.symbols[static_cast<std::size_t>(i)] =
                qr::encode_symbol(chunks[static_cast<std::size_t>(i)], encode_options);
    }

    set.manifest.total = count;
    set.manifest.serialization = options.serialization;
    set.manifest.ec = options.ec;
    for (const auto &chunk : chunks)
        set.manifest.chunk_lengths.push_back(chunk.size());
    set.manifest.crc32 = crc32(serialized);
    return set;
}

std::string decrypt_from_symbols(std::span<const qr::ModuleMatrix> matrices,
                                 const std::optional<Manifest> &manifest,
                                 std::span<const uint8_t> password,
                                 cipher::Serialization fallback_serialization,
                                 ExecPolicy policy) {
    if (matrices.empty())
        throw Error(Errc::EmptyInput, "no symbols to decode");
    if (manifest && manifest->total != static_cast<int>(matrices.size()))
        throw Error(Errc::OrderMismatch, "manifest total disagrees with symbol count");

    std::vector<qr::DecodedSymbol> decoded(matrices.size());
    int count = static_cast<int>(matrices.size());
    if (policy == ExecPolicy::Parallel) {
#ifdef SDEQR_HAVE_OPENMP
        std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic)
        for (int i = 0; i < count; ++i) {
            try {
                decoded[static_cast<std::size_t>(i)] =
                    qr::decode_symbol(matrices[static_cast<std::size_t>(i)]);
            } catch (...) {
#pragma omp critical
                if (!failure)
                    failure = std::current_exception();
            }
        }
        if (failure)
            std::rethrow_exception(failure);
#else
        for (int i = 0; i < count; ++i)
            decoded[static_cast<std::size_t>(i)] =
                qr::decode_symbol(matrices[static_cast<std::size_t>(i)]);
#endif
    } else {
        for (int i = 0; i < count; ++i)
            decoded[static_cast<std::size_t>(i)] =
                qr::decode_symbol(matrices[static_cast<std::size_t>(i)]);
    }

    std::vector<uint8_t> serialized;
    for (int i = 0; i < count; ++i) {
        const auto &payload = decoded[static_cast<std::size_t>(i)].payload;
        if (manifest &&
            payload.size() != manifest->chunk_lengths[static_cast<std::size_t>(i)])
            throw Error(Errc::OrderMismatch,
                        "symbol " + std::to_string(i + 1) +
                            " length disagrees with the manifest");
        serialized.insert(serialized.end(), payload.begin(), payload.end());
    }

    if (manifest && crc32(serialized) != manifest->crc32)
        throw Error(Errc::ChecksumMismatch, "ciphertext checksum mismatch");

    cipher::Serialization serialization =
        manifest ? manifest->serialization : fallback_serialization;
    cipher::CipherWords words = cipher::deserialize(serialized, serialization);
    cipher::PlainMessage message = cipher::decrypt(words, password);
    return cipher::message_to_utf8(message);
}

}  // namespace sdeqr::pipeline
