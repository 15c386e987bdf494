#include <benchmark/benchmark.h>

#include <random>
#include <string>
#include <vector>

#include "sdeqr/pipeline.hpp"
#include "sdeqr/qrdecode.hpp"
#include "sdeqr/qrencode.hpp"

using namespace sdeqr;

namespace {

qr::ModuleMatrix placed_matrix(int version, qr::EcLevel ec) {
    std::mt19937 rng(31001);
    std::uniform_int_distribution<int> byte(0, 255);
    std::vector<uint8_t> data(
        static_cast<std::size_t>(qr::data_codewords(version, ec)));
    for (auto &b : data)
        b = static_cast<uint8_t>(byte(rng));
    qr::ModuleMatrix m = qr::build_function_patterns(version);
    qr::place_data(m, qr::interleave_blocks(data, version, ec));
    return m;
}

std::string long_message() {
    std::string message;
    for (int i = 0; i < 90; ++i)
        message += "benchmark sentence " + std::to_string(i) +
                   " with some padding text \xC3\xBF\xC3\xBE\xC3\xBD ";
    return message;
}

std::vector<uint8_t> password_bytes() {
    std::string pw = "Hello World";
    return {pw.begin(), pw.end()};
}

std::vector<std::vector<uint8_t>> damaged_blocks(int version, qr::EcLevel ec) {
    std::mt19937 rng(31002);
    std::uniform_int_distribution<int> byte(0, 255);
    qr::BlockStructure bs = qr::block_structure(version, ec);
    std::vector<uint8_t> data(static_cast<std::size_t>(bs.data_codewords()));
    for (auto &b : data)
        b = static_cast<uint8_t>(byte(rng));
    auto blocks = qr::de_interleave(qr::interleave_blocks(data, version, ec),
                                    version, ec);
    for (std::size_t b = 0; b < blocks.size(); ++b)
        for (int e = 0; e < bs.ec_per_block / 2; ++e)
            blocks[b][(b + 7u * static_cast<std::size_t>(e)) % blocks[b].size()] ^= 0x5A;
    return blocks;
}

void bm_mask_search(benchmark::State &state, ExecPolicy policy) {
    qr::ModuleMatrix m = placed_matrix(20, qr::EcLevel::M);
    for (auto _ : state) {
        int mask = qr::choose_mask(m, qr::EcLevel::M, policy);
        benchmark::DoNotOptimize(mask);
    }
}

void bm_pipeline_encrypt(benchmark::State &state, ExecPolicy policy) {
    std::string message = long_message();
    std::vector<uint8_t> password = password_bytes();
    pipeline::PipelineOptions options;
    options.limit = 600;
    options.policy = policy;
    for (auto _ : state) {
        pipeline::SymbolSet set = pipeline::encrypt_to_symbols(message, password, options);
        benchmark::DoNotOptimize(set.symbols.size());
    }
}

void bm_pipeline_decrypt(benchmark::State &state, ExecPolicy policy) {
    std::string message = long_message();
    std::vector<uint8_t> password = password_bytes();
    pipeline::PipelineOptions options;
    options.limit = 600;
    pipeline::SymbolSet set = pipeline::encrypt_to_symbols(message, password, options);
    std::vector<qr::ModuleMatrix> matrices;
    for (const auto &symbol : set.symbols)
        matrices.push_back(symbol.matrix);
    for (auto _ : state) {
        std::string back = pipeline::decrypt_from_symbols(
            matrices, set.manifest, password, cipher::Serialization::Entity, policy);
        benchmark::DoNotOptimize(back.size());
    }
}

void bm_correct_blocks(benchmark::State &state, ExecPolicy policy) {
    auto blocks = damaged_blocks(40, qr::EcLevel::H);
    for (auto _ : state) {
        qr::CorrectedData result = qr::correct_blocks(blocks, 40, qr::EcLevel::H, policy);
        benchmark::DoNotOptimize(result.errors_fixed);
    }
}

}  // namespace

BENCHMARK_CAPTURE(bm_mask_search, serial, ExecPolicy::Serial);
BENCHMARK_CAPTURE(bm_mask_search, parallel, ExecPolicy::Parallel);
BENCHMARK_CAPTURE(bm_pipeline_encrypt, serial, ExecPolicy::Serial);
BENCHMARK_CAPTURE(bm_pipeline_encrypt, parallel, ExecPolicy::Parallel);
BENCHMARK_CAPTURE(bm_pipeline_decrypt, serial, ExecPolicy::Serial);
BENCHMARK_CAPTURE(bm_pipeline_decrypt, parallel, ExecPolicy::Parallel);
BENCHMARK_CAPTURE(bm_correct_blocks, serial, ExecPolicy::Serial);
BENCHMARK_CAPTURE(bm_correct_blocks, parallel, ExecPolicy::Parallel);

BENCHMARK_MAIN();
