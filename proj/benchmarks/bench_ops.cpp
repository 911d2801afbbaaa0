#include <benchmark/benchmark.h>

#include "pathhd/codebook.hpp"
#include "pathhd/ops.hpp"

using namespace pathhd;

namespace {

HdcConfig config_for(Family f, std::size_t d) {
    return f == Family::Ghrr ? HdcConfig::ghrr(d, 4, 1) : HdcConfig::flat(f, d, 1);
}

void BM_Bind(benchmark::State& state, Family f) {
    const auto cfg = config_for(f, static_cast<std::size_t>(state.range(0)));
    const auto x = make_atom(cfg, 0);
    const auto y = make_atom(cfg, 1);
    for (auto _ : state) benchmark::DoNotOptimize(bind(x, y));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_Similarity(benchmark::State& state, Family f) {
    const auto cfg = config_for(f, static_cast<std::size_t>(state.range(0)));
    const auto x = make_atom(cfg, 0);
    const auto y = make_atom(cfg, 1);
    for (auto _ : state) benchmark::DoNotOptimize(similarity(x, y));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_EncodePath(benchmark::State& state) {
    const auto cb = make_codebook(HdcConfig::ghrr(static_cast<std::size_t>(state.range(0)), 4, 1), {"r1", "r2", "r3"});
    const std::vector<std::string> path{"r1", "r2", "r3"};
    for (auto _ : state) benchmark::DoNotOptimize(encode_path(cb, path));
}

void BM_PathSimilarity(benchmark::State& state) {
    const auto cb = make_codebook(HdcConfig::ghrr(static_cast<std::size_t>(state.range(0)), 4, 1), {"r1", "r2", "r3"});
    const std::vector<std::string> path{"r1", "r2", "r3"};
    const auto query = encode_path(cb, std::vector<std::string>{"r3", "r2", "r1"});
    for (auto _ : state) benchmark::DoNotOptimize(path_similarity(cb, query, path));
}

}  // namespace

BENCHMARK_CAPTURE(BM_Bind, ghrr, Family::Ghrr)->RangeMultiplier(2)->Range(1024, 8192);
BENCHMARK_CAPTURE(BM_Bind, fhrr, Family::Fhrr)->RangeMultiplier(2)->Range(1024, 8192);
BENCHMARK_CAPTURE(BM_Bind, hrr, Family::Hrr)->RangeMultiplier(2)->Range(1024, 8192);
BENCHMARK_CAPTURE(BM_Bind, bipolar, Family::BipolarXor)->RangeMultiplier(2)->Range(1024, 8192);
BENCHMARK_CAPTURE(BM_Similarity, ghrr, Family::Ghrr)->RangeMultiplier(2)->Range(1024, 8192);
BENCHMARK_CAPTURE(BM_Similarity, bipolar, Family::BipolarXor)->RangeMultiplier(2)->Range(1024, 8192);
BENCHMARK(BM_EncodePath)->RangeMultiplier(2)->Range(1024, 8192);
BENCHMARK(BM_PathSimilarity)->RangeMultiplier(2)->Range(1024, 8192);
