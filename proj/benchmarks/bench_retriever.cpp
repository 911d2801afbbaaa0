#include <benchmark/benchmark.h>

#include "pathhd/codebook.hpp"
#include "pathhd/retriever.hpp"
#include "pathhd/rng.hpp"

using namespace pathhd;

namespace {

std::vector<std::string> relation_names(std::size_t r) {
    std::vector<std::string> out;
    for (std::size_t i = 0; i < r; ++i) out.push_back("rel" + std::to_string(i));
    return out;
}

std::vector<CandidatePath> random_candidates(std::size_t n, const std::vector<std::string>& rels) {
    auto rng = CounterRng::stream(3, {n});
    std::vector<CandidatePath> out(n);
    for (auto& c : out) {
        c.entity_chain.push_back("e0");
        for (std::size_t l = 0; l < 3; ++l) {
            c.schema.relations.push_back(rels[rng.below(rels.size())]);
            c.entity_chain.push_back("e" + std::to_string(rng.below(200)));
        }
    }
    return out;
}

// args: N candidates, d
void BM_ScoreCandidates(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const auto d = static_cast<std::size_t>(state.range(1));
    const auto rels = relation_names(32);
    RetrievalConfig cfg;
    cfg.hdc = HdcConfig::ghrr(d, 4, 1);
    const auto cb = make_codebook(cfg.hdc, rels);
    const auto query = encode_path(cb, std::vector<std::string>{rels[0], rels[1], rels[2]});
    const auto cands = random_candidates(n, rels);
    const IdfTable idf;
    for (auto _ : state) benchmark::DoNotOptimize(score_candidates(cb, query, cands, idf, cfg));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_TopK(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    auto rng = CounterRng::stream(4, {});
    std::vector<ScoredCandidate> scored(n);
    for (auto& s : scored) {
        s.path.schema.relations = {"r" + std::to_string(rng.below(20))};
        s.path.entity_chain = {"a", "e" + std::to_string(rng.below(1000))};
        s.total = rng.uniform(-1.0, 1.0);
    }
    for (auto _ : state) benchmark::DoNotOptimize(top_k(scored, 3));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}

}  // namespace

BENCHMARK(BM_ScoreCandidates)->ArgsProduct({{1000, 10000}, {1024, 4096}})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_TopK)->Arg(1000)->Arg(10000);
