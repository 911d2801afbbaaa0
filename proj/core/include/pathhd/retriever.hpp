#pragma once

#include <cstdint>
#include <iosfwd>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "pathhd/codebook.hpp"
#include "pathhd/graph.hpp"
#include "pathhd/questions.hpp"
#include "pathhd/schema.hpp"
#include "pathhd/schema_graph.hpp"

namespace pathhd {

// How the length term of the calibrated score is computed.
//   AsPrinted           β·λ^{|z|}
//   LengthProportional  β·(1 − λ^{|z|})
enum class PenaltyMode { AsPrinted, LengthProportional };

std::string_view to_string(PenaltyMode mode) noexcept;
PenaltyMode parse_penalty_mode(std::string_view name);

// Beam value that never prunes.
inline constexpr std::size_t kUnboundedBeam = std::numeric_limits<std::size_t>::max();

struct RetrievalConfig {
    HdcConfig hdc{};  // GHRR, D = 256, m = 4 (d = 4096)
    double alpha = 0.2;
    double beta = 0.1;
    double lambda = 0.8;
    std::size_t k = 3;
    std::size_t l_max = 3;
    std::size_t beam = 10000;
    PenaltyMode penalty_mode = PenaltyMode::AsPrinted;

    // Throws ConfigError unless alpha, beta >= 0, 0 < lambda < 1, k, l_max, beam >= 1.
    void validate() const;
};

struct CandidatePath {
    Schema schema;
    std::vector<std::string> entity_chain;  // e_0 ... e_l, size = |schema| + 1

    const std::string& terminal() const { return entity_chain.back(); }

    friend auto operator<=>(const CandidatePath&, const CandidatePath&) = default;
    friend bool operator==(const CandidatePath&, const CandidatePath&) = default;
};

struct ScoredCandidate {
    CandidatePath path;
    double sim = 0.0;
    double idf_bonus = 0.0;       // α·IDF(schema)
    double length_penalty = 0.0;  // β·λ^{|z|} (or the proportional variant)
    double total = 0.0;           // sim + idf_bonus − length_penalty
};

struct StageTimings {
    std::int64_t plan_us = 0;
    std::int64_t instantiate_us = 0;
    std::int64_t encode_us = 0;
    std::int64_t score_us = 0;
    std::int64_t select_us = 0;
};

struct RetrievalResult {
    std::string question_id;
    Schema plan;                              // z_q; empty when no plan exists
    std::vector<ScoredCandidate> candidates;  // all, in rank order
    std::vector<std::size_t> top_k;           // indices into candidates: 0 .. k-1
    StageTimings timings;

    bool empty() const noexcept { return top_k.empty(); }
    const ScoredCandidate& top(std::size_t i) const { return candidates.at(top_k.at(i)); }
};

// All schemas of length <= l_max that start with a relation in `start` and
// follow SchemaGraph edges. At each depth at most `beam` schemas survive,
// ranked by the product of their edge witness counts (ties: lexicographic).
// Result is ordered by (length, schema).
std::vector<Schema> enumerate_plans(const SchemaGraph& sg, const std::vector<std::string>& start,
                                    const RetrievalConfig& cfg);

// Relations leaving the topic entity, i.e. the start set for planning.
std::vector<std::string> start_relations(const Graph& g, std::string_view topic);

// gold_hint when present in plans; otherwise the plan with the largest
// token overlap with the question, ties by shorter then lexicographic.
// Throws ConfigError on an empty plan list.
Schema select_query_plan(const std::vector<Schema>& plans, const Question& question,
                         const std::optional<Schema>& gold_hint);

// Lower-cased alphanumeric runs.
std::vector<std::string> tokenize(std::string_view text);

// Entity chains rooted at topic matching some plan. Walks forward edges only;
// each depth keeps at most beam·|plans| partial chains in (schema, chain)
// order. Output ordered by (length, schema, chain), deduplicated.
std::vector<CandidatePath> instantiate_candidates(const Graph& g, const std::vector<Schema>& plans,
                                                  std::string_view topic, const RetrievalConfig& cfg);

double length_penalty(std::size_t length, const RetrievalConfig& cfg);

// Scores each candidate independently; output is in input order. Each
// distinct schema is encoded once per call.
std::vector<ScoredCandidate> score_candidates(const Codebook& cb, const Hypervector& query_hv,
                                              const std::vector<CandidatePath>& candidates, const IdfTable& idf,
                                              const RetrievalConfig& cfg);

// Rank order: higher total, then shorter path, then lexicographic schema,
// then lexicographic entity chain.
bool ranks_before(const ScoredCandidate& a, const ScoredCandidate& b);

// The k best under ranks_before, sorted; fewer when fewer exist.
std::vector<ScoredCandidate> top_k(std::vector<ScoredCandidate> scored, std::size_t k);

struct RetrieveOptions {
    // Use question.gold_schema as the plan hint when present.
    bool use_gold_hint = true;
};

// enumerate_plans → select_query_plan → encode plan → instantiate_candidates
// → score_candidates → top_k.
RetrievalResult retrieve(const Graph& g, const SchemaGraph& sg, const Codebook& cb, const IdfTable& idf,
                         const Question& question, const RetrievalConfig& cfg, const RetrieveOptions& opts = {});

// Candidate schemas of a question under the inference settings; feeds IDF.
std::vector<Schema> candidate_schemas(const Graph& g, const SchemaGraph& sg, const Question& question,
                                      const RetrievalConfig& cfg);

IdfTable build_idf(const Graph& g, const SchemaGraph& sg, const std::vector<Question>& training,
                   const RetrievalConfig& cfg);

// One JSON object per line: question_id, plan, candidates[{schema, chain, sim,
// idf_bonus, length_penalty, total}], top_k, timings_us.
void write_result(std::ostream& out, const RetrievalResult& result);
RetrievalResult parse_result(std::string_view line);

}  // namespace pathhd
