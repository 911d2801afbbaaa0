#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "pathhd/adjudicator.hpp"
#include "pathhd/retriever.hpp"

namespace pathhd {

// Immutable inputs shared by every question of a batch.
struct PipelineContext {
    const Graph& graph;
    const SchemaGraph& schema_graph;
    const Codebook& codebook;
    const IdfTable& idf;
    RetrievalConfig config;
    RetrieveOptions options;
};

// Whether a candidate matches the question's gold annotation: its schema
// equals gold_schema (when given) and its terminal is a gold answer (when
// given). False when the question carries neither.
bool is_gold_hit(const ScoredCandidate& candidate, const Question& question);

// Rank (0-based) of the first gold hit among result.candidates.
std::optional<std::size_t> gold_rank(const RetrievalResult& result, const Question& question);

// The Top-K candidates of a result, verbalized in rank order.
std::vector<std::string> verbalize_top_k(const RetrievalResult& result);

enum class AnswerStatus { Ok, NoCandidates, TransportFailure, ParseFailure };
std::string_view to_string(AnswerStatus status) noexcept;

struct AnswerRecord {
    std::string question_id;
    AnswerStatus status = AnswerStatus::Ok;
    std::optional<Adjudication> adjudication;
    std::vector<std::string> paths;  // verbalized Top-K shown to the adjudicator
    std::size_t call_count = 0;      // completed LLM responses for this question
    std::size_t attempts = 0;        // requests issued, retries included
    std::size_t prompt_bytes = 0;
    std::string error;
    std::optional<bool> correct;     // exact match against gold_answers
};

// retrieve → verbalize Top-K → render_prompt → adjudicate. Transport and
// parse failures are captured in the record rather than thrown. A question
// without candidates gets no prompt and no call.
AnswerRecord answer_question(const PipelineContext& ctx, const Question& question, LlmClient& client);

// One JSON object per line: question_id, status, answer, supporting_indices,
// supporting_paths, rationale, call_count, attempts, prompt_bytes, and
// optionally correct, dropped_indices and error.
void write_answer(std::ostream& out, const AnswerRecord& record);

}  // namespace pathhd
