#include "pathhd/pipeline.hpp"

#include <algorithm>
#include <nlohmann/json.hpp>
#include <ostream>

namespace pathhd {

bool is_gold_hit(const ScoredCandidate& candidate, const Question& question) {
    if (!question.gold_schema && !question.gold_answers) return false;
    if (question.gold_schema && candidate.path.schema != *question.gold_schema) return false;
    if (question.gold_answers) {
        const auto& answers = *question.gold_answers;
        if (std::find(answers.begin(), answers.end(), candidate.path.terminal()) == answers.end()) return false;
    }
    return true;
}

std::optional<std::size_t> gold_rank(const RetrievalResult& result, const Question& question) {
    for (std::size_t i = 0; i < result.candidates.size(); ++i) {
        if (is_gold_hit(result.candidates[i], question)) return i;
    }
    return std::nullopt;
}

std::vector<std::string> verbalize_top_k(const RetrievalResult& result) {
    std::vector<std::string> out;
    out.reserve(result.top_k.size());
    for (std::size_t i = 0; i < result.top_k.size(); ++i) out.push_back(verbalize_path(result.top(i).path));
    return out;
}

std::string_view to_string(AnswerStatus status) noexcept {
    switch (status) {
        case AnswerStatus::Ok: return "ok";
        case AnswerStatus::NoCandidates: return "no_candidates";
        case AnswerStatus::TransportFailure: return "transport_error";
        case AnswerStatus::ParseFailure: return "parse_error";
    }
    return "unknown";
}

AnswerRecord answer_question(const PipelineContext& ctx, const Question& question, LlmClient& client) {
    AnswerRecord rec;
    rec.question_id = question.id;
    const auto result =
        retrieve(ctx.graph, ctx.schema_graph, ctx.codebook, ctx.idf, question, ctx.config, ctx.options);
    if (result.empty()) {
        rec.status = AnswerStatus::NoCandidates;
        if (question.gold_answers) rec.correct = false;
        return rec;
    }
    rec.paths = verbalize_top_k(result);
    const PromptBundle bundle = render_prompt(question.text, rec.paths);
    rec.prompt_bytes = bundle.rendered.size();

    CallStats stats;
    try {
        rec.adjudication = adjudicate(client, bundle, &stats);
    } catch (const TransportError& e) {
        rec.status = AnswerStatus::TransportFailure;
        rec.error = e.what();
    } catch (const ResponseParseError& e) {
        rec.status = AnswerStatus::ParseFailure;
        rec.error = e.what();
    }
    rec.call_count = stats.completed;
    rec.attempts = stats.attempts;
    if (question.gold_answers) {
        const auto& answers = *question.gold_answers;
        rec.correct = rec.adjudication &&
                      std::find(answers.begin(), answers.end(), rec.adjudication->answer) != answers.end();
    }
    return rec;
}

void write_answer(std::ostream& out, const AnswerRecord& r) {
    nlohmann::json j = {{"question_id", r.question_id}, {"status", to_string(r.status)}};
    if (r.adjudication) {
        const auto& a = *r.adjudication;
        std::vector<std::string> cited;
        for (std::size_t i : a.supporting_indices) cited.push_back(r.paths.at(i - 1));
        j["answer"] = a.answer;
        j["supporting_indices"] = a.supporting_indices;
        j["supporting_paths"] = cited;
        j["rationale"] = a.rationale;
        if (a.dropped_indices) j["dropped_indices"] = true;
    } else {
        j["answer"] = nullptr;
        j["supporting_indices"] = nlohmann::json::array();
        j["supporting_paths"] = nlohmann::json::array();
        j["rationale"] = nullptr;
    }
    j["call_count"] = r.call_count;
    j["attempts"] = r.attempts;
    j["prompt_bytes"] = r.prompt_bytes;
    if (r.correct) j["correct"] = *r.correct;
    if (!r.error.empty()) j["error"] = r.error;
    out << j.dump() << '\n';
}

}  // namespace pathhd
