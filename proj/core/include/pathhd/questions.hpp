#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "pathhd/graph.hpp"
#include "pathhd/schema.hpp"

namespace pathhd {

struct Question {
    std::string id;
    std::string text;
    std::string topic_entity;
    std::optional<std::vector<std::string>> gold_answers;
    std::optional<Schema> gold_schema;  // synthetic data only
};

// JSON Lines, one object per line:
//   {"id": "...", "text": "...", "topic_entity": "...",
//    "gold_answers": ["..."], "gold_schema": ["r1", "r2"]}
// The last two fields are optional. Blank lines are skipped. When `graph` is
// given, every topic entity must be one of its entities.
// Throws ParseError (with line number) on malformed records.
std::vector<Question> load_questions(std::istream& in, const Graph* graph = nullptr);
std::vector<Question> load_questions_file(const std::filesystem::path& path, const Graph* graph = nullptr);

void write_question(std::ostream& out, const Question& q);

// Inverse-frequency statistics over training questions.
class IdfTable {
public:
    IdfTable() = default;
    IdfTable(std::size_t n_train, std::map<std::string, std::size_t> freq)
        : n_train_(n_train), freq_(std::move(freq)) {}

    std::size_t n_train() const noexcept { return n_train_; }
    // Number of training questions whose candidate set contains the schema.
    std::size_t freq(const Schema& s) const;
    const std::map<std::string, std::size_t>& frequencies() const noexcept { return freq_; }

    // log(1 + N_train / (1 + freq(schema)))
    double idf(const Schema& s) const { return value(n_train_, freq(s)); }
    static double value(std::size_t n_train, std::size_t freq);

private:
    std::size_t n_train_ = 0;
    std::map<std::string, std::size_t> freq_;
};

// freq counts questions, not paths: a schema seen several times in one
// question's candidate set contributes 1. Throws ConfigError if a key of
// candidate_sets is not a question id.
IdfTable compute_idf(const std::vector<Question>& questions,
                     const std::map<std::string, std::vector<Schema>>& candidate_sets);

}  // namespace pathhd
