#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "pathhd/graph.hpp"
#include "pathhd/questions.hpp"
#include "pathhd/retriever.hpp"

namespace pathhd {

// Entity kinds of the synthetic graph. Names are "<kind>_<index>".
inline constexpr std::string_view kEntityKinds[] = {"person", "organization", "place", "work", "event"};

// Kind prefix of a synthetic entity name ("person_007" -> "person"); the
// whole name when it has no underscore.
std::string_view entity_type(std::string_view entity);

struct SynthConfig {
    std::size_t entities = 200;         // E
    std::size_t relations = 20;         // R
    std::size_t triples = 2000;         // T
    std::size_t questions = 100;        // Q
    std::size_t max_gold_length = 3;    // ℓ*
    std::uint64_t seed = 0;

    // Throws ConfigError when T < Q·ℓ*, T exceeds what the typed relations
    // admit, or any size is zero.
    void validate() const;
};

struct SynthBenchmark {
    SynthConfig config;
    std::vector<Triple> triples;           // exactly config.triples, in generation order
    std::vector<Question> questions;       // ids q0000, q0001, ...
    std::vector<CandidatePath> gold_paths;  // parallel to questions
};

// Random typed graph with one planted gold chain per question. Every relation
// has a fixed head and tail kind. Each gold schema has exactly one walk from
// its question's topic entity, so the gold chain is the only candidate whose
// schema equals the gold schema.
SynthBenchmark generate_synthetic(const SynthConfig& cfg);

// Number of walks from `topic` that follow `schema` exactly.
std::size_t count_instantiations(const Graph& g, std::string_view topic, const Schema& schema);

// Writes <dir>/<stem>.triples.tsv and <dir>/<stem>.questions.jsonl.
struct SynthFiles {
    std::filesystem::path triples;
    std::filesystem::path questions;
};
SynthFiles write_synthetic(const SynthBenchmark& bench, const std::filesystem::path& dir, std::string_view stem);

}  // namespace pathhd
