#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "pathhd/hypervector.hpp"
#include "pathhd/retriever.hpp"
#include "pathhd/synth.hpp"

namespace pathhd::cli {

enum ExitCode : int { kOk = 0, kValidation = 1, kIo = 2, kTransport = 3 };

struct HdcFlags {
    std::string family = "ghrr";
    std::size_t dim = 4096;
    std::size_t block_size = 4;
    std::string block_family = "householder";

    HdcConfig resolve(std::uint64_t seed) const;
};

struct RetrievalFlags {
    double alpha = 0.2;
    double beta = 0.1;
    double lambda = 0.8;
    std::size_t k = 3;
    std::size_t l_max = 3;
    std::size_t beam = 10000;  // 0 = unbounded
    std::string penalty_mode = "as_printed";
    bool no_gold_hint = false;
    std::string train_questions;

    RetrievalConfig resolve(const HdcConfig& hdc) const;
};

struct CodebookCmd {
    std::string triples;
    std::string out;
    bool force = false;
    HdcFlags hdc;
};

struct RetrieveCmd {
    std::string triples;
    std::string questions;
    std::string codebook;  // empty: build from the graph's relations
    std::string out = "-";
    HdcFlags hdc;
    RetrievalFlags retrieval;
    std::size_t threads = 1;
};

struct AnswerCmd {
    RetrieveCmd base;
    bool mock = false;
    std::string endpoint;
    std::string token_env = "PATHHD_LLM_TOKEN";
    double timeout = 60.0;
    std::size_t retries = 0;
    int max_tokens = 256;
};

struct SynthCmd {
    SynthConfig config;
    std::string out_dir = ".";
    std::string stem = "synth";
    bool force = false;
};

struct ValidateCmd {
    std::vector<std::string> experiments{"tail", "capacity", "separation", "order", "scaling"};
    std::string out_dir = "validation";
    double epsilon = 0.1;
    std::size_t tail_trials = 100000;
    std::size_t threads = 0;
};

int run_codebook(const CodebookCmd& cmd, std::uint64_t seed);
int run_retrieve(const RetrieveCmd& cmd, std::uint64_t seed);
int run_answer(const AnswerCmd& cmd, std::uint64_t seed);
int run_synth(SynthCmd cmd, std::uint64_t seed);
int run_validate(const ValidateCmd& cmd, std::uint64_t seed);

}  // namespace pathhd::cli
