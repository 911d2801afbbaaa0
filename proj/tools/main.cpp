#include <CLI11.hpp>
#include <iostream>

#include "commands.hpp"
#include "pathhd/adjudicator.hpp"
#include "pathhd/error.hpp"

using namespace pathhd;
using namespace pathhd::cli;

namespace {

void add_hdc_flags(CLI::App* app, HdcFlags& f) {
    app->add_option("--family", f.family, "Binding family: ghrr, fhrr, hrr, real, bipolar, comm_mix")
        ->capture_default_str();
    app->add_option("--dim", f.dim, "Hypervector dimension d (D*m^2 for ghrr)")->capture_default_str();
    app->add_option("-m,--block-size", f.block_size, "GHRR block edge m")->capture_default_str();
    app->add_option("--block-family", f.block_family, "GHRR atom blocks: householder or diagonal")
        ->capture_default_str();
}

void add_retrieve_flags(CLI::App* app, RetrieveCmd& c) {
    app->add_option("--triples", c.triples, "Knowledge graph triples (TSV)")->required();
    app->add_option("--questions", c.questions, "Questions (JSON Lines)")->required();
    app->add_option("--codebook", c.codebook, "Codebook file; built from the graph when omitted");
    app->add_option("-o,--out", c.out, "Output records (appended; - for stdout)")->capture_default_str();
    app->add_option("--threads", c.threads, "Questions processed concurrently")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    add_hdc_flags(app, c.hdc);
    auto& r = c.retrieval;
    app->add_option("--alpha", r.alpha, "IDF bonus weight")->capture_default_str();
    app->add_option("--beta", r.beta, "Length term weight")->capture_default_str();
    app->add_option("--lambda", r.lambda, "Length term base, in (0, 1)")->capture_default_str();
    app->add_option("-k,--top-k", r.k, "Paths kept for adjudication")->capture_default_str();
    app->add_option("--l-max", r.l_max, "Maximum path length")->capture_default_str();
    app->add_option("--beam", r.beam, "Beam width for plans and frontiers (0 = unbounded)")->capture_default_str();
    app->add_option("--penalty-mode", r.penalty_mode, "as_printed or length_proportional")->capture_default_str();
    app->add_flag("--no-gold-hint", r.no_gold_hint, "Ignore gold_schema when choosing the query plan");
    app->add_option("--train-questions", r.train_questions,
                    "Questions used for IDF statistics (default: the evaluated questions)");
}

int exit_with(int code, const std::string& message) {
    std::cerr << "pathhd: " << message << '\n';
    return code;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Hyperdimensional path retrieval over knowledge graphs"};
    app.require_subcommand(1);
    app.set_config("--config", "", "Read options from a TOML file (flags take precedence)");
    std::uint64_t seed = 0;
    app.add_option("--seed", seed, "Root seed for every random stream")->capture_default_str();

    CodebookCmd codebook;
    auto* cb = app.add_subcommand("codebook", "Build a relation codebook from a triples file");
    cb->add_option("--triples", codebook.triples, "Knowledge graph triples (TSV)")->required();
    cb->add_option("-o,--out", codebook.out, "Codebook output file")->required();
    cb->add_flag("--force", codebook.force, "Overwrite an existing output file");
    add_hdc_flags(cb, codebook.hdc);

    RetrieveCmd retrieve;
    auto* rt = app.add_subcommand("retrieve", "Score candidate paths and write one record per question");
    add_retrieve_flags(rt, retrieve);

    AnswerCmd answer;
    auto* an = app.add_subcommand("answer", "Retrieve, then adjudicate each question with one LLM call");
    add_retrieve_flags(an, answer.base);
    auto* mock = an->add_flag("--mock-llm", answer.mock, "Use the deterministic offline client");
    auto* endpoint = an->add_option("--llm-endpoint", answer.endpoint, "Completion endpoint URL");
    mock->excludes(endpoint);
    endpoint->excludes(mock);
    an->add_option("--token-env", answer.token_env, "Environment variable holding the bearer token")
        ->capture_default_str();
    an->add_option("--timeout", answer.timeout, "Request timeout in seconds")->capture_default_str();
    an->add_option("--retries", answer.retries, "Retries on transport failure")->capture_default_str();
    an->add_option("--max-tokens", answer.max_tokens, "Completion length limit")->capture_default_str();

    SynthCmd synth;
    auto* sy = app.add_subcommand("synth", "Generate a synthetic graph with planted gold paths");
    sy->add_option("--entities", synth.config.entities, "Entity count E")->capture_default_str();
    sy->add_option("--relations", synth.config.relations, "Relation count R")->capture_default_str();
    sy->add_option("--triples", synth.config.triples, "Triple count T")->capture_default_str();
    sy->add_option("--questions", synth.config.questions, "Question count Q")->capture_default_str();
    sy->add_option("--max-gold-length", synth.config.max_gold_length, "Longest gold path")->capture_default_str();
    sy->add_option("--out-dir", synth.out_dir, "Output directory")->capture_default_str();
    sy->add_option("--stem", synth.stem, "File name stem")->capture_default_str();
    sy->add_flag("--force", synth.force, "Overwrite existing files");

    ValidateCmd validate;
    auto* va = app.add_subcommand("validate", "Run Monte Carlo checks and write result tables");
    va->add_option("--experiments", validate.experiments, "tail, capacity, separation, order, scaling")
        ->delimiter(',')
        ->capture_default_str();
    va->add_option("--out-dir", validate.out_dir, "Directory for result tables")->capture_default_str();
    va->add_option("--epsilon", validate.epsilon, "Tail threshold, in (0, 1)")->capture_default_str();
    va->add_option("--tail-trials", validate.tail_trials, "Trials per dimension in the tail experiment")
        ->capture_default_str();
    va->add_option("--threads", validate.threads, "Worker threads (0 = all cores)")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kValidation;
    }

    try {
        if (cb->parsed()) return run_codebook(codebook, seed);
        if (rt->parsed()) return run_retrieve(retrieve, seed);
        if (an->parsed()) return run_answer(answer, seed);
        if (sy->parsed()) return run_synth(synth, seed);
        if (va->parsed()) return run_validate(validate, seed);
    } catch (const IoError& e) {
        return exit_with(kIo, e.what());
    } catch (const ParseError& e) {
        return exit_with(kIo, e.what());
    } catch (const TransportError& e) {
        return exit_with(kTransport, e.what());
    } catch (const Error& e) {
        return exit_with(kValidation, e.what());
    } catch (const std::exception& e) {
        return exit_with(kValidation, e.what());
    }
    return kValidation;
}
