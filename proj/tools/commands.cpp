#include "commands.hpp"

#include <atomic>
#include <cmath>
#include <condition_variable>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <sstream>
#include <thread>

#include "pathhd/adjudicator.hpp"
#include "pathhd/codebook.hpp"
#include "pathhd/error.hpp"
#include "pathhd/pipeline.hpp"
#include "pathhd/theory.hpp"

namespace pathhd::cli {

namespace {

// Runs work(i) for i in [0, n) on `threads` workers and hands each result to
// sink(i, result) on the calling thread in index order.
template <typename T, typename Work, typename Sink>
void run_ordered(std::size_t n, std::size_t threads, Work work, Sink sink) {
    if (threads <= 1 || n <= 1) {
        for (std::size_t i = 0; i < n; ++i) sink(i, work(i));
        return;
    }
    struct Slot {
        std::optional<T> value;
        std::exception_ptr error;
        bool done = false;
    };
    std::vector<Slot> slots(n);
    std::mutex mu;
    std::condition_variable cv;
    std::atomic<std::size_t> next{0};
    std::atomic<bool> stop{false};

    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < std::min(threads, n); ++w) {
        pool.emplace_back([&] {
            for (std::size_t i; !stop && (i = next.fetch_add(1)) < n;) {
                Slot local;
                try {
                    local.value.emplace(work(i));
                } catch (...) {
                    local.error = std::current_exception();
                }
                {
                    std::lock_guard lock(mu);
                    slots[i].value = std::move(local.value);
                    slots[i].error = local.error;
                    slots[i].done = true;
                }
                cv.notify_all();
            }
        });
    }
    auto join = [&] {
        stop = true;
        for (auto& t : pool) t.join();
    };
    try {
        for (std::size_t i = 0; i < n; ++i) {
            std::unique_lock lock(mu);
            cv.wait(lock, [&] { return slots[i].done; });
            Slot slot = std::move(slots[i]);
            lock.unlock();
            if (slot.error) std::rethrow_exception(slot.error);
            sink(i, std::move(*slot.value));
        }
    } catch (...) {
        join();
        throw;
    }
    join();
}

// Append-only record sink; "-" is stdout.
class RecordSink {
public:
    explicit RecordSink(const std::string& path) {
        if (path == "-") {
            out_ = &std::cout;
            return;
        }
        file_ = std::make_unique<std::ofstream>(path, std::ios::app | std::ios::binary);
        if (!*file_) throw IoError("cannot open output file '" + path + "'");
        out_ = file_.get();
    }
    std::ostream& stream() { return *out_; }
    void flush() {
        out_->flush();
        if (!*out_) throw IoError("write to output failed");
    }

private:
    std::unique_ptr<std::ofstream> file_;
    std::ostream* out_ = nullptr;
};

struct Inputs {
    Graph graph;
    SchemaGraph schema_graph;
    std::optional<Codebook> codebook;
    std::vector<Question> questions;
    IdfTable idf;
};

Inputs load_inputs(const RetrieveCmd& cmd, const RetrievalConfig& cfg) {
    Inputs in;
    in.graph = load_triples_file(cmd.triples);
    in.schema_graph = SchemaGraph::build(in.graph);
    in.questions = load_questions_file(cmd.questions, &in.graph);

    if (cmd.codebook.empty()) {
        std::vector<std::string> rels(in.graph.relations().begin(), in.graph.relations().end());
        in.codebook = Codebook::build(cfg.hdc, std::move(rels));
    } else {
        in.codebook = Codebook::load_file(cmd.codebook);
        for (const auto& r : in.graph.relations()) {
            if (!in.codebook->contains(r)) {
                throw ConfigError("vocabulary mismatch: relation '" + r + "' of " + cmd.triples +
                                  " is missing from codebook " + cmd.codebook);
            }
        }
    }

    if (cmd.retrieval.train_questions.empty()) {
        in.idf = build_idf(in.graph, in.schema_graph, in.questions, cfg);
    } else {
        const auto train = load_questions_file(cmd.retrieval.train_questions, &in.graph);
        in.idf = build_idf(in.graph, in.schema_graph, train, cfg);
    }
    return in;
}

void echo_config(const RetrievalConfig& cfg, std::uint64_t seed) {
    std::cerr << "config: family=" << to_string(cfg.hdc.family) << " d=" << cfg.hdc.dimension()
              << " m=" << cfg.hdc.block_size << " alpha=" << cfg.alpha << " beta=" << cfg.beta
              << " lambda=" << cfg.lambda << " k=" << cfg.k << " l_max=" << cfg.l_max << " beam="
              << (cfg.beam == kUnboundedBeam ? std::string("unbounded") : std::to_string(cfg.beam))
              << " penalty_mode=" << to_string(cfg.penalty_mode) << " seed=" << seed << '\n';
}

void refuse_overwrite(const std::filesystem::path& p, bool force) {
    if (!force && std::filesystem::exists(p)) {
        throw IoError("refusing to overwrite existing file '" + p.string() + "' (use --force)");
    }
}

}  // namespace

HdcConfig HdcFlags::resolve(std::uint64_t seed) const {
    const Family f = parse_family(family);
    if (f == Family::Ghrr) {
        if (block_size == 0 || dim % (block_size * block_size) != 0) {
            throw ConfigError("--dim " + std::to_string(dim) + " is not divisible by m^2 = " +
                              std::to_string(block_size * block_size));
        }
        auto cfg = HdcConfig::ghrr(dim, block_size, seed, parse_block_family(block_family));
        cfg.validate();
        return cfg;
    }
    auto cfg = HdcConfig::flat(f, dim, seed);
    cfg.validate();
    return cfg;
}

RetrievalConfig RetrievalFlags::resolve(const HdcConfig& hdc) const {
    RetrievalConfig cfg;
    cfg.hdc = hdc;
    cfg.alpha = alpha;
    cfg.beta = beta;
    cfg.lambda = lambda;
    cfg.k = k;
    cfg.l_max = l_max;
    cfg.beam = beam == 0 ? kUnboundedBeam : beam;
    cfg.penalty_mode = parse_penalty_mode(penalty_mode);
    cfg.validate();
    return cfg;
}

int run_codebook(const CodebookCmd& cmd, std::uint64_t seed) {
    const HdcConfig hdc = cmd.hdc.resolve(seed);
    refuse_overwrite(cmd.out, cmd.force);
    const Graph g = load_triples_file(cmd.triples);
    std::vector<std::string> rels(g.relations().begin(), g.relations().end());
    const Codebook cb = Codebook::build(hdc, std::move(rels));
    cb.save_file(cmd.out);
    std::cout << "codebook: " << cmd.out << " family=" << to_string(hdc.family) << " d=" << hdc.dimension()
              << " D=" << hdc.num_blocks << " m=" << hdc.block_size << " symbols=" << cb.size() << '\n';
    return kOk;
}

int run_retrieve(const RetrieveCmd& cmd, std::uint64_t seed) {
    const RetrievalConfig cfg = cmd.retrieval.resolve(cmd.hdc.resolve(seed));
    echo_config(cfg, seed);
    Inputs in = load_inputs(cmd, cfg);
    RetrievalConfig run_cfg = cfg;
    run_cfg.hdc = in.codebook->config();
    RetrieveOptions opts;
    opts.use_gold_hint = !cmd.retrieval.no_gold_hint;

    RecordSink sink(cmd.out);
    std::size_t gold_questions = 0, hit1 = 0, hitk = 0;
    double sum_candidates = 0;
    StageTimings sum_t;
    run_ordered<RetrievalResult>(
        in.questions.size(), cmd.threads,
        [&](std::size_t i) {
            return retrieve(in.graph, in.schema_graph, *in.codebook, in.idf, in.questions[i], run_cfg, opts);
        },
        [&](std::size_t i, RetrievalResult r) {
            write_result(sink.stream(), r);
            sink.flush();
            sum_candidates += static_cast<double>(r.candidates.size());
            sum_t.plan_us += r.timings.plan_us;
            sum_t.instantiate_us += r.timings.instantiate_us;
            sum_t.encode_us += r.timings.encode_us;
            sum_t.score_us += r.timings.score_us;
            sum_t.select_us += r.timings.select_us;
            const Question& q = in.questions[i];
            if (q.gold_schema || q.gold_answers) {
                ++gold_questions;
                const auto rank = gold_rank(r, q);
                if (rank && *rank == 0) ++hit1;
                if (rank && *rank < r.top_k.size()) ++hitk;
            }
        });

    const double n = static_cast<double>(std::max<std::size_t>(in.questions.size(), 1));
    std::cout << std::fixed << std::setprecision(3);
    std::cout << "questions=" << in.questions.size() << " k=" << run_cfg.k
              << " mean_candidates=" << sum_candidates / n << '\n';
    std::cout << "mean_us plan=" << sum_t.plan_us / n << " instantiate=" << sum_t.instantiate_us / n
              << " encode=" << sum_t.encode_us / n << " score=" << sum_t.score_us / n
              << " select=" << sum_t.select_us / n << '\n';
    if (gold_questions > 0) {
        const double g = static_cast<double>(gold_questions);
        std::cout << "gold_questions=" << gold_questions << " hit@1=" << hit1 / g << " hit@" << run_cfg.k << "="
                  << hitk / g << '\n';
    }
    return kOk;
}

int run_answer(const AnswerCmd& cmd, std::uint64_t seed) {
    const RetrievalConfig cfg = cmd.base.retrieval.resolve(cmd.base.hdc.resolve(seed));
    if (cmd.mock == !cmd.endpoint.empty()) {
        throw ConfigError("answer needs exactly one of --mock-llm or --llm-endpoint");
    }
    std::unique_ptr<LlmClient> client;
    if (cmd.mock) {
        client = std::make_unique<MockLlmClient>();
    } else {
        ClientContract contract;
        contract.endpoint = cmd.endpoint;
        contract.timeout_seconds = cmd.timeout;
        contract.max_retries = cmd.retries;
        contract.token_env = cmd.token_env;
        contract.max_tokens = cmd.max_tokens;
        client = std::make_unique<HttpLlmClient>(contract);
    }
    echo_config(cfg, seed);
    Inputs in = load_inputs(cmd.base, cfg);
    RetrievalConfig run_cfg = cfg;
    run_cfg.hdc = in.codebook->config();
    const PipelineContext ctx{in.graph, in.schema_graph, *in.codebook, in.idf, run_cfg,
                              RetrieveOptions{!cmd.base.retrieval.no_gold_hint}};

    RecordSink sink(cmd.base.out);
    std::size_t ok = 0, transport = 0, parse = 0, empty = 0, graded = 0, correct = 0, calls = 0;
    run_ordered<AnswerRecord>(
        in.questions.size(), cmd.base.threads,
        [&](std::size_t i) { return answer_question(ctx, in.questions[i], *client); },
        [&](std::size_t, AnswerRecord r) {
            // Single-call invariant: every question that reached the
            // adjudicator got exactly one response.
            const bool responded = r.status == AnswerStatus::Ok || r.status == AnswerStatus::ParseFailure;
            if (responded && r.call_count != 1) {
                throw std::logic_error("single-call invariant violated for " + r.question_id + ": " +
                                       std::to_string(r.call_count) + " calls");
            }
            write_answer(sink.stream(), r);
            sink.flush();
            calls += r.call_count;
            switch (r.status) {
                case AnswerStatus::Ok: ++ok; break;
                case AnswerStatus::TransportFailure: ++transport; break;
                case AnswerStatus::ParseFailure: ++parse; break;
                case AnswerStatus::NoCandidates: ++empty; break;
            }
            if (r.correct) {
                ++graded;
                if (*r.correct) ++correct;
            }
        });

    std::cout << "questions=" << in.questions.size() << " k=" << run_cfg.k << " ok=" << ok
              << " transport_errors=" << transport << " parse_errors=" << parse << " no_candidates=" << empty
              << " llm_calls=" << calls << '\n';
    if (graded > 0) {
        std::cout << std::fixed << std::setprecision(3) << "accuracy=" << static_cast<double>(correct) / graded
                  << " (" << correct << "/" << graded << ")\n";
    }
    return transport > 0 ? kTransport : kOk;
}

int run_synth(SynthCmd cmd, std::uint64_t seed) {
    cmd.config.seed = seed;
    cmd.config.validate();
    const std::filesystem::path dir(cmd.out_dir);
    refuse_overwrite(dir / (cmd.stem + ".triples.tsv"), cmd.force);
    refuse_overwrite(dir / (cmd.stem + ".questions.jsonl"), cmd.force);
    const auto bench = generate_synthetic(cmd.config);
    const auto files = write_synthetic(bench, dir, cmd.stem);
    std::cout << "triples: " << files.triples.string() << " (" << bench.triples.size() << ")\n"
              << "questions: " << files.questions.string() << " (" << bench.questions.size() << ")\n";
    return kOk;
}

namespace {

struct Check {
    std::string experiment;
    std::string metric;
    double value;
    std::string relation;  // "<=", ">=", "=="
    double threshold;
    bool pass;
};

}  // namespace

int run_validate(const ValidateCmd& cmd, std::uint64_t seed) {
    if (!(cmd.epsilon > 0.0 && cmd.epsilon < 1.0)) throw ConfigError("--epsilon must lie in (0, 1)");
    const std::set<std::string> known{"tail", "capacity", "separation", "order", "scaling"};
    std::set<std::string> selected;
    for (const auto& e : cmd.experiments) {
        if (!known.contains(e)) throw ConfigError("unknown experiment '" + e + "'");
        selected.insert(e);
    }
    TailConfig tail_cfg;
    tail_cfg.epsilon = cmd.epsilon;
    tail_cfg.trials = cmd.tail_trials;
    tail_cfg.seed = seed;
    tail_cfg.threads = cmd.threads;
    tail_cfg.validate();

    std::vector<Check> checks;
    auto record = [&](const std::string& exp, const std::string& metric, double value, const std::string& rel,
                      double threshold) {
        bool pass = false;
        if (rel == "<=") pass = value <= threshold;
        else if (rel == ">=") pass = value >= threshold;
        else pass = value == threshold;
        checks.push_back({exp, metric, value, rel, threshold, pass});
    };
    auto emit = [&](std::string_view name, const Table& t) {
        const auto w = write_table(cmd.out_dir, name, t);
        std::cerr << "wrote " << w.tsv.string() << '\n';
    };

    double fitted_c = std::numeric_limits<double>::quiet_NaN();
    if (selected.contains("tail")) {
        const auto r = run_tail_experiment(tail_cfg);
        emit("tail", r.to_table());
        fitted_c = r.fitted_c;
        record("tail", "monotone", r.monotone ? 1.0 : 0.0, "==", 1.0);
        for (const auto& p : r.points) {
            record("tail", "rate@d=" + std::to_string(p.d), p.rate, "<=", std::min(1.0, 10.0 * p.hoeffding));
        }
    }
    if (selected.contains("capacity")) {
        CapacityConfig c;
        c.seed = seed;
        c.threads = cmd.threads;
        if (std::isfinite(fitted_c) && fitted_c > 0) c.c = fitted_c;
        const auto r = run_capacity_experiment(c);
        emit("capacity", r.to_table());
        const double bound =
            std::ceil(2.0 / (c.epsilon * c.epsilon) * std::log(2.0 * static_cast<double>(c.distractors) / c.delta));
        record("capacity", "measured_d", r.measured_d ? static_cast<double>(*r.measured_d) : INFINITY, "<=", bound);
    }
    if (selected.contains("separation")) {
        SeparationConfig c;
        c.seed = seed;
        c.threads = cmd.threads;
        const auto r = run_separation_check(c);
        emit("separation", r.to_table());
        record("separation", "exact_matches", static_cast<double>(r.exact_matches), "==",
               static_cast<double>(c.trials));
        record("separation", "success_rate", r.success_rate, ">=", 1.0 - c.delta);
    }
    if (selected.contains("order")) {
        OrderConfig c;
        c.seed = seed;
        c.threads = cmd.threads;
        const auto r = run_order_sensitivity(c);
        emit("order", r.to_table());
        for (const auto& row : r.rows) {
            const std::string metric = std::string(to_string(row.family)) + "@l=" + std::to_string(row.length);
            if (is_commutative(row.family)) record("order", metric + " |mean-1|", std::abs(row.mean_sim - 1.0), "<=", 1e-9);
            else record("order", metric + " mean", row.mean_sim, "<=", 0.1);
        }
    }
    if (selected.contains("scaling")) {
        ScalingConfig c;
        c.seed = seed;
        const auto r = run_scaling_benchmark(c);
        emit("scaling", r.to_table());
        record("scaling", "r_squared", r.r_squared, ">=", 0.98);
        record("scaling", "max_relative_deviation", r.max_relative_deviation, "<=", 0.2);
    }

    Table summary({{"experiment", ColumnType::Text},
                   {"metric", ColumnType::Text},
                   {"value", ColumnType::Real, true},
                   {"relation", ColumnType::Text},
                   {"threshold", ColumnType::Real},
                   {"result", ColumnType::Text}});
    summary.set_meta("seed", static_cast<std::int64_t>(seed));
    bool all_pass = true;
    std::cout << std::left << std::setw(11) << "experiment" << std::setw(36) << "metric" << std::setw(14) << "value"
              << std::setw(16) << "threshold" << "result\n";
    for (const auto& c : checks) {
        all_pass = all_pass && c.pass;
        const double shown = std::isfinite(c.value) ? c.value : std::numeric_limits<double>::quiet_NaN();
        summary.add_row({c.experiment, c.metric, shown, c.relation, c.threshold, std::string(c.pass ? "PASS" : "FAIL")});
        std::ostringstream th;
        th << c.relation << ' ' << c.threshold;
        std::cout << std::setw(11) << c.experiment << std::setw(36) << c.metric << std::setw(14) << c.value
                  << std::setw(16) << th.str() << (c.pass ? "PASS" : "FAIL") << '\n';
    }
    emit("validate_summary", summary);
    if (!all_pass) {
        std::cerr << "validation failed:\n";
        for (const auto& c : checks) {
            if (!c.pass) std::cerr << "  " << c.experiment << ": " << c.metric << " = " << c.value << ", required "
                                   << c.relation << ' ' << c.threshold << '\n';
        }
    }
    return all_pass ? kOk : kValidation;
}

}  // namespace pathhd::cli
