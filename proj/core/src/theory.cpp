#include "pathhd/theory.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>
#include <thread>

#include "pathhd/codebook.hpp"
#include "pathhd/error.hpp"
#include "pathhd/ops.hpp"
#include "pathhd/retriever.hpp"
#include "pathhd/rng.hpp"

namespace pathhd {

namespace {

constexpr std::uint64_t kTailTag = 0x7461696c;      // "tail"
constexpr std::uint64_t kCapacityTag = 0x63617061;  // "capa"
constexpr std::uint64_t kSeparationTag = 0x73657061;
constexpr std::uint64_t kOrderTag = 0x6f726465;
constexpr std::uint64_t kScalingTag = 0x7363616c;

std::size_t resolve_threads(std::size_t requested, std::size_t work) {
    std::size_t n = requested == kAutoThreads ? std::thread::hardware_concurrency() : requested;
    n = std::max<std::size_t>(n, 1);
    return std::min(n, std::max<std::size_t>(work, 1));
}

// Calls fn(i) for i in [0, n) across worker threads. fn must only write to
// per-index state.
template <typename Fn>
void parallel_for(std::size_t n, std::size_t threads, Fn&& fn) {
    const std::size_t workers = resolve_threads(threads, n);
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(workers);
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            try {
                for (std::size_t i = w; i < n; i += workers) fn(i);
            } catch (...) {
                errors[w] = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    for (auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
}

std::size_t granularity(Family family, std::size_t block_size) {
    return family == Family::Ghrr ? block_size * block_size : 1;
}

void check_dimension(Family family, std::size_t d, std::size_t block_size) {
    if (family == Family::Ghrr && (block_size == 0 || d % (block_size * block_size) != 0)) {
        throw ConfigError("GHRR dimension " + std::to_string(d) + " is not divisible by m^2 = " +
                          std::to_string(block_size * block_size));
    }
}

Hypervector fold_bind(const std::vector<const Hypervector*>& parts) {
    Hypervector acc = *parts.front();
    for (std::size_t i = 1; i < parts.size(); ++i) acc = bind(acc, *parts[i]);
    return acc;
}

// Interference only ever adds time, so the fastest repetition is the
// least-disturbed estimate of a cell's cost.
double fastest(const std::vector<double>& v) { return *std::min_element(v.begin(), v.end()); }

Cell text(std::string_view s) { return std::string(s); }
Cell integer(std::size_t v) { return static_cast<std::int64_t>(v); }

}  // namespace

HdcConfig sampler_config(Family family, std::size_t d, std::size_t block_size, std::uint64_t seed,
                         BlockFamily blocks) {
    check_dimension(family, d, block_size);
    if (family == Family::Ghrr) return HdcConfig::ghrr(d, block_size, seed, blocks);
    return HdcConfig::flat(family, d, seed);
}

// ---------------------------------------------------------------- tail

void TailConfig::validate() const {
    if (trials == 0) throw ConfigError("tail experiment needs at least one trial");
    if (trials < 1000) throw ConfigError("tail experiment needs >= 1000 trials per dimension");
    if (dims.empty()) throw ConfigError("tail experiment needs at least one dimension");
    for (std::size_t d : dims) {
        if (d < 64) throw ConfigError("tail experiment dimensions must be >= 64");
        check_dimension(family, d, block_size);
    }
    if (!(epsilon > 0.0 && epsilon <= 1.0)) throw ConfigError("epsilon must lie in (0, 1]");
}

TailExperiment run_tail_experiment(const TailConfig& cfg) {
    cfg.validate();
    TailExperiment out;
    out.config = cfg;
    for (std::size_t d : cfg.dims) {
        std::vector<std::uint8_t> hit(cfg.trials, 0);
        parallel_for(cfg.trials, cfg.threads, [&](std::size_t t) {
            const auto sc =
                sampler_config(cfg.family, d, cfg.block_size, derive_key({cfg.seed, kTailTag, d, t}), cfg.block_family);
            const double s = similarity(make_atom(sc, 0), make_atom(sc, 1));
            hit[t] = std::abs(s) >= cfg.epsilon ? 1 : 0;
        });
        TailPoint p;
        p.d = d;
        p.trials = cfg.trials;
        p.exceedances = static_cast<std::size_t>(std::count(hit.begin(), hit.end(), std::uint8_t{1}));
        p.rate = static_cast<double>(p.exceedances) / static_cast<double>(p.trials);
        p.std_error = std::sqrt(p.rate * (1.0 - p.rate) / static_cast<double>(p.trials));
        p.hoeffding = 2.0 * std::exp(-cfg.epsilon * cfg.epsilon * static_cast<double>(d) / 2.0);
        out.points.push_back(p);
    }

    double sxy = 0.0, sxx = 0.0;
    for (const auto& p : out.points) {
        if (p.exceedances == 0) continue;
        const double x = static_cast<double>(p.d) * cfg.epsilon * cfg.epsilon;
        const double y = -std::log(p.rate / 2.0);
        sxy += x * y;
        sxx += x * x;
        ++out.fit_points;
    }
    out.fitted_c = out.fit_points ? sxy / sxx : std::numeric_limits<double>::quiet_NaN();

    std::vector<std::size_t> order(out.points.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return out.points[a].d < out.points[b].d; });
    for (std::size_t i = 1; i < order.size(); ++i) {
        const auto& prev = out.points[order[i - 1]];
        const auto& cur = out.points[order[i]];
        if (cur.rate > prev.rate) out.monotone = false;
        const double band = 2.0 * std::sqrt(prev.std_error * prev.std_error + cur.std_error * cur.std_error);
        if (cur.rate > prev.rate + band) out.monotone_2sigma = false;
    }
    return out;
}

Table TailExperiment::to_table() const {
    Table t({{"family", ColumnType::Text},
             {"d", ColumnType::Integer},
             {"epsilon", ColumnType::Real},
             {"trials", ColumnType::Integer},
             {"exceedances", ColumnType::Integer},
             {"rate", ColumnType::Probability},
             {"std_error", ColumnType::Real},
             {"hoeffding_bound", ColumnType::Probability}});
    for (const auto& p : points) {
        t.add_row({text(to_string(config.family)), integer(p.d), config.epsilon, integer(p.trials),
                   integer(p.exceedances), p.rate, p.std_error, std::min(1.0, p.hoeffding)});
    }
    t.set_meta("family", text(to_string(config.family)));
    t.set_meta("epsilon", config.epsilon);
    t.set_meta("trials", integer(config.trials));
    t.set_meta("block_size", integer(config.block_size));
    t.set_meta("block_family", text(to_string(config.block_family)));
    t.set_meta("seed", static_cast<std::int64_t>(config.seed));
    t.set_meta("fitted_c", fitted_c);
    t.set_meta("fit_points", integer(fit_points));
    t.set_meta("monotone", integer(monotone ? 1 : 0));
    t.set_meta("monotone_2sigma", integer(monotone_2sigma ? 1 : 0));
    return t;
}

// ------------------------------------------------------------ capacity

void CapacityConfig::validate() const {
    if (distractors < 1) throw ConfigError("capacity experiment needs M >= 1");
    if (!(delta > 0.0 && delta < 1.0)) throw ConfigError("delta must lie in (0, 1)");
    if (!(epsilon > 0.0 && epsilon <= 1.0)) throw ConfigError("epsilon must lie in (0, 1]");
    if (!(c > 0.0) || !std::isfinite(c)) throw ConfigError("capacity experiment needs a finite c > 0");
    if (trials < 200) throw ConfigError("capacity experiment needs >= 200 trials");
    if (max_dimension < granularity(family, block_size)) throw ConfigError("max_dimension is too small");
}

double capacity_success_rate(const CapacityConfig& cfg, std::size_t d) {
    cfg.validate();
    std::vector<std::uint8_t> ok(cfg.trials, 0);
    parallel_for(cfg.trials, cfg.threads, [&](std::size_t t) {
        // The trial key does not depend on d, so flat samplers are nested
        // across dimensions.
        const auto sc =
            sampler_config(cfg.family, d, cfg.block_size, derive_key({cfg.seed, kCapacityTag, t}), cfg.block_family);
        const Hypervector q = make_atom(sc, 0);
        bool good = true;
        for (std::size_t i = 1; i <= cfg.distractors && good; ++i) {
            good = std::abs(similarity(q, make_atom(sc, i))) <= cfg.epsilon;
        }
        ok[t] = good ? 1 : 0;
    });
    return static_cast<double>(std::count(ok.begin(), ok.end(), std::uint8_t{1})) / static_cast<double>(cfg.trials);
}

CapacityExperiment run_capacity_experiment(const CapacityConfig& cfg) {
    cfg.validate();
    CapacityExperiment out;
    out.config = cfg;
    out.predicted_d = static_cast<std::size_t>(
        std::ceil(std::log(2.0 * static_cast<double>(cfg.distractors) / cfg.delta) / (cfg.c * cfg.epsilon * cfg.epsilon)));

    const std::size_t unit = granularity(cfg.family, cfg.block_size);
    const double target = 1.0 - cfg.delta;
    auto succeeds = [&](std::size_t k) {
        const std::size_t d = k * unit;
        const double rate = capacity_success_rate(cfg, d);
        out.probes.push_back({d, rate});
        return rate >= target;
    };

    // Doubling until success, then bisection on multiples of `unit`.
    std::size_t lo = 0;  // known failing (0 = none probed)
    std::size_t hi = 1;
    while (!succeeds(hi)) {
        lo = hi;
        if (hi * unit >= cfg.max_dimension) return out;
        hi = std::min(hi * 2, cfg.max_dimension / unit);
        if (hi == lo) return out;
    }
    while (hi - lo > 1) {
        const std::size_t mid = lo + (hi - lo) / 2;
        if (succeeds(mid)) hi = mid;
        else lo = mid;
    }
    out.measured_d = hi * unit;
    out.converged = true;
    return out;
}

Table CapacityExperiment::to_table() const {
    Table t({{"family", ColumnType::Text},
             {"M", ColumnType::Integer},
             {"delta", ColumnType::Real},
             {"epsilon", ColumnType::Real},
             {"c", ColumnType::Real},
             {"probe_d", ColumnType::Integer},
             {"success_rate", ColumnType::Probability}});
    for (const auto& p : probes) {
        t.add_row({text(to_string(config.family)), integer(config.distractors), config.delta, config.epsilon, config.c,
                   integer(p.d), p.success_rate});
    }
    t.set_meta("trials", integer(config.trials));
    t.set_meta("seed", static_cast<std::int64_t>(config.seed));
    t.set_meta("max_dimension", integer(config.max_dimension));
    t.set_meta("predicted_d", integer(predicted_d));
    t.set_meta("measured_d", measured_d ? integer(*measured_d) : Cell(std::string("none")));
    t.set_meta("converged", integer(converged ? 1 : 0));
    return t;
}

// ---------------------------------------------------------- separation

void SeparationConfig::validate() const {
    if (relations < 1) throw ConfigError("separation check needs n >= 1 relations");
    if (relations > 62) throw ConfigError("separation check supports at most 62 relations per path");
    if (distractors < 1) throw ConfigError("separation check needs M >= 1");
    if (!(epsilon > 0.0 && epsilon < 1.0)) throw ConfigError("epsilon must lie in (0, 1)");
    if (!(delta > 0.0 && delta < 1.0)) throw ConfigError("delta must lie in (0, 1)");
    if (trials < 1) throw ConfigError("separation check needs at least one trial");
}

std::size_t SeparationConfig::dimension() const {
    return static_cast<std::size_t>(
        std::ceil(2.0 / (epsilon * epsilon) * std::log(2.0 * static_cast<double>(distractors) / delta)));
}

SeparationExperiment run_separation_check(const SeparationConfig& cfg) {
    cfg.validate();
    SeparationExperiment out;
    out.config = cfg;
    out.d = cfg.dimension();
    const std::size_t n = cfg.relations;

    struct TrialResult {
        bool exact = false;
        bool success = false;
        double max_abs = 0.0;
    };
    std::vector<TrialResult> results(cfg.trials);
    parallel_for(cfg.trials, cfg.threads, [&](std::size_t t) {
        const auto sc = HdcConfig::flat(Family::BipolarXor, out.d, derive_key({cfg.seed, kSeparationTag, t}));
        std::vector<Hypervector> atoms;
        atoms.reserve(n);
        for (std::size_t i = 0; i < n; ++i) atoms.push_back(make_atom(sc, i));
        std::vector<const Hypervector*> parts(n);
        for (std::size_t i = 0; i < n; ++i) parts[i] = &atoms[i];

        const Hypervector q = fold_bind(parts);
        const Hypervector positive = fold_bind(parts);
        TrialResult r;
        r.exact = similarity(q, positive) == 1.0;

        auto rng = CounterRng::stream(sc.seed, {~std::uint64_t{0}});
        const std::uint64_t subsets = (std::uint64_t{1} << n) - 1;  // nonempty subsets
        for (std::size_t j = 0; j < cfg.distractors; ++j) {
            const std::uint64_t mask = rng.below(subsets) + 1;
            std::vector<Hypervector> fresh;
            fresh.reserve(n);
            std::vector<const Hypervector*> dparts(parts);
            for (std::size_t i = 0; i < n; ++i) {
                if (mask & (std::uint64_t{1} << i)) {
                    fresh.push_back(make_atom(sc, n + j * n + i));
                    dparts[i] = &fresh.back();
                }
            }
            r.max_abs = std::max(r.max_abs, std::abs(similarity(q, fold_bind(dparts))));
        }
        r.success = r.max_abs <= cfg.epsilon;
        results[t] = r;
    });

    for (const auto& r : results) {
        out.exact_matches += r.exact ? 1 : 0;
        out.successes += r.success ? 1 : 0;
        out.max_abs_cos = std::max(out.max_abs_cos, r.max_abs);
    }
    out.success_rate = static_cast<double>(out.successes) / static_cast<double>(cfg.trials);
    return out;
}

Table SeparationExperiment::to_table() const {
    Table t({{"n", ColumnType::Integer},
             {"M", ColumnType::Integer},
             {"epsilon", ColumnType::Real},
             {"delta", ColumnType::Real},
             {"d", ColumnType::Integer},
             {"trials", ColumnType::Integer},
             {"exact_matches", ColumnType::Integer},
             {"success_rate", ColumnType::Probability},
             {"max_abs_cos", ColumnType::Real}});
    t.add_row({integer(config.relations), integer(config.distractors), config.epsilon, config.delta, integer(d),
               integer(config.trials), integer(exact_matches), success_rate, max_abs_cos});
    t.set_meta("family", text(to_string(Family::BipolarXor)));
    t.set_meta("seed", static_cast<std::int64_t>(config.seed));
    t.set_meta("passed", integer(passed() ? 1 : 0));
    return t;
}

// --------------------------------------------------- order sensitivity

void OrderConfig::validate() const {
    if (families.empty()) throw ConfigError("order sensitivity needs at least one family");
    if (lengths.empty()) throw ConfigError("order sensitivity needs at least one length");
    for (std::size_t l : lengths) {
        if (l < 2 || l > 8) throw ConfigError("path lengths must lie in [2, 8]");
    }
    if (trials < 1) throw ConfigError("order sensitivity needs at least one trial");
    for (Family f : families) check_dimension(f, dimension, block_size);
}

OrderExperiment run_order_sensitivity(const OrderConfig& cfg) {
    cfg.validate();
    OrderExperiment out;
    out.config = cfg;
    for (Family family : cfg.families) {
        for (std::size_t len : cfg.lengths) {
            std::vector<double> sims(cfg.trials);
            parallel_for(cfg.trials, cfg.threads, [&](std::size_t t) {
                const auto sc = sampler_config(
                    family, cfg.dimension, cfg.block_size,
                    derive_key({cfg.seed, kOrderTag, static_cast<std::uint64_t>(family), len, t}), cfg.block_family);
                std::vector<Hypervector> atoms;
                atoms.reserve(len);
                for (std::size_t i = 0; i < len; ++i) atoms.push_back(make_atom(sc, i));

                std::vector<std::size_t> perm(len);
                auto rng = CounterRng::stream(sc.seed, {~std::uint64_t{0}});
                do {
                    std::iota(perm.begin(), perm.end(), std::size_t{0});
                    for (std::size_t i = len - 1; i > 0; --i) std::swap(perm[i], perm[rng.below(i + 1)]);
                } while (std::is_sorted(perm.begin(), perm.end()));

                std::vector<const Hypervector*> a(len), b(len);
                for (std::size_t i = 0; i < len; ++i) {
                    a[i] = &atoms[i];
                    b[i] = &atoms[perm[i]];
                }
                sims[t] = similarity(fold_bind(a), fold_bind(b));
            });
            OrderRow row;
            row.family = family;
            row.length = len;
            double sum = 0.0;
            for (double s : sims) sum += s;
            row.mean_sim = sum / static_cast<double>(sims.size());
            row.min_sim = *std::min_element(sims.begin(), sims.end());
            row.max_sim = *std::max_element(sims.begin(), sims.end());
            out.rows.push_back(row);
        }
    }
    return out;
}

const OrderRow& OrderExperiment::row(Family family, std::size_t length) const {
    for (const auto& r : rows) {
        if (r.family == family && r.length == length) return r;
    }
    throw ConfigError("no order-sensitivity row for " + std::string(to_string(family)) + " at length " +
                      std::to_string(length));
}

Table OrderExperiment::to_table() const {
    Table t({{"family", ColumnType::Text},
             {"commutative", ColumnType::Integer},
             {"length", ColumnType::Integer},
             {"trials", ColumnType::Integer},
             {"mean_sim", ColumnType::Real},
             {"min_sim", ColumnType::Real},
             {"max_sim", ColumnType::Real}});
    for (const auto& r : rows) {
        t.add_row({text(to_string(r.family)), integer(is_commutative(r.family) ? 1 : 0), integer(r.length),
                   integer(config.trials), r.mean_sim, r.min_sim, r.max_sim});
    }
    t.set_meta("dimension", integer(config.dimension));
    t.set_meta("block_size", integer(config.block_size));
    t.set_meta("block_family", text(to_string(config.block_family)));
    t.set_meta("seed", static_cast<std::int64_t>(config.seed));
    return t;
}

// ------------------------------------------------------------- scaling

void ScalingConfig::validate() const {
    if (counts.size() < 4 || dims.size() < 4) throw ConfigError("scaling grid needs >= 4 values per axis");
    if (path_length < 1) throw ConfigError("scaling path length must be >= 1");
    if (relations < 2) throw ConfigError("scaling needs >= 2 relations");
    if (repetitions < 1) throw ConfigError("scaling needs >= 1 repetition");
    if (!(min_visit_seconds >= 0.0 && min_visit_seconds <= 10.0)) {
        throw ConfigError("scaling min_visit_seconds must be in [0, 10]");
    }
    for (std::size_t d : dims) check_dimension(Family::Ghrr, d, block_size);
    double schemas = 1.0;
    for (std::size_t i = 0; i < path_length; ++i) schemas *= static_cast<double>(relations);
    const std::size_t max_n = *std::max_element(counts.begin(), counts.end());
    if (schemas < static_cast<double>(max_n)) {
        throw ConfigError("relations^path_length must be >= the largest candidate count");
    }
}

namespace {

std::vector<std::string> scaling_relations(std::size_t r) {
    std::vector<std::string> out;
    for (std::size_t i = 0; i < r; ++i) out.push_back("rel" + std::to_string(i));
    return out;
}

std::vector<CandidatePath> scaling_candidates(std::size_t n, const ScalingConfig& cfg,
                                              const std::vector<std::string>& rels) {
    auto rng = CounterRng::stream(cfg.seed, {kScalingTag, n});
    std::set<std::vector<std::size_t>> seen;
    std::vector<CandidatePath> out;
    out.reserve(n);
    while (out.size() < n) {
        std::vector<std::size_t> idx(cfg.path_length);
        for (auto& i : idx) i = rng.below(rels.size());
        if (!seen.insert(idx).second) continue;
        CandidatePath c;
        for (std::size_t i : idx) c.schema.relations.push_back(rels[i]);
        c.entity_chain.assign(cfg.path_length + 1, "e");
        out.push_back(std::move(c));
    }
    return out;
}

double time_scoring(const Codebook& cb, const Hypervector& query, const std::vector<CandidatePath>& cands,
                    const RetrievalConfig& rc, std::size_t reps) {
    const IdfTable idf;
    using Clock = std::chrono::steady_clock;
    (void)score_candidates(cb, query, cands, idf, rc);  // warm-up
    std::vector<double> secs;
    for (std::size_t r = 0; r < reps; ++r) {
        const auto t0 = Clock::now();
        const auto scored = score_candidates(cb, query, cands, idf, rc);
        secs.push_back(std::chrono::duration<double>(Clock::now() - t0).count());
        if (scored.size() != cands.size()) throw Error("scoring dropped candidates");
    }
    return fastest(secs);
}

}  // namespace

double measure_scoring_seconds(std::size_t n, std::size_t d, const ScalingConfig& cfg) {
    check_dimension(Family::Ghrr, d, cfg.block_size);
    const auto rels = scaling_relations(cfg.relations);
    const Codebook cb = Codebook::build(HdcConfig::ghrr(d, cfg.block_size, cfg.seed), rels);
    const auto cands = scaling_candidates(n, cfg, rels);
    RetrievalConfig rc;
    rc.hdc = cb.config();
    std::vector<std::string> query_schema(cfg.path_length, rels.front());
    const Hypervector query = encode_path(cb, query_schema);
    return time_scoring(cb, query, cands, rc, cfg.repetitions);
}

ScalingRun run_scaling_benchmark(const ScalingConfig& cfg) {
    cfg.validate();
    ScalingRun out;
    out.config = cfg;
    const auto rels = scaling_relations(cfg.relations);

    std::vector<std::vector<CandidatePath>> cand_sets;
    for (std::size_t n : cfg.counts) cand_sets.push_back(scaling_candidates(n, cfg, rels));

    for (std::size_t ni = 0; ni < cfg.counts.size(); ++ni) {
        for (std::size_t d : cfg.dims) out.cells.push_back({cfg.counts[ni], d, 0.0, 0.0});
    }
    struct Context {
        Codebook cb;
        RetrievalConfig rc;
        Hypervector query;
    };
    std::vector<Context> contexts;
    for (std::size_t d : cfg.dims) {
        Codebook cb = Codebook::build(HdcConfig::ghrr(d, cfg.block_size, cfg.seed), rels);
        RetrievalConfig rc;
        rc.hdc = cb.config();
        Hypervector query = encode_path(cb, std::vector<std::string>(cfg.path_length, rels.front()));
        contexts.push_back({std::move(cb), rc, std::move(query)});
    }
    const IdfTable idf;
    using Clock = std::chrono::steady_clock;
    auto time_cell = [&](std::size_t ni, std::size_t di) {
        const auto& ctx = contexts[di];
        const auto t0 = Clock::now();
        const auto scored = score_candidates(ctx.cb, ctx.query, cand_sets[ni], idf, ctx.rc);
        const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
        if (scored.size() != cand_sets[ni].size()) throw Error("scoring dropped candidates");
        return secs;
    };

    // Bring clocks and allocator to steady state before any cell is timed.
    const auto warm = Clock::now();
    while (std::chrono::duration<double>(Clock::now() - warm).count() < cfg.warmup_seconds) {
        (void)time_cell(cand_sets.size() - 1, 0);
    }

    // Repetitions are interleaved across cells, in a fresh order each pass, so
    // that a burst of machine load spreads over the grid instead of biasing
    // one cell.
    const std::size_t nd = cfg.dims.size();
    std::vector<std::vector<double>> samples(out.cells.size());
    std::vector<std::size_t> visit(out.cells.size());
    std::iota(visit.begin(), visit.end(), std::size_t{0});
    auto order_rng = CounterRng::stream(cfg.seed, {kScalingTag, 0});
    for (std::size_t rep = 0; rep <= cfg.repetitions; ++rep) {
        for (std::size_t i = visit.size(); i > 1; --i) std::swap(visit[i - 1], visit[order_rng.below(i)]);
        for (std::size_t c : visit) {
            // Cheap cells are timed repeatedly per visit so that every cell
            // gets a comparable share of quiet machine time.
            double spent = 0.0;
            do {
                const double secs = time_cell(c / nd, c % nd);
                spent += secs;
                if (rep > 0) samples[c].push_back(secs);  // rep 0 warms the cell
            } while (rep > 0 && spent < cfg.min_visit_seconds);
        }
    }
    for (std::size_t i = 0; i < out.cells.size(); ++i) {
        auto& cell = out.cells[i];
        cell.seconds = fastest(samples[i]);
        if (cell.seconds < cfg.min_cell_seconds) {
            throw ConfigError("timer resolution insufficient: N=" + std::to_string(cell.n) + ", d=" +
                              std::to_string(cell.d) + " ran in " + std::to_string(cell.seconds) +
                              " s; enlarge the grid");
        }
    }

    // Least squares of seconds on x = N·d with intercept, weighted by 1/y² so
    // that the fit minimises relative error; timing noise is multiplicative.
    double sw = 0, sx = 0, sy = 0, sxx = 0, sxy = 0, plain_sy = 0;
    for (const auto& c : out.cells) {
        const double x = static_cast<double>(c.n) * static_cast<double>(c.d);
        const double w = 1.0 / (c.seconds * c.seconds);
        sw += w;
        sx += w * x;
        sy += w * c.seconds;
        sxx += w * x * x;
        sxy += w * x * c.seconds;
        plain_sy += c.seconds;
    }
    out.slope = (sw * sxy - sx * sy) / (sw * sxx - sx * sx);
    out.intercept = (sy - out.slope * sx) / sw;
    const double mean_y = plain_sy / static_cast<double>(out.cells.size());
    double ss_res = 0, ss_tot = 0;
    for (auto& c : out.cells) {
        c.predicted = out.slope * static_cast<double>(c.n) * static_cast<double>(c.d) + out.intercept;
        ss_res += (c.seconds - c.predicted) * (c.seconds - c.predicted);
        ss_tot += (c.seconds - mean_y) * (c.seconds - mean_y);
        out.max_relative_deviation = std::max(out.max_relative_deviation, std::abs(c.predicted - c.seconds) / c.seconds);
    }
    out.r_squared = ss_tot > 0 ? 1.0 - ss_res / ss_tot : 1.0;
    return out;
}

const ScalingCell& ScalingRun::cell(std::size_t n, std::size_t d) const {
    for (const auto& c : cells) {
        if (c.n == n && c.d == d) return c;
    }
    throw ConfigError("no scaling cell for N=" + std::to_string(n) + ", d=" + std::to_string(d));
}

Table ScalingRun::to_table() const {
    Table t({{"N", ColumnType::Integer},
             {"d", ColumnType::Integer},
             {"seconds", ColumnType::Real},
             {"predicted_seconds", ColumnType::Real}});
    for (const auto& c : cells) t.add_row({integer(c.n), integer(c.d), c.seconds, c.predicted});
    t.set_meta("path_length", integer(config.path_length));
    t.set_meta("relations", integer(config.relations));
    t.set_meta("repetitions", integer(config.repetitions));
    t.set_meta("min_visit_seconds", config.min_visit_seconds);
    t.set_meta("block_size", integer(config.block_size));
    t.set_meta("seed", static_cast<std::int64_t>(config.seed));
    t.set_meta("slope", slope);
    t.set_meta("intercept", intercept);
    t.set_meta("r_squared", r_squared);
    t.set_meta("max_relative_deviation", max_relative_deviation);
    return t;
}

}  // namespace pathhd
