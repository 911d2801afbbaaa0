#include "pathhd/retriever.hpp"

#include <algorithm>
#include <cctype>
#include <chrono>
#include <cmath>
#include <functional>
#include <numeric>
#include <set>
#include <span>
#include <tuple>

#include "pathhd/error.hpp"
#include "pathhd/ops.hpp"

namespace pathhd {

namespace {

using Clock = std::chrono::steady_clock;

std::int64_t micros_since(Clock::time_point start) {
    return std::chrono::duration_cast<std::chrono::microseconds>(Clock::now() - start).count();
}

std::size_t saturating_mul(std::size_t a, std::size_t b) {
    if (a != 0 && b > std::numeric_limits<std::size_t>::max() / a) return std::numeric_limits<std::size_t>::max();
    return a * b;
}

}  // namespace

std::string_view to_string(PenaltyMode mode) noexcept {
    return mode == PenaltyMode::AsPrinted ? "as_printed" : "length_proportional";
}

PenaltyMode parse_penalty_mode(std::string_view name) {
    if (name == "as_printed") return PenaltyMode::AsPrinted;
    if (name == "length_proportional") return PenaltyMode::LengthProportional;
    throw ConfigError("unknown penalty mode '" + std::string(name) + "'");
}

void RetrievalConfig::validate() const {
    hdc.validate();
    if (!(alpha >= 0.0) || !std::isfinite(alpha)) throw ConfigError("alpha must be a finite value >= 0");
    if (!(beta >= 0.0) || !std::isfinite(beta)) throw ConfigError("beta must be a finite value >= 0");
    if (!(lambda > 0.0 && lambda < 1.0)) throw ConfigError("lambda must lie in (0, 1)");
    if (k < 1) throw ConfigError("k must be >= 1");
    if (l_max < 1) throw ConfigError("l_max must be >= 1");
    if (beam < 1) throw ConfigError("beam must be >= 1");
}

// ---------------------------------------------------------------------------
// Planning

std::vector<std::string> start_relations(const Graph& g, std::string_view topic) {
    const auto id = g.entity_id(topic);
    if (!id) throw UnknownSymbolError(std::string(topic));
    std::vector<std::string> out;
    for (RelationId r : g.out_relations(*id)) out.push_back(g.relation_name(r));
    return out;
}

std::vector<Schema> enumerate_plans(const SchemaGraph& sg, const std::vector<std::string>& start,
                                    const RetrievalConfig& cfg) {
    cfg.validate();
    const auto names = sg.relations();
    struct Partial {
        std::vector<RelationId> relations;
        double weight;
    };
    // Higher weight first, then lexicographic (ids follow name order).
    const auto better = [](const Partial& a, const Partial& b) {
        if (a.weight != b.weight) return a.weight > b.weight;
        return a.relations < b.relations;
    };
    const auto prune = [&](std::vector<Partial>& level) {
        if (level.size() > cfg.beam) {
            std::partial_sort(level.begin(), level.begin() + static_cast<std::ptrdiff_t>(cfg.beam), level.end(),
                              better);
            level.resize(cfg.beam);
        }
    };

    std::vector<Partial> level;
    std::set<RelationId> seeds;
    for (const auto& s : start) {
        const auto it = std::lower_bound(names.begin(), names.end(), s);
        if (it == names.end() || *it != s) throw UnknownSymbolError(s);
        seeds.insert(static_cast<RelationId>(it - names.begin()));
    }
    for (RelationId r : seeds) level.push_back({{r}, 1.0});
    prune(level);

    std::vector<std::vector<RelationId>> kept;
    for (std::size_t depth = 1; !level.empty(); ++depth) {
        for (const auto& p : level) kept.push_back(p.relations);
        if (depth == cfg.l_max) break;
        std::vector<Partial> next;
        for (const auto& p : level) {
            for (const auto& succ : sg.successors(p.relations.back())) {
                Partial child{p.relations, p.weight * static_cast<double>(succ.witnesses)};
                child.relations.push_back(succ.relation);
                next.push_back(std::move(child));
            }
        }
        prune(next);
        level = std::move(next);
    }

    std::sort(kept.begin(), kept.end(), [](const auto& a, const auto& b) {
        return std::make_tuple(a.size(), std::cref(a)) < std::make_tuple(b.size(), std::cref(b));
    });
    std::vector<Schema> out;
    out.reserve(kept.size());
    for (const auto& rels : kept) {
        Schema s;
        for (RelationId r : rels) s.relations.push_back(names[r]);
        out.push_back(std::move(s));
    }
    return out;
}

std::vector<std::string> tokenize(std::string_view text) {
    std::vector<std::string> out;
    std::string cur;
    for (char ch : text) {
        const auto c = static_cast<unsigned char>(ch);
        if (std::isalnum(c)) {
            cur.push_back(static_cast<char>(std::tolower(c)));
        } else if (!cur.empty()) {
            out.push_back(std::move(cur));
            cur.clear();
        }
    }
    if (!cur.empty()) out.push_back(std::move(cur));
    return out;
}

Schema select_query_plan(const std::vector<Schema>& plans, const Question& question,
                         const std::optional<Schema>& gold_hint) {
    if (plans.empty()) throw ConfigError("cannot select a query plan from an empty plan list");
    if (gold_hint && std::find(plans.begin(), plans.end(), *gold_hint) != plans.end()) return *gold_hint;

    const auto q_tokens = tokenize(question.text);
    const std::set<std::string> question_tokens(q_tokens.begin(), q_tokens.end());
    const Schema* best = nullptr;
    std::size_t best_overlap = 0;
    for (const auto& plan : plans) {
        std::set<std::string> plan_tokens;
        for (const auto& r : plan.relations) {
            for (auto& t : tokenize(r)) plan_tokens.insert(std::move(t));
        }
        std::size_t overlap = 0;
        for (const auto& t : plan_tokens) overlap += question_tokens.count(t);
        const bool wins = best == nullptr || overlap > best_overlap ||
                          (overlap == best_overlap && (plan.size() < best->size() ||
                                                       (plan.size() == best->size() && plan < *best)));
        if (wins) {
            best = &plan;
            best_overlap = overlap;
        }
    }
    return *best;
}

// ---------------------------------------------------------------------------
// Instantiation

std::vector<CandidatePath> instantiate_candidates(const Graph& g, const std::vector<Schema>& plans,
                                                  std::string_view topic, const RetrievalConfig& cfg) {
    cfg.validate();
    const auto root = g.entity_id(topic);
    if (!root) throw UnknownSymbolError(std::string(topic));

    std::set<std::vector<RelationId>> full;
    std::set<std::vector<RelationId>> prefixes;
    std::size_t max_len = 0;
    for (const auto& plan : plans) {
        if (plan.empty()) continue;
        std::vector<RelationId> ids;
        bool known = true;
        for (const auto& r : plan.relations) {
            const auto id = g.relation_id(r);
            if (!id) {
                known = false;
                break;
            }
            ids.push_back(*id);
        }
        if (!known) continue;
        for (std::size_t len = 1; len <= ids.size(); ++len) prefixes.emplace(ids.begin(), ids.begin() + len);
        max_len = std::max(max_len, ids.size());
        full.insert(std::move(ids));
    }

    struct Partial {
        std::vector<RelationId> relations;
        std::vector<EntityId> chain;
        bool operator<(const Partial& o) const { return std::tie(relations, chain) < std::tie(o.relations, o.chain); }
    };
    const std::size_t cap = saturating_mul(cfg.beam, std::max<std::size_t>(plans.size(), 1));

    std::vector<Partial> found;
    std::vector<Partial> frontier{{{}, {*root}}};
    for (std::size_t depth = 0; depth < max_len && !frontier.empty(); ++depth) {
        std::vector<Partial> next;
        for (const auto& p : frontier) {
            for (const auto& edge : g.out_edges(p.chain.back())) {
                Partial child{p.relations, p.chain};
                child.relations.push_back(edge.relation);
                if (!prefixes.contains(child.relations)) continue;
                child.chain.push_back(edge.tail);
                next.push_back(std::move(child));
            }
        }
        std::sort(next.begin(), next.end());
        next.erase(std::unique(next.begin(), next.end(),
                               [](const Partial& a, const Partial& b) { return !(a < b) && !(b < a); }),
                   next.end());
        if (next.size() > cap) next.resize(cap);
        for (const auto& p : next) {
            if (full.contains(p.relations)) found.push_back(p);
        }
        frontier = std::move(next);
    }

    // Ids follow name order, so this is (length, schema, chain) order by name.
    std::sort(found.begin(), found.end(), [](const Partial& a, const Partial& b) {
        if (a.relations.size() != b.relations.size()) return a.relations.size() < b.relations.size();
        return a < b;
    });
    std::vector<CandidatePath> out;
    out.reserve(found.size());
    for (const auto& p : found) {
        CandidatePath c;
        for (RelationId r : p.relations) c.schema.relations.push_back(g.relation_name(r));
        for (EntityId e : p.chain) c.entity_chain.push_back(g.entity_name(e));
        out.push_back(std::move(c));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Scoring and selection

double length_penalty(std::size_t length, const RetrievalConfig& cfg) {
    const double decay = std::pow(cfg.lambda, static_cast<double>(length));
    return cfg.penalty_mode == PenaltyMode::AsPrinted ? cfg.beta * decay : cfg.beta * (1.0 - decay);
}

std::vector<ScoredCandidate> score_candidates(const Codebook& cb, const Hypervector& query_hv,
                                              const std::vector<CandidatePath>& candidates, const IdfTable& idf,
                                              const RetrievalConfig& cfg) {
    // Each schema becomes its run of codebook atoms, so grouping compares
    // small contiguous keys instead of relation strings.
    std::vector<const Hypervector*> atoms;
    std::vector<std::size_t> offset{0};
    offset.reserve(candidates.size() + 1);
    for (const auto& c : candidates) {
        for (const auto& r : c.schema.relations) atoms.push_back(&cb.at(r));
        offset.push_back(atoms.size());
    }
    auto key = [&](std::size_t i) {
        return std::span<const Hypervector* const>(atoms.data() + offset[i], offset[i + 1] - offset[i]);
    };
    auto key_less = [&](std::size_t a, std::size_t b) {
        const auto ka = key(a), kb = key(b);
        return std::lexicographical_compare(ka.begin(), ka.end(), kb.begin(), kb.end(), std::less<>{});
    };
    std::vector<std::size_t> order(candidates.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return key_less(a, b) || (!key_less(b, a) && a < b);
    });

    // Similarities first, one per distinct schema, so the codebook stays hot
    // while the kernel runs; the output records are built afterwards.
    std::vector<std::size_t> group_start;
    for (std::size_t i = 0; i < order.size(); ++i) {
        if (i == 0 || key_less(order[i - 1], order[i])) group_start.push_back(i);
    }
    std::vector<double> sims(group_start.size());
    for (std::size_t g = 0; g < group_start.size(); ++g) {
        const auto k = key(order[group_start[g]]);
        sims[g] = k.empty() ? similarity(query_hv, identity(cb.config())) : path_similarity(query_hv, k);
    }

    std::vector<ScoredCandidate> out(candidates.size());
    for (std::size_t g = 0; g < group_start.size(); ++g) {
        const Schema& schema = candidates[order[group_start[g]]].schema;
        const double bonus = cfg.alpha * idf.idf(schema);
        const double penalty = length_penalty(schema.size(), cfg);
        const std::size_t end = g + 1 < group_start.size() ? group_start[g + 1] : order.size();
        for (std::size_t i = group_start[g]; i < end; ++i) {
            auto& sc = out[order[i]];
            sc.path = candidates[order[i]];
            sc.sim = sims[g];
            sc.idf_bonus = bonus;
            sc.length_penalty = penalty;
            sc.total = sims[g] + bonus - penalty;
        }
    }
    return out;
}

bool ranks_before(const ScoredCandidate& a, const ScoredCandidate& b) {
    if (a.total != b.total) return a.total > b.total;
    if (a.path.schema.size() != b.path.schema.size()) return a.path.schema.size() < b.path.schema.size();
    if (a.path.schema != b.path.schema) return a.path.schema < b.path.schema;
    return a.path.entity_chain < b.path.entity_chain;
}

std::vector<ScoredCandidate> top_k(std::vector<ScoredCandidate> scored, std::size_t k) {
    if (k == 0) throw ConfigError("k must be >= 1");
    const std::size_t n = std::min(k, scored.size());
    std::partial_sort(scored.begin(), scored.begin() + static_cast<std::ptrdiff_t>(n), scored.end(), ranks_before);
    scored.resize(n);
    return scored;
}

RetrievalResult retrieve(const Graph& g, const SchemaGraph& sg, const Codebook& cb, const IdfTable& idf,
                         const Question& question, const RetrievalConfig& cfg, const RetrieveOptions& opts) {
    cfg.validate();
    RetrievalResult result;
    result.question_id = question.id;

    auto t0 = Clock::now();
    const auto plans = enumerate_plans(sg, start_relations(g, question.topic_entity), cfg);
    if (plans.empty()) {
        result.timings.plan_us = micros_since(t0);
        return result;
    }
    const std::optional<Schema> hint = opts.use_gold_hint ? question.gold_schema : std::nullopt;
    result.plan = select_query_plan(plans, question, hint);
    result.timings.plan_us = micros_since(t0);

    t0 = Clock::now();
    const auto candidates = instantiate_candidates(g, plans, question.topic_entity, cfg);
    result.timings.instantiate_us = micros_since(t0);

    t0 = Clock::now();
    const Hypervector query_hv = encode_path(cb, result.plan.relations);
    result.timings.encode_us = micros_since(t0);

    t0 = Clock::now();
    auto scored = score_candidates(cb, query_hv, candidates, idf, cfg);
    result.timings.score_us = micros_since(t0);

    t0 = Clock::now();
    std::sort(scored.begin(), scored.end(), ranks_before);
    result.candidates = std::move(scored);
    const std::size_t n = std::min(cfg.k, result.candidates.size());
    for (std::size_t i = 0; i < n; ++i) result.top_k.push_back(i);
    result.timings.select_us = micros_since(t0);
    return result;
}

std::vector<Schema> candidate_schemas(const Graph& g, const SchemaGraph& sg, const Question& question,
                                      const RetrievalConfig& cfg) {
    const auto plans = enumerate_plans(sg, start_relations(g, question.topic_entity), cfg);
    std::vector<Schema> out;
    for (auto& c : instantiate_candidates(g, plans, question.topic_entity, cfg)) {
        if (out.empty() || out.back() != c.schema) out.push_back(std::move(c.schema));
    }
    return out;
}

IdfTable build_idf(const Graph& g, const SchemaGraph& sg, const std::vector<Question>& training,
                   const RetrievalConfig& cfg) {
    std::map<std::string, std::vector<Schema>> sets;
    for (const auto& q : training) sets[q.id] = candidate_schemas(g, sg, q, cfg);
    return compute_idf(training, sets);
}

}  // namespace pathhd
