#include "pathhd/synth.hpp"

#include <algorithm>
#include <array>
#include <fstream>
#include <unordered_set>

#include "pathhd/error.hpp"
#include "pathhd/rng.hpp"

namespace pathhd {

namespace {

constexpr std::size_t kKinds = std::size(kEntityKinds);

struct RelationSpec {
    std::string_view name;
    std::size_t head;  // index into kEntityKinds
    std::size_t tail;
};

enum Kind : std::size_t { Person, Organization, Place, Work, Event };

// Ordered round-robin by head kind so that any prefix covers every kind early.
constexpr RelationSpec kVocabulary[] = {
    {"born_in", Person, Place},
    {"headquartered_in", Organization, Place},
    {"located_in", Place, Place},
    {"produced_by", Work, Organization},
    {"held_in", Event, Place},
    {"works_for", Person, Organization},
    {"founded_by", Organization, Person},
    {"hosted", Place, Event},
    {"features", Work, Person},
    {"organized_by", Event, Organization},
    {"authored", Person, Work},
    {"published", Organization, Work},
    {"notable_resident", Place, Person},
    {"about", Work, Event},
    {"participant", Event, Person},
    {"attended", Person, Event},
    {"sponsored", Organization, Event},
    {"setting_of", Place, Work},
    {"inspired_by", Work, Work},
    {"commemorated_by", Event, Work},
    {"spouse_of", Person, Person},
    {"subsidiary_of", Organization, Organization},
    {"capital_of", Place, Place},
    {"sequel_of", Work, Work},
    {"preceded_by", Event, Event},
};
constexpr std::size_t kVocabularySize = std::size(kVocabulary);

struct Rel {
    std::string name;
    std::size_t head;
    std::size_t tail;
};

std::vector<Rel> make_relations(std::size_t r) {
    std::vector<Rel> out;
    for (std::size_t i = 0; i < r; ++i) {
        const auto& spec = kVocabulary[i % kVocabularySize];
        std::string name(spec.name);
        if (i >= kVocabularySize) name += "_" + std::to_string(i / kVocabularySize + 1);
        out.push_back({std::move(name), spec.head, spec.tail});
    }
    return out;
}

std::string zero_pad(std::size_t v, std::size_t width) {
    std::string s = std::to_string(v);
    if (s.size() < width) s.insert(0, width - s.size(), '0');
    return s;
}

// Entity i has kind i % kKinds and per-kind index i / kKinds.
std::size_t kind_of(std::size_t e) { return e % kKinds; }

std::size_t kind_count(std::size_t entities, std::size_t kind) {
    return entities / kKinds + (kind < entities % kKinds ? 1 : 0);
}

std::vector<std::string> make_entity_names(std::size_t entities) {
    const std::size_t width = std::max<std::size_t>(3, std::to_string(entities).size());
    std::vector<std::string> out;
    out.reserve(entities);
    for (std::size_t e = 0; e < entities; ++e) {
        out.push_back(std::string(kEntityKinds[kind_of(e)]) + "_" + zero_pad(e / kKinds, width));
    }
    return out;
}

std::size_t capacity(std::size_t entities, const std::vector<Rel>& rels) {
    std::size_t total = 0;
    for (const auto& r : rels) {
        const std::size_t h = kind_count(entities, r.head);
        const std::size_t t = kind_count(entities, r.tail);
        total += h * t - (r.head == r.tail ? h : 0);
    }
    return total;
}

// Mutable graph with undo of the most recent insertions.
class Builder {
public:
    Builder(std::size_t entities, std::size_t relations) : out_(entities), relations_(relations) {}

    bool contains(std::size_t h, std::size_t r, std::size_t t) const { return set_.contains(pack(h, r, t)); }

    void add(std::size_t h, std::size_t r, std::size_t t) {
        set_.insert(pack(h, r, t));
        out_[h].push_back({r, t});
        log_.push_back({h, r, t});
    }

    std::size_t size() const { return log_.size(); }

    // Removes the newest insertions until size() == n.
    void truncate(std::size_t n) {
        while (log_.size() > n) {
            const auto [h, r, t] = log_.back();
            log_.pop_back();
            out_[h].pop_back();
            set_.erase(pack(h, r, t));
        }
    }

    // Walks from `start` following `schema`; saturates at 2.
    std::size_t walks(std::size_t start, const std::vector<std::size_t>& schema) const {
        std::vector<std::pair<std::size_t, std::size_t>> frontier{{start, 1}};
        for (std::size_t r : schema) {
            std::vector<std::pair<std::size_t, std::size_t>> next;
            for (const auto& [e, n] : frontier) {
                for (const auto& [rel, tail] : out_[e]) {
                    if (rel != r) continue;
                    auto it = std::find_if(next.begin(), next.end(), [&](const auto& p) { return p.first == tail; });
                    if (it == next.end()) next.push_back({tail, n});
                    else it->second = std::min<std::size_t>(it->second + n, 2);
                }
            }
            frontier = std::move(next);
            if (frontier.empty()) return 0;
        }
        std::size_t total = 0;
        for (const auto& p : frontier) total += p.second;
        return std::min<std::size_t>(total, 2);
    }

    const std::vector<std::array<std::size_t, 3>>& log() const { return log_; }

private:
    std::uint64_t pack(std::size_t h, std::size_t r, std::size_t t) const {
        return (static_cast<std::uint64_t>(h) * relations_ + r) * out_.size() + t;
    }

    std::vector<std::vector<std::pair<std::size_t, std::size_t>>> out_;
    std::size_t relations_;
    std::unordered_set<std::uint64_t> set_;
    std::vector<std::array<std::size_t, 3>> log_;
};

struct Planted {
    std::size_t topic;
    std::vector<std::size_t> schema;
    std::vector<std::size_t> chain;
};

std::size_t pick_of_kind(CounterRng& rng, std::size_t entities, std::size_t kind) {
    return rng.below(kind_count(entities, kind)) * kKinds + kind;
}

}  // namespace

std::string_view entity_type(std::string_view entity) {
    const auto us = entity.rfind('_');
    return us == std::string_view::npos ? entity : entity.substr(0, us);
}

void SynthConfig::validate() const {
    if (entities == 0 || relations == 0 || triples == 0 || questions == 0 || max_gold_length == 0) {
        throw ConfigError("synthetic sizes must all be >= 1");
    }
    if (entities < 2 * kKinds) {
        throw ConfigError("synthetic graph needs >= " + std::to_string(2 * kKinds) + " entities");
    }
    if (triples < questions * max_gold_length) {
        throw ConfigError("infeasible sizes: T = " + std::to_string(triples) + " < Q * max_gold_length = " +
                          std::to_string(questions * max_gold_length));
    }
    const std::size_t cap = capacity(entities, make_relations(relations));
    if (triples > cap) {
        throw ConfigError("infeasible sizes: T = " + std::to_string(triples) + " exceeds the " + std::to_string(cap) +
                          " distinct typed triples available");
    }
}

std::size_t count_instantiations(const Graph& g, std::string_view topic, const Schema& schema) {
    const auto root = g.entity_id(topic);
    if (!root) throw UnknownSymbolError(std::string(topic));
    std::vector<std::pair<EntityId, std::size_t>> frontier{{*root, 1}};
    for (const auto& name : schema.relations) {
        const auto r = g.relation_id(name);
        if (!r) return 0;
        std::vector<std::pair<EntityId, std::size_t>> next;
        for (const auto& [e, n] : frontier) {
            for (const auto& edge : g.edges(e, *r)) next.push_back({edge.tail, n});
        }
        std::sort(next.begin(), next.end());
        std::vector<std::pair<EntityId, std::size_t>> merged;
        for (const auto& p : next) {
            if (!merged.empty() && merged.back().first == p.first) merged.back().second += p.second;
            else merged.push_back(p);
        }
        frontier = std::move(merged);
    }
    std::size_t total = 0;
    for (const auto& p : frontier) total += p.second;
    return total;
}

SynthBenchmark generate_synthetic(const SynthConfig& cfg) {
    cfg.validate();
    const auto rels = make_relations(cfg.relations);
    const auto names = make_entity_names(cfg.entities);
    const std::size_t E = cfg.entities;

    std::vector<std::vector<std::size_t>> rels_from(kKinds);
    for (std::size_t r = 0; r < rels.size(); ++r) rels_from[rels[r].head].push_back(r);

    Builder b(E, rels.size());
    std::vector<Planted> planted;
    std::vector<bool> used_topic(E, false);

    auto all_unique = [&](const std::vector<Planted>& qs, std::size_t only_relation, bool filter) {
        for (const auto& p : qs) {
            if (filter && std::find(p.schema.begin(), p.schema.end(), only_relation) == p.schema.end()) continue;
            if (b.walks(p.topic, p.schema) != 1) return false;
        }
        return true;
    };

    auto gold_rng = CounterRng::named(cfg.seed, "synth/gold");
    constexpr std::size_t kMaxAttempts = 10000;
    for (std::size_t q = 0; q < cfg.questions; ++q) {
        bool placed = false;
        for (std::size_t attempt = 0; attempt < kMaxAttempts && !placed; ++attempt) {
            Planted p;
            const std::size_t len = 1 + gold_rng.below(cfg.max_gold_length);
            p.topic = gold_rng.below(E);
            if (rels_from[kind_of(p.topic)].empty()) continue;
            if (q < E && used_topic[p.topic]) continue;
            p.chain.push_back(p.topic);
            bool ok = true;
            for (std::size_t i = 0; i < len && ok; ++i) {
                const auto& choices = rels_from[kind_of(p.chain.back())];
                if (choices.empty()) {
                    ok = false;
                    break;
                }
                const std::size_t r = choices[gold_rng.below(choices.size())];
                std::size_t next = pick_of_kind(gold_rng, E, rels[r].tail);
                for (int retry = 0; retry < 32 && std::find(p.chain.begin(), p.chain.end(), next) != p.chain.end();
                     ++retry) {
                    next = pick_of_kind(gold_rng, E, rels[r].tail);
                }
                if (std::find(p.chain.begin(), p.chain.end(), next) != p.chain.end()) ok = false;
                p.schema.push_back(r);
                p.chain.push_back(next);
            }
            if (!ok) continue;

            const std::size_t mark = b.size();
            for (std::size_t i = 0; i < p.schema.size(); ++i) {
                if (!b.contains(p.chain[i], p.schema[i], p.chain[i + 1])) b.add(p.chain[i], p.schema[i], p.chain[i + 1]);
            }
            if (b.size() > cfg.triples || b.walks(p.topic, p.schema) != 1 || !all_unique(planted, 0, false)) {
                b.truncate(mark);
                continue;
            }
            used_topic[p.topic] = true;
            planted.push_back(std::move(p));
            placed = true;
        }
        if (!placed) throw ConfigError("could not plant a uniquely reachable gold path for question " + std::to_string(q));
    }

    auto fill_rng = CounterRng::named(cfg.seed, "synth/fill");
    const std::size_t max_draws = std::max<std::size_t>(cfg.triples, 1) * 2000;
    for (std::size_t draw = 0; b.size() < cfg.triples; ++draw) {
        if (draw >= max_draws) {
            throw ConfigError("could not place " + std::to_string(cfg.triples) +
                              " triples without breaking gold-path uniqueness; lower T or raise E");
        }
        const std::size_t h = fill_rng.below(E);
        const auto& choices = rels_from[kind_of(h)];
        if (choices.empty()) continue;
        const std::size_t r = choices[fill_rng.below(choices.size())];
        const std::size_t t = pick_of_kind(fill_rng, E, rels[r].tail);
        if (t == h || b.contains(h, r, t)) continue;
        const std::size_t mark = b.size();
        b.add(h, r, t);
        if (!all_unique(planted, r, true)) b.truncate(mark);
    }

    SynthBenchmark out;
    out.config = cfg;
    for (const auto& [h, r, t] : b.log()) out.triples.push_back({names[h], rels[r].name, names[t]});
    for (std::size_t q = 0; q < planted.size(); ++q) {
        const auto& p = planted[q];
        CandidatePath gold;
        for (std::size_t r : p.schema) gold.schema.relations.push_back(rels[r].name);
        for (std::size_t e : p.chain) gold.entity_chain.push_back(names[e]);

        Question question;
        question.id = "q" + zero_pad(q, 4);
        question.text = "Starting from " + names[p.topic] + ", which entity is reached by following ";
        for (std::size_t i = 0; i < gold.schema.size(); ++i) {
            if (i) question.text += " then ";
            question.text += gold.schema.relations[i];
        }
        question.text += "?";
        question.topic_entity = names[p.topic];
        question.gold_answers = std::vector<std::string>{gold.terminal()};
        question.gold_schema = gold.schema;
        out.questions.push_back(std::move(question));
        out.gold_paths.push_back(std::move(gold));
    }
    return out;
}

SynthFiles write_synthetic(const SynthBenchmark& bench, const std::filesystem::path& dir, std::string_view stem) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());
    SynthFiles files{dir / (std::string(stem) + ".triples.tsv"), dir / (std::string(stem) + ".questions.jsonl")};
    {
        std::ofstream out(files.triples, std::ios::binary);
        if (!out) throw IoError("cannot write " + files.triples.string());
        for (const auto& t : bench.triples) out << t.head << '\t' << t.relation << '\t' << t.tail << '\n';
        if (!out) throw IoError("write failed: " + files.triples.string());
    }
    {
        std::ofstream out(files.questions, std::ios::binary);
        if (!out) throw IoError("cannot write " + files.questions.string());
        for (const auto& q : bench.questions) write_question(out, q);
        if (!out) throw IoError("write failed: " + files.questions.string());
    }
    return files;
}

}  // namespace pathhd
