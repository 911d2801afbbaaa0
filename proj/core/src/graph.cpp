#include "pathhd/graph.hpp"

#include <algorithm>
#include <tuple>
#include <fstream>
#include <istream>
#include <ostream>

#include "pathhd/error.hpp"
#include "pathhd/schema.hpp"

namespace pathhd {

std::string Schema::key() const {
    std::string out;
    for (std::size_t i = 0; i < relations.size(); ++i) {
        if (i > 0) out += kSchemaSeparator;
        out += relations[i];
    }
    return out;
}

Schema Schema::from_key(std::string_view key) {
    Schema s;
    if (key.empty()) return s;
    std::size_t start = 0;
    while (true) {
        const std::size_t pos = key.find(kSchemaSeparator, start);
        if (pos == std::string_view::npos) {
            s.relations.emplace_back(key.substr(start));
            break;
        }
        s.relations.emplace_back(key.substr(start, pos - start));
        start = pos + kSchemaSeparator.size();
    }
    return s;
}

namespace {

template <typename Names>
std::optional<std::uint32_t> lookup(const Names& names, std::string_view name) {
    const auto it = std::lower_bound(names.begin(), names.end(), name,
                                     [](const std::string& a, std::string_view b) { return a < b; });
    if (it == names.end() || *it != name) return std::nullopt;
    return static_cast<std::uint32_t>(it - names.begin());
}

void sort_unique(std::vector<std::string>& v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
}

}  // namespace

Graph Graph::from_triples(std::vector<Triple> triples) {
    for (const auto& t : triples) {
        if (t.head.empty() || t.relation.empty() || t.tail.empty()) {
            throw ParseError("triple with an empty field", 0);
        }
        if (t.relation.find(kSchemaSeparator) != std::string::npos) {
            throw ParseError("relation name '" + t.relation + "' contains reserved separator '->'", 0);
        }
    }
    std::sort(triples.begin(), triples.end());
    triples.erase(std::unique(triples.begin(), triples.end()), triples.end());

    Graph g;
    for (const auto& t : triples) {
        g.entities_.push_back(t.head);
        g.entities_.push_back(t.tail);
        g.relations_.push_back(t.relation);
    }
    sort_unique(g.entities_);
    sort_unique(g.relations_);

    struct Row {
        EntityId head;
        Edge edge;
    };
    std::vector<Row> rows;
    rows.reserve(triples.size());
    for (const auto& t : triples) {
        rows.push_back({*lookup(g.entities_, t.head), {*lookup(g.relations_, t.relation), *lookup(g.entities_, t.tail)}});
    }
    std::sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) {
        return std::tie(a.head, a.edge.relation, a.edge.tail) < std::tie(b.head, b.edge.relation, b.edge.tail);
    });
    g.offsets_.assign(g.entities_.size() + 1, 0);
    for (const auto& r : rows) ++g.offsets_[r.head + 1];
    for (std::size_t i = 1; i < g.offsets_.size(); ++i) g.offsets_[i] += g.offsets_[i - 1];
    g.edges_.reserve(rows.size());
    for (const auto& r : rows) g.edges_.push_back(r.edge);
    return g;
}

std::optional<EntityId> Graph::entity_id(std::string_view name) const { return lookup(entities_, name); }

std::optional<RelationId> Graph::relation_id(std::string_view name) const { return lookup(relations_, name); }

std::span<const Graph::Edge> Graph::out_edges(EntityId e) const {
    return std::span<const Edge>(edges_).subspan(offsets_.at(e), offsets_.at(e + 1) - offsets_.at(e));
}

std::span<const Graph::Edge> Graph::edges(EntityId e, RelationId r) const {
    const auto all = out_edges(e);
    const auto lo = std::lower_bound(all.begin(), all.end(), r,
                                     [](const Edge& edge, RelationId rel) { return edge.relation < rel; });
    const auto hi = std::upper_bound(lo, all.end(), r,
                                     [](RelationId rel, const Edge& edge) { return rel < edge.relation; });
    return all.subspan(static_cast<std::size_t>(lo - all.begin()), static_cast<std::size_t>(hi - lo));
}

std::vector<RelationId> Graph::out_relations(EntityId e) const {
    std::vector<RelationId> out;
    for (const Edge& edge : out_edges(e)) {
        if (out.empty() || out.back() != edge.relation) out.push_back(edge.relation);
    }
    return out;
}

bool Graph::has_triple(std::string_view head, std::string_view relation, std::string_view tail) const {
    const auto h = entity_id(head);
    const auto r = relation_id(relation);
    const auto t = entity_id(tail);
    if (!h || !r || !t) return false;
    for (const Edge& e : edges(*h, *r)) {
        if (e.tail == *t) return true;
    }
    return false;
}

std::vector<Triple> Graph::triples() const {
    std::vector<Triple> out;
    out.reserve(edges_.size());
    for (EntityId h = 0; h < entities_.size(); ++h) {
        for (const Edge& e : out_edges(h)) out.push_back({entities_[h], relations_[e.relation], entities_[e.tail]});
    }
    return out;
}

void Graph::write_triples(std::ostream& out) const {
    for (const auto& t : triples()) out << t.head << '\t' << t.relation << '\t' << t.tail << '\n';
}

Graph load_triples(std::istream& in, LoadStats* stats) {
    LoadStats local;
    std::vector<Triple> triples;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) {
            ++local.blank;
            continue;
        }
        if (line.front() == '#') {
            ++local.comments;
            continue;
        }
        const std::size_t t1 = line.find('\t');
        const std::size_t t2 = t1 == std::string::npos ? std::string::npos : line.find('\t', t1 + 1);
        if (t2 == std::string::npos) throw ParseError("expected 3 TAB-separated fields", lineno);
        if (line.find('\t', t2 + 1) != std::string::npos) {
            throw ParseError("more than 3 TAB-separated fields", lineno);
        }
        Triple t{line.substr(0, t1), line.substr(t1 + 1, t2 - t1 - 1), line.substr(t2 + 1)};
        if (t.head.empty() || t.relation.empty() || t.tail.empty()) throw ParseError("empty field", lineno);
        if (t.relation.find(kSchemaSeparator) != std::string::npos) {
            throw ParseError("relation name contains reserved separator '->'", lineno);
        }
        triples.push_back(std::move(t));
    }
    if (in.bad()) throw IoError("read failure while loading triples");
    local.lines = lineno;
    local.triples_read = triples.size();
    Graph g = Graph::from_triples(std::move(triples));
    local.duplicates = local.triples_read - g.num_triples();
    if (stats) *stats = local;
    return g;
}

Graph load_triples_file(const std::filesystem::path& path, LoadStats* stats) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open triples file '" + path.string() + "'");
    return load_triples(in, stats);
}

}  // namespace pathhd
