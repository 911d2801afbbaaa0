#include "pathhd/schema_graph.hpp"

#include <algorithm>

namespace pathhd {

SchemaGraph SchemaGraph::build(const Graph& g) {
    SchemaGraph sg;
    sg.relations_.assign(g.relations().begin(), g.relations().end());
    const std::size_t r = sg.relations_.size();

    // Per entity: which relations end at it and which leave it.
    std::vector<std::vector<RelationId>> incoming(g.num_entities());
    for (EntityId h = 0; h < g.num_entities(); ++h) {
        for (const auto& e : g.out_edges(h)) incoming[e.tail].push_back(e.relation);
    }
    std::vector<std::uint64_t> counts(r * r, 0);
    for (EntityId e = 0; e < g.num_entities(); ++e) {
        auto& in = incoming[e];
        std::sort(in.begin(), in.end());
        in.erase(std::unique(in.begin(), in.end()), in.end());
        const auto out = g.out_relations(e);
        for (RelationId a : in) {
            for (RelationId b : out) ++counts[a * r + b];
        }
    }
    sg.offsets_.assign(r + 1, 0);
    for (RelationId a = 0; a < r; ++a) {
        for (RelationId b = 0; b < r; ++b) {
            if (counts[a * r + b] > 0) sg.edges_.push_back({b, counts[a * r + b]});
        }
        sg.offsets_[a + 1] = sg.edges_.size();
    }
    return sg;
}

std::span<const SchemaGraph::Successor> SchemaGraph::successors(RelationId a) const {
    return std::span<const Successor>(edges_).subspan(offsets_.at(a), offsets_.at(a + 1) - offsets_.at(a));
}

std::uint64_t SchemaGraph::witnesses(RelationId a, RelationId b) const {
    const auto succ = successors(a);
    const auto it = std::lower_bound(succ.begin(), succ.end(), b,
                                     [](const Successor& s, RelationId rel) { return s.relation < rel; });
    return (it != succ.end() && it->relation == b) ? it->witnesses : 0;
}

}  // namespace pathhd
