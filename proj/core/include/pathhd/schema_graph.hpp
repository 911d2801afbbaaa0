#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "pathhd/graph.hpp"

namespace pathhd {

// Relation-level composition graph: edge a → b exists when some entity is
// both a tail of a and a head of b. The witness count is the number of such
// entities. Relation ids match those of the source Graph.
class SchemaGraph {
public:
    struct Successor {
        RelationId relation;
        std::uint64_t witnesses;
    };

    SchemaGraph() = default;
    static SchemaGraph build(const Graph& g);

    std::span<const std::string> relations() const noexcept { return relations_; }
    std::size_t num_nodes() const noexcept { return relations_.size(); }
    std::size_t num_edges() const noexcept { return edges_.size(); }

    // Successors of a, ascending by relation id.
    std::span<const Successor> successors(RelationId a) const;
    // 0 when there is no edge.
    std::uint64_t witnesses(RelationId a, RelationId b) const;
    const std::string& relation_name(RelationId r) const { return relations_.at(r); }

private:
    std::vector<std::string> relations_;
    std::vector<std::size_t> offsets_;
    std::vector<Successor> edges_;
};

}  // namespace pathhd
