#pragma once

#include <compare>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace pathhd {

struct Triple {
    std::string head;
    std::string relation;
    std::string tail;

    friend auto operator<=>(const Triple&, const Triple&) = default;
    friend bool operator==(const Triple&, const Triple&) = default;
};

using EntityId = std::uint32_t;
using RelationId = std::uint32_t;

// Directed multigraph over (head, relation, tail) triples. Entity and relation
// ids follow lexicographic name order, so comparing ids compares names.
class Graph {
public:
    struct Edge {
        RelationId relation;
        EntityId tail;
    };

    Graph() = default;

    // Deduplicates; throws ParseError if a relation name contains "->" or any
    // field is empty.
    static Graph from_triples(std::vector<Triple> triples);

    std::span<const std::string> entities() const noexcept { return entities_; }
    std::span<const std::string> relations() const noexcept { return relations_; }
    std::size_t num_entities() const noexcept { return entities_.size(); }
    std::size_t num_relations() const noexcept { return relations_.size(); }
    std::size_t num_triples() const noexcept { return edges_.size(); }

    std::optional<EntityId> entity_id(std::string_view name) const;
    std::optional<RelationId> relation_id(std::string_view name) const;
    const std::string& entity_name(EntityId id) const { return entities_.at(id); }
    const std::string& relation_name(RelationId id) const { return relations_.at(id); }
    bool contains_entity(std::string_view name) const { return entity_id(name).has_value(); }

    // Outgoing edges of e sorted by (relation, tail).
    std::span<const Edge> out_edges(EntityId e) const;
    // Adjacency index: edges of e whose relation is r, i.e. the tails of (e, r).
    std::span<const Edge> edges(EntityId e, RelationId r) const;
    // Distinct relations leaving e, ascending.
    std::vector<RelationId> out_relations(EntityId e) const;

    bool has_triple(std::string_view head, std::string_view relation, std::string_view tail) const;

    // All triples in sorted order.
    std::vector<Triple> triples() const;
    // TSV serialization, one sorted triple per line.
    void write_triples(std::ostream& out) const;

private:
    std::vector<std::string> entities_;
    std::vector<std::string> relations_;
    std::vector<std::size_t> offsets_;  // CSR row starts, size num_entities + 1
    std::vector<Edge> edges_;
};

struct LoadStats {
    std::size_t lines = 0;
    std::size_t comments = 0;
    std::size_t blank = 0;
    std::size_t triples_read = 0;
    std::size_t duplicates = 0;
};

// UTF-8 text, one "head\trelation\ttail" per line, '#' starts a comment line.
// Throws ParseError carrying the 1-based line number of a malformed line.
Graph load_triples(std::istream& in, LoadStats* stats = nullptr);
Graph load_triples_file(const std::filesystem::path& path, LoadStats* stats = nullptr);

}  // namespace pathhd
