#pragma once

// Reference implementations used only by tests. Each one recomputes a library
// result from first principles with the most direct algorithm available.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "pathhd/codebook.hpp"
#include "pathhd/graph.hpp"
#include "pathhd/hypervector.hpp"
#include "pathhd/questions.hpp"
#include "pathhd/retriever.hpp"
#include "pathhd/schema.hpp"

namespace oracle {

using Complex = std::complex<double>;

// Blockwise cosine written as three nested loops over (block, row, column).
inline double similarity(const pathhd::Hypervector& x, const pathhd::Hypervector& y) {
    using pathhd::Family;
    if (x.family() == Family::Ghrr) {
        const std::size_t m = x.block_size();
        double acc = 0.0;
        for (std::size_t j = 0; j < x.num_blocks(); ++j) {
            const auto a = x.block(j);
            const auto b = y.block(j);
            Complex inner(0.0, 0.0);
            double na = 0.0, nb = 0.0;
            for (std::size_t r = 0; r < m; ++r) {
                for (std::size_t c = 0; c < m; ++c) {
                    inner += std::conj(a[r * m + c]) * b[r * m + c];
                    na += std::norm(a[r * m + c]);
                    nb += std::norm(b[r * m + c]);
                }
            }
            acc += inner.real() / (std::sqrt(na) * std::sqrt(nb));
        }
        return acc / static_cast<double>(x.num_blocks());
    }
    std::vector<Complex> a, b;
    if (x.is_complex()) {
        a.assign(x.complex_data().begin(), x.complex_data().end());
        b.assign(y.complex_data().begin(), y.complex_data().end());
    } else if (x.is_real()) {
        for (double v : x.real_data()) a.emplace_back(v, 0.0);
        for (double v : y.real_data()) b.emplace_back(v, 0.0);
    } else {
        for (auto v : x.sign_data()) a.emplace_back(v, 0.0);
        for (auto v : y.sign_data()) b.emplace_back(v, 0.0);
    }
    Complex inner(0.0, 0.0);
    double na = 0.0, nb = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        inner += std::conj(a[i]) * b[i];
        na += std::norm(a[i]);
        nb += std::norm(b[i]);
    }
    return inner.real() / (std::sqrt(na) * std::sqrt(nb));
}

// s_k = Σ_i x_i y_{(k−i) mod d}
inline std::vector<double> circular_convolution(const std::vector<double>& x, const std::vector<double>& y) {
    const std::size_t d = x.size();
    std::vector<double> s(d, 0.0);
    for (std::size_t k = 0; k < d; ++k) {
        for (std::size_t i = 0; i < d; ++i) s[k] += x[i] * y[(k + d - i) % d];
    }
    return s;
}

// c_k = Σ_i y_i z_{(k+i) mod d}, the approximate inverse of convolving with y.
inline std::vector<double> circular_correlation(const std::vector<double>& z, const std::vector<double>& y) {
    const std::size_t d = z.size();
    std::vector<double> c(d, 0.0);
    for (std::size_t k = 0; k < d; ++k) {
        for (std::size_t i = 0; i < d; ++i) c[k] += y[i] * z[(k + i) % d];
    }
    return c;
}

inline double cosine(const std::vector<double>& a, const std::vector<double>& b) {
    double dot = 0.0, na = 0.0, nb = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        dot += a[i] * b[i];
        na += a[i] * a[i];
        nb += b[i] * b[i];
    }
    return dot / std::sqrt(na * nb);
}

// (ra, rb) → number of entities e with (·, ra, e) and (e, rb, ·), from a
// double loop over all triple pairs.
inline std::map<std::pair<std::string, std::string>, std::uint64_t> schema_edges(
    const std::vector<pathhd::Triple>& triples) {
    std::map<std::pair<std::string, std::string>, std::set<std::string>> witnesses;
    for (const auto& a : triples) {
        for (const auto& b : triples) {
            if (a.tail == b.head) witnesses[{a.relation, b.relation}].insert(a.tail);
        }
    }
    std::map<std::pair<std::string, std::string>, std::uint64_t> out;
    for (const auto& [k, v] : witnesses) out[k] = v.size();
    return out;
}

// Every relation sequence of length <= l_max that starts in `start` and whose
// consecutive pairs are schema edges, by depth-first search.
inline std::set<pathhd::Schema> dfs_plans(const std::map<std::pair<std::string, std::string>, std::uint64_t>& edges,
                                          const std::vector<std::string>& start, std::size_t l_max) {
    std::set<pathhd::Schema> out;
    std::vector<std::string> stack;
    auto visit = [&](auto&& self) -> void {
        out.insert(pathhd::Schema{stack});
        if (stack.size() == l_max) return;
        for (const auto& [pair, count] : edges) {
            if (pair.first == stack.back() && count > 0) {
                stack.push_back(pair.second);
                self(self);
                stack.pop_back();
            }
        }
    };
    for (const auto& r : start) {
        stack = {r};
        visit(visit);
    }
    return out;
}

// Walks from `topic` following `schema`, matched recursively against the raw
// triple list.
inline void match_schema(const std::vector<pathhd::Triple>& triples, const pathhd::Schema& schema,
                         std::vector<std::string>& chain, std::set<pathhd::CandidatePath>& out) {
    const std::size_t depth = chain.size() - 1;
    if (depth == schema.size()) {
        out.insert(pathhd::CandidatePath{schema, chain});
        return;
    }
    for (const auto& t : triples) {
        if (t.head == chain.back() && t.relation == schema.relations[depth]) {
            chain.push_back(t.tail);
            match_schema(triples, schema, chain, out);
            chain.pop_back();
        }
    }
}

inline std::set<pathhd::CandidatePath> match_all(const std::vector<pathhd::Triple>& triples,
                                                 const std::vector<pathhd::Schema>& plans, const std::string& topic) {
    std::set<pathhd::CandidatePath> out;
    for (const auto& p : plans) {
        std::vector<std::string> chain{topic};
        match_schema(triples, p, chain, out);
    }
    return out;
}

// Every walk of length 1..l_max from topic over the raw triple list.
inline std::set<pathhd::CandidatePath> all_walks(const std::vector<pathhd::Triple>& triples, const std::string& topic,
                                                 std::size_t l_max) {
    std::set<pathhd::CandidatePath> out;
    pathhd::CandidatePath cur{{}, {topic}};
    auto visit = [&](auto&& self) -> void {
        if (!cur.schema.empty()) out.insert(cur);
        if (cur.schema.size() == l_max) return;
        for (const auto& t : triples) {
            if (t.head != cur.entity_chain.back()) continue;
            cur.schema.relations.push_back(t.relation);
            cur.entity_chain.push_back(t.tail);
            self(self);
            cur.schema.relations.pop_back();
            cur.entity_chain.pop_back();
        }
    };
    visit(visit);
    return out;
}

// head → (relation, tail) built straight from the triple list.
using Adjacency = std::multimap<std::string, std::pair<std::string, std::string>>;

inline Adjacency adjacency(const std::vector<pathhd::Triple>& triples) {
    Adjacency adj;
    std::set<pathhd::Triple> seen;
    for (const auto& t : triples) {
        if (seen.insert(t).second) adj.emplace(t.head, std::make_pair(t.relation, t.tail));
    }
    return adj;
}

// all_walks over a prebuilt adjacency, for graphs too large to rescan.
inline std::set<pathhd::CandidatePath> all_walks(const Adjacency& adj, const std::string& topic, std::size_t l_max) {
    std::set<pathhd::CandidatePath> out;
    pathhd::CandidatePath cur{{}, {topic}};
    auto visit = [&](auto&& self) -> void {
        if (!cur.schema.empty()) out.insert(cur);
        if (cur.schema.size() == l_max) return;
        const auto [lo, hi] = adj.equal_range(cur.entity_chain.back());
        for (auto it = lo; it != hi; ++it) {
            cur.schema.relations.push_back(it->second.first);
            cur.entity_chain.push_back(it->second.second);
            self(self);
            cur.schema.relations.pop_back();
            cur.entity_chain.pop_back();
        }
    };
    visit(visit);
    return out;
}

// Full ordering: total desc, then length asc, schema asc, chain asc.
inline bool before(const pathhd::ScoredCandidate& a, const pathhd::ScoredCandidate& b) {
    return std::make_tuple(-a.total, a.path.schema.size(), std::cref(a.path.schema), std::cref(a.path.entity_chain)) <
           std::make_tuple(-b.total, b.path.schema.size(), std::cref(b.path.schema), std::cref(b.path.entity_chain));
}

inline std::vector<pathhd::ScoredCandidate> full_sort(std::vector<pathhd::ScoredCandidate> v) {
    std::sort(v.begin(), v.end(), before);
    return v;
}

}  // namespace oracle
