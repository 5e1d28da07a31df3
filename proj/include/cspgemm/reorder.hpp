#pragma once

#include "cspgemm/csr.hpp"
#include "cspgemm/permutation.hpp"
#include "cspgemm/types.hpp"

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <numeric>
#include <random>
#include <string>
#include <vector>

namespace cspgemm {

/// Uniform random permutation via Fisher-Yates over std::mt19937_64, whose
/// output sequence is fixed by the standard, so a seed names the same
/// permutation on every platform.
inline Permutation reorder_random(index_t nrows, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::vector<index_t> perm(static_cast<std::size_t>(nrows));
    std::iota(perm.begin(), perm.end(), index_t{0});
    for (index_t i = nrows - 1; i > 0; --i) {
        const auto j = static_cast<index_t>(
            detail::bounded(rng(), static_cast<std::uint64_t>(i) + 1));
        std::swap(perm[i], perm[j]);
    }
    return Permutation::from_perm(std::move(perm));
}

/// Rows sorted by descending nnz; ties keep ascending original index.
inline Permutation reorder_degree(const CsrMatrix& a) {
    detail::require(a.nrows == a.ncols, "reorder_degree: matrix must be square");
    std::vector<index_t> perm(static_cast<std::size_t>(a.nrows));
    std::iota(perm.begin(), perm.end(), index_t{0});
    std::stable_sort(perm.begin(), perm.end(),
                     [&](index_t x, index_t y) { return a.row_nnz(x) > a.row_nnz(y); });
    return Permutation::from_perm(std::move(perm));
}

/// Maximum distance from the diagonal over structural nonzeros; 0 when the
/// matrix is empty or diagonal-only.
inline index_t bandwidth(const CsrMatrix& a) {
    detail::require(a.nrows == a.ncols, "bandwidth: matrix must be square");
    index_t bw = 0;
    for (index_t i = 0; i < a.nrows; ++i)
        for (index_t p = a.row_ptr[i]; p < a.row_ptr[i + 1]; ++p)
            bw = std::max(bw, std::abs(i - a.col_idx[p]));
    return bw;
}

namespace detail {

// Undirected adjacency from the pattern of A | A^T, self-loops dropped,
// each neighbor list presorted by (degree, index) so BFS discovery order
// follows the Cuthill-McKee rule without per-visit sorting.
struct RcmGraph {
    std::vector<std::vector<index_t>> adj;
    std::vector<index_t> degree;
};

inline RcmGraph build_rcm_graph(const CsrMatrix& a) {
    const CsrMatrix at = transpose(a);
    RcmGraph g;
    g.adj.resize(static_cast<std::size_t>(a.nrows));
    for (index_t i = 0; i < a.nrows; ++i) {
        auto& nbrs = g.adj[i];
        const auto r = a.row_cols(i);
        const auto c = at.row_cols(i);
        nbrs.reserve(r.size() + c.size());
        std::merge(r.begin(), r.end(), c.begin(), c.end(), std::back_inserter(nbrs));
        nbrs.erase(std::unique(nbrs.begin(), nbrs.end()), nbrs.end());
        nbrs.erase(std::remove(nbrs.begin(), nbrs.end(), i), nbrs.end());
    }
    g.degree.resize(g.adj.size());
    for (std::size_t i = 0; i < g.adj.size(); ++i)
        g.degree[i] = static_cast<index_t>(g.adj[i].size());
    for (auto& nbrs : g.adj)
        std::sort(nbrs.begin(), nbrs.end(), [&](index_t x, index_t y) {
            if (g.degree[x] != g.degree[y]) return g.degree[x] < g.degree[y];
            return x < y;
        });
    return g;
}

// BFS level structure rooted at r, restricted to unvisited vertices.
// Returns the vertices level by level plus the index where the last level
// starts.
struct LevelStructure {
    std::vector<index_t> order;
    std::size_t last_level_begin = 0;
    std::size_t height = 0;
};

inline LevelStructure bfs_levels(const RcmGraph& g, index_t root, std::vector<char>& mark) {
    LevelStructure ls;
    ls.order.push_back(root);
    mark[root] = 1;
    std::size_t level_begin = 0;
    while (level_begin < ls.order.size()) {
        const std::size_t level_end = ls.order.size();
        for (std::size_t q = level_begin; q < level_end; ++q)
            for (index_t nb : g.adj[ls.order[q]])
                if (!mark[nb]) {
                    mark[nb] = 1;
                    ls.order.push_back(nb);
                }
        ++ls.height;
        if (ls.order.size() == level_end) break;
        ls.last_level_begin = level_end;
        level_begin = level_end;
    }
    for (index_t v : ls.order) mark[v] = 0;
    return ls;
}

inline index_t min_degree_vertex(const RcmGraph& g, const std::vector<index_t>& verts,
                                 std::size_t begin, std::size_t end) {
    index_t best = verts[begin];
    for (std::size_t k = begin + 1; k < end; ++k) {
        const index_t v = verts[k];
        if (g.degree[v] < g.degree[best] || (g.degree[v] == g.degree[best] && v < best))
            best = v;
    }
    return best;
}

} // namespace detail

/// Reverse Cuthill-McKee. The pattern is symmetrized for traversal only.
/// Each connected component starts from a pseudo-peripheral vertex (double
/// BFS sweep from a minimum-degree vertex), is traversed breadth-first with
/// neighbors in ascending-degree order, and its visit order is reversed.
/// Components are emitted in ascending order of their smallest original
/// index.
inline Permutation reorder_rcm(const CsrMatrix& a) {
    detail::require(a.nrows == a.ncols, "reorder_rcm: matrix must be square");
    const detail::RcmGraph g = detail::build_rcm_graph(a);
    const index_t n = a.nrows;

    std::vector<char> visited(static_cast<std::size_t>(n), 0);
    std::vector<char> scratch(static_cast<std::size_t>(n), 0);
    std::vector<index_t> perm;
    perm.reserve(static_cast<std::size_t>(n));

    for (index_t start = 0; start < n; ++start) {
        if (visited[start]) continue;

        // Component members, then its minimum-degree vertex as the sweep seed.
        detail::LevelStructure comp = detail::bfs_levels(g, start, scratch);
        index_t root = detail::min_degree_vertex(g, comp.order, 0, comp.order.size());

        detail::LevelStructure ls = detail::bfs_levels(g, root, scratch);
        while (ls.order.size() > 1) {
            const index_t cand =
                detail::min_degree_vertex(g, ls.order, ls.last_level_begin, ls.order.size());
            detail::LevelStructure trial = detail::bfs_levels(g, cand, scratch);
            if (trial.height > ls.height) {
                root = cand;
                ls = std::move(trial);
            } else {
                break;
            }
        }

        // Cuthill-McKee order for this component (adjacency lists are
        // presorted by degree), reversed in place.
        const std::size_t comp_begin = perm.size();
        perm.push_back(root);
        visited[root] = 1;
        for (std::size_t q = comp_begin; q < perm.size(); ++q)
            for (index_t nb : g.adj[perm[q]])
                if (!visited[nb]) {
                    visited[nb] = 1;
                    perm.push_back(nb);
                }
        std::reverse(perm.begin() + comp_begin, perm.end());
    }
    return Permutation::from_perm(std::move(perm));
}

/// How a row order is chosen: keep the input order, seeded shuffle, degree
/// sort, reverse Cuthill-McKee, or an externally computed permutation file.
struct ReorderSpec {
    enum class Method { original, random, degree, rcm, file };
    Method method = Method::original;
    std::uint64_t seed = 0;
    std::string path; // for Method::file

    static ReorderSpec original() { return {}; }
};

} // namespace cspgemm
