#pragma once

#include "cspgemm/csr.hpp"
#include "cspgemm/types.hpp"

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <random>
#include <vector>

namespace cspgemm {

/// Builds tall-skinny 0/1 frontier matrices from batched BFS over `a` read
/// as a directed adjacency matrix. `batch` seeded random source vertices
/// are drawn (sorted, without replacement); matrix t has entry (v, s) = 1
/// iff vertex v is at BFS depth t from source s. Matrix 0 holds the sources
/// themselves. At most num_frontiers matrices are returned; the list is
/// shorter when every search has exhausted its component.
inline std::vector<CsrMatrix> generate_frontiers(const CsrMatrix& a, index_t num_frontiers,
                                                 index_t batch, std::uint64_t seed) {
    detail::require(a.nrows == a.ncols, "generate_frontiers: adjacency must be square");
    detail::require(num_frontiers >= 1, "generate_frontiers: num_frontiers must be >= 1");
    detail::require(batch >= 1, "generate_frontiers: batch must be >= 1");

    const index_t n = a.nrows;
    const index_t width = std::min(batch, n);
    std::vector<CsrMatrix> out;
    if (n == 0) return out;

    // Sample sources: shuffle, take the first `width`, sort for a canonical
    // column order.
    std::mt19937_64 rng(seed);
    std::vector<index_t> sources(static_cast<std::size_t>(n));
    std::iota(sources.begin(), sources.end(), index_t{0});
    for (index_t i = n - 1; i > 0; --i) {
        const auto j = static_cast<index_t>(
            detail::bounded(rng(), static_cast<std::uint64_t>(i) + 1));
        std::swap(sources[i], sources[j]);
    }
    sources.resize(static_cast<std::size_t>(width));
    std::sort(sources.begin(), sources.end());

    // depth[s*n + v], -1 while unreached.
    std::vector<index_t> depth(static_cast<std::size_t>(width) * n, -1);
    std::vector<index_t> queue;
    index_t max_depth = 0;
    for (index_t s = 0; s < width; ++s) {
        index_t* d = depth.data() + static_cast<std::size_t>(s) * n;
        queue.clear();
        queue.push_back(sources[s]);
        d[sources[s]] = 0;
        for (std::size_t head = 0; head < queue.size(); ++head) {
            const index_t v = queue[head];
            for (index_t w : a.row_cols(v))
                if (d[w] < 0) {
                    d[w] = d[v] + 1;
                    queue.push_back(w);
                }
        }
        if (!queue.empty()) max_depth = std::max(max_depth, d[queue.back()]);
    }

    const index_t levels = std::min<index_t>(num_frontiers, max_depth + 1);
    for (index_t t = 0; t < levels; ++t) {
        CooMatrix f;
        f.nrows = n;
        f.ncols = width;
        for (index_t s = 0; s < width; ++s) {
            const index_t* d = depth.data() + static_cast<std::size_t>(s) * n;
            for (index_t v = 0; v < n; ++v)
                if (d[v] == t) f.entries.push_back({v, s, 1.0});
        }
        out.push_back(coo_to_csr(f));
    }
    return out;
}

} // namespace cspgemm
