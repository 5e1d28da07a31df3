#pragma once

#include "cspgemm/cluster_format.hpp"
#include "cspgemm/csr.hpp"
#include "cspgemm/hash_accumulator.hpp"
#include "cspgemm/types.hpp"

#include <atomic>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <utility>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace cspgemm {

/// Measured proxies for B-row reuse. A "load" is a fetch of a non-empty B
/// row by one work unit (a cluster, or a single row in the row-wise
/// baseline); fetches that find an empty row read no row data and are not
/// counted. a_inner_iters counts value-slot visits of the cluster's rows,
/// placeholders included; the placeholder share is tallied separately.
struct AccessStats {
    std::uint64_t b_row_loads = 0;
    std::uint64_t a_inner_iters = 0;
    std::uint64_t placeholder_skips = 0;
};

/// The row-wise baseline's analogous counts: one B-row fetch per stored A
/// entry, one inner iteration per multiply.
inline AccessStats rowwise_access_stats(const CsrMatrix& a, const CsrMatrix& b) {
    detail::require(a.ncols == b.nrows, "rowwise_access_stats: dimension mismatch");
    AccessStats s;
    for (index_t k : a.col_idx) {
        const std::uint64_t bn = static_cast<std::uint64_t>(b.row_nnz(k));
        if (bn > 0) {
            ++s.b_row_loads;
            s.a_inner_iters += bn;
        }
    }
    return s;
}

namespace detail {

/// Cluster-wise SpGEMM core. For every cluster of A: walk the merged column
/// list, fetch each touched B row once, and accumulate its contributions
/// into one accumulator per member row (skipping placeholder slots via the
/// validity mask). C mirrors A's cluster partition; its merged column list
/// per cluster is the union of the member rows' output columns, padded per
/// row exactly as A is.
inline CsrClusterMatrix clusterwise_impl(const CsrClusterMatrix& a, const CsrMatrix& b,
                                         int num_threads, AccessStats* stats) {
    require(a.ncols == b.nrows, "spgemm_clusterwise: dimension mismatch (a.ncols != b.nrows)");

    CsrClusterMatrix c;
    c.nclusters = a.nclusters;
    c.nrows = a.nrows;
    c.ncols = b.ncols;
    c.cluster_sizes = a.cluster_sizes;
    c.row_map = a.row_map;
    c.cluster_col_ptr.assign(static_cast<std::size_t>(a.nclusters) + 1, 0);
    c.value_ptr.assign(static_cast<std::size_t>(a.nclusters) + 1, 0);

    const int nt = resolve_threads(num_threads);

    // Symbolic: per-cluster union of the member rows' output column sets.
#pragma omp parallel num_threads(nt)
    {
        HashAccumulator uni;
#pragma omp for schedule(dynamic, 16)
        for (index_t cl = 0; cl < a.nclusters; ++cl) {
            std::size_t ub = 0;
            for (index_t k : a.cluster_col_span(cl)) ub += static_cast<std::size_t>(b.row_nnz(k));
            if (ub == 0) continue;
            uni.reserve(ub);
            for (index_t k : a.cluster_col_span(cl))
                for (index_t q = b.row_ptr[k]; q < b.row_ptr[k + 1]; ++q)
                    uni.insert_key(b.col_idx[q]);
            c.cluster_col_ptr[cl + 1] = static_cast<index_t>(uni.size());
        }
    }
    for (index_t cl = 0; cl < a.nclusters; ++cl) {
        c.value_ptr[cl + 1] = c.value_ptr[cl] + a.cluster_sizes[cl] * c.cluster_col_ptr[cl + 1];
        c.cluster_col_ptr[cl + 1] += c.cluster_col_ptr[cl];
    }
    c.col_idx.resize(static_cast<std::size_t>(c.cluster_col_ptr.back()));
    const std::size_t slots = static_cast<std::size_t>(c.value_ptr.back());
    c.values.assign(slots, 0.0);
    c.valid.assign((slots + 63) / 64, 0);

    // Member offsets into row_map / per-row accumulation, per cluster.
    std::vector<std::size_t> member_base(static_cast<std::size_t>(a.nclusters) + 1, 0);
    for (index_t cl = 0; cl < a.nclusters; ++cl)
        member_base[cl + 1] = member_base[cl] + static_cast<std::size_t>(a.cluster_sizes[cl]);

    std::uint64_t loads = 0, iters = 0, skips = 0;

    // Numeric phase, one cluster per task.
#pragma omp parallel num_threads(nt) reduction(+ : loads, iters, skips)
    {
        std::vector<HashAccumulator> acc;
        std::vector<index_t> live; // member positions with a valid slot at the current column
        std::vector<index_t> out_cols;
#pragma omp for schedule(dynamic, 16)
        for (index_t cl = 0; cl < a.nclusters; ++cl) {
            const index_t k_members = a.cluster_sizes[cl];
            if (c.cluster_cols(cl) == 0) continue;
            const auto acols = a.cluster_col_span(cl);
            const std::size_t avbase = static_cast<std::size_t>(a.value_ptr[cl]);

            if (acc.size() < static_cast<std::size_t>(k_members))
                acc.resize(static_cast<std::size_t>(k_members));
            for (index_t l = 0; l < k_members; ++l) {
                std::size_t ub = 0;
                for (std::size_t p = 0; p < acols.size(); ++p)
                    if (a.valid_bit(avbase + p * k_members + static_cast<std::size_t>(l)))
                        ub += static_cast<std::size_t>(b.row_nnz(acols[p]));
                acc[l].reserve(ub);
            }

            for (std::size_t p = 0; p < acols.size(); ++p) {
                const index_t k = acols[p];
                const index_t bn = b.row_nnz(k);
                if (bn == 0) continue;
                ++loads;
                iters += static_cast<std::uint64_t>(k_members) * bn;
                live.clear();
                for (index_t l = 0; l < k_members; ++l)
                    if (a.valid_bit(avbase + p * k_members + static_cast<std::size_t>(l)))
                        live.push_back(l);
                skips += static_cast<std::uint64_t>(k_members - live.size()) * bn;
                for (index_t q = b.row_ptr[k]; q < b.row_ptr[k + 1]; ++q) {
                    const index_t j = b.col_idx[q];
                    const value_t bv = b.values[q];
                    for (index_t l : live)
                        acc[l].accumulate(j, a.values[avbase + p * k_members +
                                                      static_cast<std::size_t>(l)] *
                                                 bv);
                }
            }

            // Write back: merged output columns, then per-member values with
            // validity bits where the member produced the column.
            out_cols.clear();
            for (index_t l = 0; l < k_members; ++l) acc[l].extract_keys_sorted(out_cols);
            std::sort(out_cols.begin(), out_cols.end());
            out_cols.erase(std::unique(out_cols.begin(), out_cols.end()), out_cols.end());

            std::copy(out_cols.begin(), out_cols.end(),
                      c.col_idx.begin() + c.cluster_col_ptr[cl]);
            const std::size_t cvbase = static_cast<std::size_t>(c.value_ptr[cl]);
            for (std::size_t p = 0; p < out_cols.size(); ++p) {
                for (index_t l = 0; l < k_members; ++l) {
                    const value_t* v = acc[l].find(out_cols[p]);
                    if (!v) continue;
                    const std::size_t slot = cvbase + p * static_cast<std::size_t>(k_members) +
                                             static_cast<std::size_t>(l);
                    c.values[slot] = *v;
                    // Neighbouring clusters can share a mask word, so the
                    // bit set must be atomic under the parallel loop.
                    std::atomic_ref<std::uint64_t>(c.valid[slot >> 6])
                        .fetch_or(std::uint64_t{1} << (slot & 63), std::memory_order_relaxed);
                }
            }
            for (index_t l = 0; l < k_members; ++l) acc[l].clear();
        }
    }

    if (stats) {
        stats->b_row_loads = loads;
        stats->a_inner_iters = iters;
        stats->placeholder_skips = skips;
    }
    return c;
}

} // namespace detail

/// Cluster-wise SpGEMM (C = A*B with A in clustered form). C's cluster
/// partition mirrors A's; numerically cluster_to_csr(C) equals
/// spgemm_rowwise(cluster_to_csr(A), B).
inline CsrClusterMatrix spgemm_clusterwise(const CsrClusterMatrix& a, const CsrMatrix& b,
                                           int num_threads = 0) {
    return detail::clusterwise_impl(a, b, num_threads, nullptr);
}

inline std::pair<CsrClusterMatrix, AccessStats>
spgemm_clusterwise_instrumented(const CsrClusterMatrix& a, const CsrMatrix& b,
                                int num_threads = 0) {
    AccessStats stats;
    CsrClusterMatrix c = detail::clusterwise_impl(a, b, num_threads, &stats);
    return {std::move(c), stats};
}

} // namespace cspgemm
