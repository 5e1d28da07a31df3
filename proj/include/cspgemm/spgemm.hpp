#pragma once

#include "cspgemm/csr.hpp"
#include "cspgemm/hash_accumulator.hpp"
#include "cspgemm/types.hpp"

#include <algorithm>
#include <cstddef>
#include <numeric>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace cspgemm {

namespace detail {

inline int resolve_threads(int num_threads) {
#ifdef _OPENMP
    return num_threads > 0 ? num_threads : omp_get_max_threads();
#else
    (void)num_threads;
    return 1;
#endif
}

// Sum of nnz over the B rows touched by row i of A; sizes the accumulator
// before the exact count is known.
inline std::size_t row_upper_bound(const CsrMatrix& a, const CsrMatrix& b, index_t i) {
    std::size_t ub = 0;
    for (index_t p = a.row_ptr[i]; p < a.row_ptr[i + 1]; ++p)
        ub += static_cast<std::size_t>(b.row_nnz(a.col_idx[p]));
    return ub;
}

} // namespace detail

/// Symbolic phase: per-row count of distinct output columns of A*B.
inline std::vector<index_t> spgemm_symbolic(const CsrMatrix& a, const CsrMatrix& b,
                                            int num_threads = 0) {
    detail::require(a.ncols == b.nrows, "spgemm: dimension mismatch (a.ncols != b.nrows)");
    std::vector<index_t> counts(static_cast<std::size_t>(a.nrows), 0);
    const int nt = detail::resolve_threads(num_threads);
#pragma omp parallel num_threads(nt)
    {
        HashAccumulator acc;
#pragma omp for schedule(dynamic, 64)
        for (index_t i = 0; i < a.nrows; ++i) {
            const std::size_t ub = detail::row_upper_bound(a, b, i);
            if (ub == 0) continue;
            acc.reserve(ub);
            for (index_t p = a.row_ptr[i]; p < a.row_ptr[i + 1]; ++p) {
                const index_t k = a.col_idx[p];
                for (index_t q = b.row_ptr[k]; q < b.row_ptr[k + 1]; ++q)
                    acc.insert_key(b.col_idx[q]);
            }
            counts[i] = static_cast<index_t>(acc.size());
        }
    }
    return counts;
}

/// Gustavson row-wise SpGEMM with a hash-table accumulator, split into a
/// symbolic phase (exact allocation) and a numeric phase. Entries that
/// accumulate to exactly 0.0 are kept: the output structure is the
/// structural union computed by the symbolic phase. Rows are computed
/// independently, so results do not depend on the worker count.
inline CsrMatrix spgemm_rowwise(const CsrMatrix& a, const CsrMatrix& b, int num_threads = 0) {
    const std::vector<index_t> counts = spgemm_symbolic(a, b, num_threads);

    CsrMatrix c;
    c.nrows = a.nrows;
    c.ncols = b.ncols;
    c.row_ptr.assign(static_cast<std::size_t>(a.nrows) + 1, 0);
    for (index_t i = 0; i < a.nrows; ++i) c.row_ptr[i + 1] = counts[i];
    std::partial_sum(c.row_ptr.begin(), c.row_ptr.end(), c.row_ptr.begin());
    c.col_idx.resize(static_cast<std::size_t>(c.row_ptr.back()));
    c.values.resize(static_cast<std::size_t>(c.row_ptr.back()));

    const int nt = detail::resolve_threads(num_threads);
#pragma omp parallel num_threads(nt)
    {
        HashAccumulator acc;
        std::vector<index_t> cols;
        std::vector<value_t> vals;
#pragma omp for schedule(dynamic, 64)
        for (index_t i = 0; i < a.nrows; ++i) {
            if (counts[i] == 0) continue;
            acc.reserve(static_cast<std::size_t>(counts[i]));
            for (index_t p = a.row_ptr[i]; p < a.row_ptr[i + 1]; ++p) {
                const index_t k = a.col_idx[p];
                const value_t av = a.values[p];
                for (index_t q = b.row_ptr[k]; q < b.row_ptr[k + 1]; ++q)
                    acc.accumulate(b.col_idx[q], av * b.values[q]);
            }
            cols.clear();
            vals.clear();
            acc.extract_sorted(cols, vals);
            std::copy(cols.begin(), cols.end(), c.col_idx.begin() + c.row_ptr[i]);
            std::copy(vals.begin(), vals.end(), c.values.begin() + c.row_ptr[i]);
        }
    }
    return c;
}

/// Jaccard similarity of the column sets of rows i and j:
/// |cols(i) n cols(j)| / |cols(i) u cols(j)|, 0 when both rows are empty.
inline value_t jaccard_similarity(const CsrMatrix& a, index_t i, index_t j) {
    detail::require(i >= 0 && i < a.nrows && j >= 0 && j < a.nrows,
                    "jaccard_similarity: row index out of range");
    const auto ci = a.row_cols(i);
    const auto cj = a.row_cols(j);
    std::size_t inter = 0, p = 0, q = 0;
    while (p < ci.size() && q < cj.size()) {
        if (ci[p] == cj[q]) {
            ++inter;
            ++p;
            ++q;
        } else if (ci[p] < cj[q]) {
            ++p;
        } else {
            ++q;
        }
    }
    const std::size_t uni = ci.size() + cj.size() - inter;
    return uni == 0 ? 0.0 : static_cast<value_t>(inter) / static_cast<value_t>(uni);
}

/// A pair of distinct rows with their Jaccard similarity score.
struct CandidatePair {
    index_t i;
    index_t j;
    value_t score;
};

/// Streams the rows of A*A^T one at a time, converting overlap counts to
/// Jaccard scores and keeping at most `topk` neighbors per row with score >=
/// jacc_th (ties broken towards the smaller neighbor index). The full
/// product is never materialized. Unordered pairs {i, j} are deduplicated.
///
/// Expects `a` binarized and `a_t` = transpose(binarize(a)).
inline std::vector<CandidatePair> spgemm_topk(const CsrMatrix& a, const CsrMatrix& a_t,
                                              index_t topk, value_t jacc_th,
                                              int num_threads = 0) {
    detail::require(a.ncols == a_t.nrows, "spgemm_topk: dimension mismatch");
    detail::require(topk >= 1, "spgemm_topk: topk must be >= 1");

    std::vector<std::vector<CandidatePair>> per_row(static_cast<std::size_t>(a.nrows));
    const int nt = detail::resolve_threads(num_threads);
#pragma omp parallel num_threads(nt)
    {
        HashAccumulator acc;
        std::vector<CandidatePair> row_pairs;
        std::vector<index_t> neighbors;
#pragma omp for schedule(dynamic, 64)
        for (index_t i = 0; i < a.nrows; ++i) {
            const std::size_t ub = detail::row_upper_bound(a, a_t, i);
            if (ub == 0) continue;
            acc.reserve(ub);
            for (index_t p = a.row_ptr[i]; p < a.row_ptr[i + 1]; ++p) {
                const index_t k = a.col_idx[p];
                for (index_t q = a_t.row_ptr[k]; q < a_t.row_ptr[k + 1]; ++q)
                    acc.accumulate(a_t.col_idx[q], 1.0);
            }
            const value_t nnz_i = static_cast<value_t>(a.row_nnz(i));
            row_pairs.clear();
            // Overlap count -> Jaccard: o / (nnz_i + nnz_j - o).
            neighbors.clear();
            acc.extract_keys_sorted(neighbors);
            for (index_t j : neighbors) {
                if (j == i) continue;
                const value_t o = *acc.find(j);
                const value_t nnz_j = static_cast<value_t>(a.row_nnz(j));
                const value_t score = o / (nnz_i + nnz_j - o);
                if (score >= jacc_th) row_pairs.push_back({i, j, score});
            }
            const std::size_t keep = std::min<std::size_t>(row_pairs.size(),
                                                           static_cast<std::size_t>(topk));
            std::partial_sort(row_pairs.begin(), row_pairs.begin() + keep, row_pairs.end(),
                              [](const CandidatePair& x, const CandidatePair& y) {
                                  if (x.score != y.score) return x.score > y.score;
                                  return x.j < y.j;
                              });
            row_pairs.resize(keep);
            per_row[i] = row_pairs;
        }
    }

    // Merge per-row lists, dropping the duplicate of each unordered pair.
    // Scores are symmetric, so whichever endpoint emitted the pair first wins.
    std::vector<CandidatePair> out;
    std::vector<std::vector<index_t>> seen(static_cast<std::size_t>(a.nrows));
    for (index_t i = 0; i < a.nrows; ++i) {
        for (const CandidatePair& cp : per_row[i]) {
            const index_t lo = std::min(cp.i, cp.j);
            const index_t hi = std::max(cp.i, cp.j);
            auto& bucket = seen[lo];
            if (std::find(bucket.begin(), bucket.end(), hi) != bucket.end()) continue;
            bucket.push_back(hi);
            out.push_back(cp);
        }
    }
    return out;
}

} // namespace cspgemm
