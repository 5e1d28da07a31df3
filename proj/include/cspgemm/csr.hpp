#pragma once

#include "cspgemm/types.hpp"
#include "cspgemm/permutation.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <span>
#include <tuple>
#include <vector>

namespace cspgemm {

/// Coordinate-format staging matrix. Entries may be unsorted and may contain
/// duplicate (row, col) pairs until canonicalize() or coo_to_csr() is called.
struct CooMatrix {
    index_t nrows = 0;
    index_t ncols = 0;
    struct Entry {
        index_t row;
        index_t col;
        value_t value;
    };
    std::vector<Entry> entries;

    /// Sorts entries by (row, col) and sums duplicates in place.
    void canonicalize() {
        std::sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) {
            return std::tie(a.row, a.col) < std::tie(b.row, b.col);
        });
        std::size_t out = 0;
        for (std::size_t i = 0; i < entries.size();) {
            Entry e = entries[i];
            std::size_t j = i + 1;
            while (j < entries.size() && entries[j].row == e.row && entries[j].col == e.col) {
                e.value += entries[j].value;
                ++j;
            }
            entries[out++] = e;
            i = j;
        }
        entries.resize(out);
    }
};

/// Compressed sparse row matrix. Invariants (checked by check_invariants):
/// row_ptr[0] == 0, row_ptr non-decreasing, row_ptr[nrows] == nnz, and
/// column indices strictly increasing within each row.
struct CsrMatrix {
    index_t nrows = 0;
    index_t ncols = 0;
    std::vector<index_t> row_ptr{0};
    std::vector<index_t> col_idx;
    std::vector<value_t> values;

    index_t nnz() const { return row_ptr.empty() ? 0 : row_ptr[static_cast<std::size_t>(nrows)]; }

    index_t row_nnz(index_t i) const { return row_ptr[i + 1] - row_ptr[i]; }

    std::span<const index_t> row_cols(index_t i) const {
        return {col_idx.data() + row_ptr[i], static_cast<std::size_t>(row_nnz(i))};
    }

    std::span<const value_t> row_vals(index_t i) const {
        return {values.data() + row_ptr[i], static_cast<std::size_t>(row_nnz(i))};
    }

    void check_invariants() const {
        detail::require(row_ptr.size() == static_cast<std::size_t>(nrows) + 1,
                        "csr: row_ptr length must be nrows+1");
        detail::require(row_ptr.front() == 0, "csr: row_ptr[0] must be 0");
        for (index_t i = 0; i < nrows; ++i) {
            detail::require(row_ptr[i] <= row_ptr[i + 1], "csr: row_ptr must be non-decreasing");
            for (index_t p = row_ptr[i]; p < row_ptr[i + 1]; ++p) {
                detail::require(col_idx[p] >= 0 && col_idx[p] < ncols,
                                "csr: column index out of range");
                if (p > row_ptr[i])
                    detail::require(col_idx[p - 1] < col_idx[p],
                                    "csr: columns must be strictly increasing within a row");
            }
        }
        detail::require(static_cast<std::size_t>(row_ptr.back()) == col_idx.size(),
                        "csr: row_ptr[nrows] must equal nnz");
        detail::require(col_idx.size() == values.size(), "csr: col_idx/values length mismatch");
    }
};

/// Builds a CSR matrix from coordinate entries. Duplicate (row, col) pairs
/// are summed (Matrix Market convention); rows come out sorted.
inline CsrMatrix coo_to_csr(const CooMatrix& m) {
    for (const auto& e : m.entries) {
        detail::require(e.row >= 0 && e.row < m.nrows, "coo_to_csr: row index out of range");
        detail::require(e.col >= 0 && e.col < m.ncols, "coo_to_csr: col index out of range");
    }
    CooMatrix sorted = m;
    sorted.canonicalize();

    CsrMatrix a;
    a.nrows = m.nrows;
    a.ncols = m.ncols;
    a.row_ptr.assign(static_cast<std::size_t>(m.nrows) + 1, 0);
    a.col_idx.reserve(sorted.entries.size());
    a.values.reserve(sorted.entries.size());
    for (const auto& e : sorted.entries) {
        ++a.row_ptr[e.row + 1];
        a.col_idx.push_back(e.col);
        a.values.push_back(e.value);
    }
    std::partial_sum(a.row_ptr.begin(), a.row_ptr.end(), a.row_ptr.begin());
    return a;
}

inline CsrMatrix transpose(const CsrMatrix& a) {
    CsrMatrix t;
    t.nrows = a.ncols;
    t.ncols = a.nrows;
    t.row_ptr.assign(static_cast<std::size_t>(a.ncols) + 1, 0);
    t.col_idx.resize(a.col_idx.size());
    t.values.resize(a.values.size());
    for (index_t c : a.col_idx) ++t.row_ptr[c + 1];
    std::partial_sum(t.row_ptr.begin(), t.row_ptr.end(), t.row_ptr.begin());
    std::vector<index_t> cursor(t.row_ptr.begin(), t.row_ptr.end() - 1);
    for (index_t i = 0; i < a.nrows; ++i) {
        for (index_t p = a.row_ptr[i]; p < a.row_ptr[i + 1]; ++p) {
            const index_t pos = cursor[a.col_idx[p]]++;
            t.col_idx[pos] = i;
            t.values[pos] = a.values[p];
        }
    }
    // Rows of the transpose come out sorted because source rows are scanned
    // in increasing order.
    return t;
}

/// Same sparsity structure, every stored value set to 1.0.
inline CsrMatrix binarize(const CsrMatrix& a) {
    CsrMatrix b = a;
    std::fill(b.values.begin(), b.values.end(), 1.0);
    return b;
}

/// Symmetric permutation: result[inv[i]][inv[j]] = a[i][j]. Requires a square
/// matrix and a permutation of matching size.
inline CsrMatrix permute_symmetric(const CsrMatrix& a, const Permutation& p) {
    detail::require(a.nrows == a.ncols, "permute_symmetric: matrix must be square");
    detail::require(p.size == a.nrows, "permute_symmetric: permutation size mismatch");
    CsrMatrix r;
    r.nrows = a.nrows;
    r.ncols = a.ncols;
    r.row_ptr.assign(static_cast<std::size_t>(a.nrows) + 1, 0);
    r.col_idx.resize(a.col_idx.size());
    r.values.resize(a.values.size());
    for (index_t ni = 0; ni < r.nrows; ++ni) r.row_ptr[ni + 1] = a.row_nnz(p.perm[ni]);
    std::partial_sum(r.row_ptr.begin(), r.row_ptr.end(), r.row_ptr.begin());
    std::vector<std::pair<index_t, value_t>> scratch;
    for (index_t ni = 0; ni < r.nrows; ++ni) {
        const index_t oi = p.perm[ni];
        scratch.clear();
        for (index_t q = a.row_ptr[oi]; q < a.row_ptr[oi + 1]; ++q)
            scratch.emplace_back(p.inv[a.col_idx[q]], a.values[q]);
        std::sort(scratch.begin(), scratch.end());
        index_t pos = r.row_ptr[ni];
        for (const auto& [c, v] : scratch) {
            r.col_idx[pos] = c;
            r.values[pos] = v;
            ++pos;
        }
    }
    return r;
}

/// Row permutation only: row inv[i] of the result is row i of a.
inline CsrMatrix permute_rows(const CsrMatrix& a, const Permutation& p) {
    detail::require(p.size == a.nrows, "permute_rows: permutation size mismatch");
    CsrMatrix r;
    r.nrows = a.nrows;
    r.ncols = a.ncols;
    r.row_ptr.assign(static_cast<std::size_t>(a.nrows) + 1, 0);
    r.col_idx.resize(a.col_idx.size());
    r.values.resize(a.values.size());
    for (index_t ni = 0; ni < r.nrows; ++ni) r.row_ptr[ni + 1] = a.row_nnz(p.perm[ni]);
    std::partial_sum(r.row_ptr.begin(), r.row_ptr.end(), r.row_ptr.begin());
    for (index_t ni = 0; ni < r.nrows; ++ni) {
        const index_t oi = p.perm[ni];
        std::copy(a.col_idx.begin() + a.row_ptr[oi], a.col_idx.begin() + a.row_ptr[oi + 1],
                  r.col_idx.begin() + r.row_ptr[ni]);
        std::copy(a.values.begin() + a.row_ptr[oi], a.values.begin() + a.row_ptr[oi + 1],
                  r.values.begin() + r.row_ptr[ni]);
    }
    return r;
}

/// True iff same shape, same sparsity pattern and values equal within
/// absolute tolerance tol.
inline bool csr_equal_canonical(const CsrMatrix& a, const CsrMatrix& b, value_t tol) {
    if (a.nrows != b.nrows || a.ncols != b.ncols) return false;
    if (a.row_ptr != b.row_ptr || a.col_idx != b.col_idx) return false;
    for (std::size_t k = 0; k < a.values.size(); ++k)
        if (std::abs(a.values[k] - b.values[k]) > tol) return false;
    return true;
}

/// Locates the first difference between two matrices for diagnostics.
/// Returns false when the matrices are canonically equal within tol.
struct CsrMismatch {
    index_t row = -1;
    index_t col = -1;
    value_t lhs = 0.0;
    value_t rhs = 0.0;
    std::string what;
};

inline bool csr_first_mismatch(const CsrMatrix& a, const CsrMatrix& b, value_t tol,
                               CsrMismatch& out) {
    if (a.nrows != b.nrows || a.ncols != b.ncols) {
        out.what = "shape mismatch";
        return true;
    }
    for (index_t i = 0; i < a.nrows; ++i) {
        const auto ca = a.row_cols(i), cb = b.row_cols(i);
        const auto va = a.row_vals(i), vb = b.row_vals(i);
        const std::size_t n = std::min(ca.size(), cb.size());
        for (std::size_t k = 0; k < n; ++k) {
            if (ca[k] != cb[k]) {
                out = {i, ca[k], 0.0, 0.0, "structure mismatch"};
                return true;
            }
            if (std::abs(va[k] - vb[k]) > tol) {
                out = {i, ca[k], va[k], vb[k], "value mismatch"};
                return true;
            }
        }
        if (ca.size() != cb.size()) {
            out = {i, -1, 0.0, 0.0, "row nnz mismatch"};
            return true;
        }
    }
    return false;
}

} // namespace cspgemm
