#pragma once

// Shared test utilities: independent dense oracles and seeded random
// instance generators. Everything here works on dense row-major buffers and
// never calls into the sparse kernels it is used to check.

#include "cspgemm/cspgemm.hpp"

#include <algorithm>
#include <numeric>
#include <random>
#include <set>
#include <vector>

namespace testsup {

using cspgemm::CooMatrix;
using cspgemm::CsrMatrix;
using cspgemm::Permutation;
using cspgemm::index_t;
using cspgemm::value_t;

// ---------------------------------------------------------------------------
// Dense oracles
// ---------------------------------------------------------------------------

struct Dense {
    index_t nrows = 0;
    index_t ncols = 0;
    std::vector<value_t> v; // row-major

    value_t& at(index_t i, index_t j) { return v[static_cast<std::size_t>(i) * ncols + j]; }
    value_t at(index_t i, index_t j) const {
        return v[static_cast<std::size_t>(i) * ncols + j];
    }
};

inline Dense to_dense(const CsrMatrix& a) {
    Dense d{a.nrows, a.ncols, std::vector<value_t>(
                                  static_cast<std::size_t>(a.nrows) * a.ncols, 0.0)};
    for (index_t i = 0; i < a.nrows; ++i)
        for (index_t p = a.row_ptr[i]; p < a.row_ptr[i + 1]; ++p)
            d.at(i, a.col_idx[p]) += a.values[p];
    return d;
}

inline Dense dense_from_coo(const CooMatrix& m) {
    Dense d{m.nrows, m.ncols,
            std::vector<value_t>(static_cast<std::size_t>(m.nrows) * m.ncols, 0.0)};
    for (const auto& e : m.entries) d.at(e.row, e.col) += e.value;
    return d;
}

// Triple-loop product, the brute-force reference for every SpGEMM kernel.
inline Dense dense_multiply(const Dense& a, const Dense& b) {
    Dense c{a.nrows, b.ncols,
            std::vector<value_t>(static_cast<std::size_t>(a.nrows) * b.ncols, 0.0)};
    for (index_t i = 0; i < a.nrows; ++i)
        for (index_t k = 0; k < a.ncols; ++k) {
            const value_t av = a.at(i, k);
            if (av == 0.0) continue;
            for (index_t j = 0; j < b.ncols; ++j) c.at(i, j) += av * b.at(k, j);
        }
    return c;
}

inline Dense dense_permute_symmetric(const Dense& a, const Permutation& p) {
    Dense r{a.nrows, a.ncols,
            std::vector<value_t>(static_cast<std::size_t>(a.nrows) * a.ncols, 0.0)};
    for (index_t i = 0; i < a.nrows; ++i)
        for (index_t j = 0; j < a.ncols; ++j) r.at(p.inv[i], p.inv[j]) = a.at(i, j);
    return r;
}

inline Dense dense_permute_rows(const Dense& a, const Permutation& p) {
    Dense r{a.nrows, a.ncols,
            std::vector<value_t>(static_cast<std::size_t>(a.nrows) * a.ncols, 0.0)};
    for (index_t i = 0; i < a.nrows; ++i)
        for (index_t j = 0; j < a.ncols; ++j) r.at(p.inv[i], j) = a.at(i, j);
    return r;
}

// Compares values only where either side is nonzero; `pattern` additionally
// demands that csr stores an entry wherever dense is nonzero.
inline bool dense_matches_csr(const Dense& d, const CsrMatrix& a, value_t tol) {
    if (d.nrows != a.nrows || d.ncols != a.ncols) return false;
    Dense got = to_dense(a);
    for (std::size_t k = 0; k < d.v.size(); ++k)
        if (std::abs(d.v[k] - got.v[k]) > tol) return false;
    return true;
}

// Set-based Jaccard reference.
inline value_t jaccard_oracle(const CsrMatrix& a, index_t i, index_t j) {
    const auto ri = a.row_cols(i);
    const auto rj = a.row_cols(j);
    std::set<index_t> si(ri.begin(), ri.end());
    std::set<index_t> sj(rj.begin(), rj.end());
    std::vector<index_t> inter, uni;
    std::set_intersection(si.begin(), si.end(), sj.begin(), sj.end(),
                          std::back_inserter(inter));
    std::set_union(si.begin(), si.end(), sj.begin(), sj.end(), std::back_inserter(uni));
    return uni.empty() ? 0.0 : static_cast<value_t>(inter.size()) / uni.size();
}

// ---------------------------------------------------------------------------
// Instance generators
// ---------------------------------------------------------------------------

inline CsrMatrix random_csr(index_t nrows, index_t ncols, double density, std::uint64_t seed,
                            bool nonnegative = true) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> coin(0.0, 1.0);
    std::uniform_real_distribution<double> val(nonnegative ? 0.1 : -4.0, 4.0);
    CooMatrix m;
    m.nrows = nrows;
    m.ncols = ncols;
    for (index_t i = 0; i < nrows; ++i)
        for (index_t j = 0; j < ncols; ++j)
            if (coin(rng) < density) m.entries.push_back({i, j, val(rng)});
    return coo_to_csr(m);
}

inline CsrMatrix identity_csr(index_t n) {
    CooMatrix m;
    m.nrows = n;
    m.ncols = n;
    for (index_t i = 0; i < n; ++i) m.entries.push_back({i, i, 1.0});
    return coo_to_csr(m);
}

// From explicit row column-sets, all values 1.0.
inline CsrMatrix csr_from_rows(index_t ncols, const std::vector<std::vector<index_t>>& rows) {
    CooMatrix m;
    m.nrows = static_cast<index_t>(rows.size());
    m.ncols = ncols;
    for (index_t i = 0; i < m.nrows; ++i)
        for (index_t c : rows[i]) m.entries.push_back({i, c, 1.0});
    return coo_to_csr(m);
}

// G groups of K identical rows; group g occupies `row_nnz` columns starting
// at g*row_nnz, so groups are structurally disjoint. Square by construction.
inline CsrMatrix grouped_identical_rows(index_t groups, index_t k, index_t row_nnz) {
    CooMatrix m;
    m.nrows = std::max<index_t>(groups * k, groups * row_nnz);
    m.ncols = m.nrows;
    for (index_t g = 0; g < groups; ++g)
        for (index_t l = 0; l < k; ++l)
            for (index_t c = 0; c < row_nnz; ++c)
                m.entries.push_back({g * k + l, g * row_nnz + c, 1.0});
    return coo_to_csr(m);
}

// Full-band symmetric matrix of the given bandwidth.
inline CsrMatrix banded_csr(index_t n, index_t band, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> val(0.5, 2.0);
    CooMatrix m;
    m.nrows = n;
    m.ncols = n;
    for (index_t i = 0; i < n; ++i)
        for (index_t j = std::max<index_t>(0, i - band); j <= std::min<index_t>(n - 1, i + band);
             ++j)
            m.entries.push_back({i, j, val(rng)});
    return coo_to_csr(m);
}

// Random valid cluster assignment: a seeded shuffle chopped into pieces of
// size 1..max_piece, members re-sorted ascending inside each piece.
inline cspgemm::ClusterAssignment random_assignment(index_t nrows, index_t max_piece,
                                                    std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::vector<index_t> rows(static_cast<std::size_t>(nrows));
    std::iota(rows.begin(), rows.end(), index_t{0});
    std::shuffle(rows.begin(), rows.end(), rng);
    cspgemm::ClusterAssignment asg;
    std::size_t pos = 0;
    std::uniform_int_distribution<index_t> piece(1, std::max<index_t>(1, max_piece));
    while (pos < rows.size()) {
        const std::size_t take =
            std::min<std::size_t>(static_cast<std::size_t>(piece(rng)), rows.size() - pos);
        std::vector<index_t> members(rows.begin() + pos, rows.begin() + pos + take);
        std::sort(members.begin(), members.end());
        asg.clusters.push_back(std::move(members));
        pos += take;
    }
    return asg;
}

} // namespace testsup
