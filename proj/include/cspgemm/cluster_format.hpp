#pragma once

#include "cspgemm/csr.hpp"
#include "cspgemm/permutation.hpp"
#include "cspgemm/types.hpp"

#include <algorithm>
#include <bit>
#include <cstddef>
#include <cstdint>
#include <fstream>
#include <numeric>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <vector>

namespace cspgemm {

/// An ordered partition of row indices into clusters. Produced by the
/// clustering strategies and consumed by build_csr_cluster.
struct ClusterAssignment {
    std::vector<std::vector<index_t>> clusters;

    index_t nrows() const {
        std::size_t n = 0;
        for (const auto& c : clusters) n += c.size();
        return static_cast<index_t>(n);
    }

    /// Checks that the clusters partition [0, nrows): non-empty clusters,
    /// strictly increasing members, every row covered exactly once.
    void validate(index_t nrows) const {
        std::vector<char> seen(static_cast<std::size_t>(nrows), 0);
        for (const auto& c : clusters) {
            detail::require(!c.empty(), "cluster assignment: empty cluster");
            for (std::size_t k = 0; k < c.size(); ++k) {
                detail::require(c[k] >= 0 && c[k] < nrows,
                                "cluster assignment: row index out of range");
                detail::require(!seen[c[k]], "cluster assignment: row assigned twice");
                seen[c[k]] = 1;
                if (k > 0)
                    detail::require(c[k - 1] < c[k],
                                    "cluster assignment: members must be strictly increasing");
            }
        }
        for (index_t i = 0; i < nrows; ++i)
            detail::require(seen[i], "cluster assignment: row " + std::to_string(i) +
                                         " not covered");
    }

    static ClusterAssignment singletons(index_t nrows) {
        ClusterAssignment asg;
        asg.clusters.reserve(static_cast<std::size_t>(nrows));
        for (index_t i = 0; i < nrows; ++i) asg.clusters.push_back({i});
        return asg;
    }
};

/// Text form: one line per cluster, space-separated original row indices.
inline std::string assignment_to_text(const ClusterAssignment& asg) {
    std::ostringstream out;
    for (const auto& c : asg.clusters) {
        for (std::size_t k = 0; k < c.size(); ++k) {
            if (k) out << ' ';
            out << c[k];
        }
        out << '\n';
    }
    return out.str();
}

inline ClusterAssignment assignment_from_text(const std::string& text) {
    ClusterAssignment asg;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream ls(line);
        std::vector<index_t> members;
        long long v;
        while (ls >> v) members.push_back(static_cast<index_t>(v));
        if (!members.empty()) asg.clusters.push_back(std::move(members));
    }
    return asg;
}

/// Row-clustered, column-merged storage. Each cluster stores the sorted
/// union of its member rows' columns once; values are laid out per cluster
/// with the K member values for one column contiguous (value slot for
/// column position p, member l is value_ptr[c] + p*K + l). Slots a member
/// row has no entry for hold 0.0 with the validity bit cleared.
struct CsrClusterMatrix {
    index_t nclusters = 0;
    index_t nrows = 0;
    index_t ncols = 0;
    std::vector<index_t> cluster_sizes;     // length nclusters
    std::vector<index_t> cluster_col_ptr;   // length nclusters+1, offsets into col_idx
    std::vector<index_t> col_idx;           // merged per-cluster sorted columns
    std::vector<index_t> value_ptr;         // length nclusters+1, offsets into values
    std::vector<value_t> values;            // placeholder-padded, per-column-major in cluster
    std::vector<std::uint64_t> valid;       // 1 bit per value slot
    std::vector<index_t> row_map;           // length nrows, members in cluster order

    index_t cluster_cols(index_t c) const { return cluster_col_ptr[c + 1] - cluster_col_ptr[c]; }

    std::span<const index_t> cluster_col_span(index_t c) const {
        return {col_idx.data() + cluster_col_ptr[c], static_cast<std::size_t>(cluster_cols(c))};
    }

    bool valid_bit(std::size_t slot) const {
        return (valid[slot >> 6] >> (slot & 63)) & 1u;
    }

    void set_valid_bit(std::size_t slot) { valid[slot >> 6] |= std::uint64_t{1} << (slot & 63); }

    std::size_t value_slots() const { return values.size(); }

    std::size_t placeholder_count() const {
        std::size_t set = 0;
        for (std::uint64_t w : valid) set += static_cast<std::size_t>(std::popcount(w));
        return values.size() - set;
    }
};

/// Builds the clustered format from a CSR matrix and a cluster assignment.
/// The merged column list of each cluster is the exact set union of its
/// member rows' columns.
inline CsrClusterMatrix build_csr_cluster(const CsrMatrix& a, const ClusterAssignment& asg) {
    asg.validate(a.nrows);

    CsrClusterMatrix m;
    m.nclusters = static_cast<index_t>(asg.clusters.size());
    m.nrows = a.nrows;
    m.ncols = a.ncols;
    m.cluster_sizes.reserve(asg.clusters.size());
    m.cluster_col_ptr.assign(1, 0);
    m.value_ptr.assign(1, 0);
    m.row_map.reserve(static_cast<std::size_t>(a.nrows));

    std::vector<index_t> merged;
    for (const auto& members : asg.clusters) {
        const index_t k = static_cast<index_t>(members.size());
        m.cluster_sizes.push_back(k);
        for (index_t r : members) m.row_map.push_back(r);

        merged.clear();
        for (index_t r : members) {
            const auto cols = a.row_cols(r);
            merged.insert(merged.end(), cols.begin(), cols.end());
        }
        std::sort(merged.begin(), merged.end());
        merged.erase(std::unique(merged.begin(), merged.end()), merged.end());

        m.col_idx.insert(m.col_idx.end(), merged.begin(), merged.end());
        m.cluster_col_ptr.push_back(static_cast<index_t>(m.col_idx.size()));
        m.value_ptr.push_back(m.value_ptr.back() +
                              k * static_cast<index_t>(merged.size()));
    }

    const std::size_t slots = static_cast<std::size_t>(m.value_ptr.back());
    m.values.assign(slots, 0.0);
    m.valid.assign((slots + 63) / 64, 0);

    // Fill member rows: both the merged list and each row are sorted, so a
    // single forward scan finds every column position.
    for (index_t c = 0; c < m.nclusters; ++c) {
        const index_t k = m.cluster_sizes[c];
        const auto ccols = m.cluster_col_span(c);
        const std::size_t vbase = static_cast<std::size_t>(m.value_ptr[c]);
        for (index_t l = 0; l < k; ++l) {
            const index_t row = asg.clusters[c][l];
            std::size_t p = 0;
            for (index_t q = a.row_ptr[row]; q < a.row_ptr[row + 1]; ++q) {
                const index_t col = a.col_idx[q];
                while (ccols[p] != col) ++p;
                const std::size_t slot = vbase + p * static_cast<std::size_t>(k) +
                                         static_cast<std::size_t>(l);
                m.values[slot] = a.values[q];
                m.set_valid_bit(slot);
            }
        }
    }
    return m;
}

/// Converts back to CSR over the original row indices, keeping exactly the
/// valid entries. Inverse of build_csr_cluster for any valid assignment.
inline CsrMatrix cluster_to_csr(const CsrClusterMatrix& m) {
    CsrMatrix a;
    a.nrows = m.nrows;
    a.ncols = m.ncols;
    a.row_ptr.assign(static_cast<std::size_t>(m.nrows) + 1, 0);

    std::size_t member_base = 0;
    for (index_t c = 0; c < m.nclusters; ++c) {
        const index_t k = m.cluster_sizes[c];
        const std::size_t vbase = static_cast<std::size_t>(m.value_ptr[c]);
        const index_t ncols_c = m.cluster_cols(c);
        for (index_t l = 0; l < k; ++l) {
            index_t cnt = 0;
            for (index_t p = 0; p < ncols_c; ++p)
                if (m.valid_bit(vbase + static_cast<std::size_t>(p) * k + l)) ++cnt;
            a.row_ptr[m.row_map[member_base + l] + 1] = cnt;
        }
        member_base += static_cast<std::size_t>(k);
    }
    std::partial_sum(a.row_ptr.begin(), a.row_ptr.end(), a.row_ptr.begin());
    a.col_idx.resize(static_cast<std::size_t>(a.row_ptr.back()));
    a.values.resize(static_cast<std::size_t>(a.row_ptr.back()));

    member_base = 0;
    for (index_t c = 0; c < m.nclusters; ++c) {
        const index_t k = m.cluster_sizes[c];
        const std::size_t vbase = static_cast<std::size_t>(m.value_ptr[c]);
        const auto ccols = m.cluster_col_span(c);
        for (index_t l = 0; l < k; ++l) {
            const index_t row = m.row_map[member_base + l];
            index_t pos = a.row_ptr[row];
            for (std::size_t p = 0; p < ccols.size(); ++p) {
                const std::size_t slot = vbase + p * static_cast<std::size_t>(k) +
                                         static_cast<std::size_t>(l);
                if (!m.valid_bit(slot)) continue;
                a.col_idx[pos] = ccols[p];
                a.values[pos] = m.values[slot];
                ++pos;
            }
        }
        member_base += static_cast<std::size_t>(k);
    }
    return a;
}

/// Byte accounting for a CSR matrix versus its clustered form. Counts are
/// exact sums of declared array lengths times element widths.
struct FootprintReport {
    std::size_t csr_bytes = 0;
    std::size_t cluster_bytes = 0;
    double ratio = 0.0;
    /// Byte count of the uniform-cluster-length layout (no cluster size
    /// array, value offsets derivable), present when all clusters share one
    /// size.
    std::optional<std::size_t> fixed_layout_bytes;
};

/// CSR storage cost: row pointer, column indices and values.
inline std::size_t csr_footprint_bytes(const CsrMatrix& a, std::size_t index_width = 4) {
    constexpr std::size_t value_width = 8;
    return (static_cast<std::size_t>(a.nrows) + 1) * index_width +
           a.col_idx.size() * index_width + a.values.size() * value_width;
}

/// index_width: bytes per index/offset element (4 by default, 8 for
/// matrices with >= 2^31 nonzeros).
inline FootprintReport footprint(const CsrMatrix& a, const CsrClusterMatrix& m,
                                 std::size_t index_width = 4) {
    constexpr std::size_t value_width = 8;
    FootprintReport r;
    r.csr_bytes = csr_footprint_bytes(a, index_width);

    const std::size_t mask_bytes = m.valid.size() * sizeof(std::uint64_t);
    r.cluster_bytes = m.cluster_sizes.size() * index_width +
                      m.cluster_col_ptr.size() * index_width + m.col_idx.size() * index_width +
                      m.value_ptr.size() * index_width + m.values.size() * value_width +
                      mask_bytes + m.row_map.size() * index_width;
    r.ratio = static_cast<double>(r.cluster_bytes) / static_cast<double>(r.csr_bytes);

    const bool uniform =
        m.nclusters > 0 &&
        std::all_of(m.cluster_sizes.begin(), m.cluster_sizes.end(),
                    [&](index_t s) { return s == m.cluster_sizes.front(); });
    if (uniform) {
        // Fixed-length layout drops cluster_sizes and value_ptr (value
        // offsets follow from the uniform size and the column pointer).
        r.fixed_layout_bytes = r.cluster_bytes - m.cluster_sizes.size() * index_width -
                               m.value_ptr.size() * index_width;
    }
    return r;
}

// ---------------------------------------------------------------------------
// Binary dump/restore. Little-endian; header (magic, version, nclusters,
// nrows, ncols, index width) followed by the arrays in declared order.
// ---------------------------------------------------------------------------

namespace detail {

constexpr std::uint32_t kClusterMagic = 0x43535243; // "CSRC"
constexpr std::uint32_t kClusterVersion = 1;

static_assert(std::endian::native == std::endian::little,
              "binary cluster dump assumes a little-endian host");

template <typename T>
void write_pod(std::ofstream& out, const T& v) {
    out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
void write_array(std::ofstream& out, const std::vector<T>& v) {
    out.write(reinterpret_cast<const char*>(v.data()),
              static_cast<std::streamsize>(v.size() * sizeof(T)));
}

template <typename T>
T read_pod(std::ifstream& in, const std::string& path) {
    T v{};
    in.read(reinterpret_cast<char*>(&v), sizeof(T));
    if (!in) throw io_error(path + ": truncated cluster dump");
    return v;
}

template <typename T>
void read_array(std::ifstream& in, std::vector<T>& v, std::size_t n, const std::string& path) {
    v.resize(n);
    in.read(reinterpret_cast<char*>(v.data()), static_cast<std::streamsize>(n * sizeof(T)));
    if (!in) throw io_error(path + ": truncated cluster dump");
}

} // namespace detail

inline void dump_csr_cluster(const CsrClusterMatrix& m, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw io_error("cannot open '" + path + "' for writing");
    detail::write_pod(out, detail::kClusterMagic);
    detail::write_pod(out, detail::kClusterVersion);
    detail::write_pod(out, m.nclusters);
    detail::write_pod(out, m.nrows);
    detail::write_pod(out, m.ncols);
    detail::write_pod(out, static_cast<std::uint32_t>(sizeof(index_t)));
    detail::write_array(out, m.cluster_sizes);
    detail::write_array(out, m.cluster_col_ptr);
    detail::write_array(out, m.col_idx);
    detail::write_array(out, m.value_ptr);
    detail::write_array(out, m.values);
    detail::write_array(out, m.valid);
    detail::write_array(out, m.row_map);
    if (!out) throw io_error("write failed for '" + path + "'");
}

inline CsrClusterMatrix restore_csr_cluster(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw io_error("cannot open '" + path + "'");
    if (detail::read_pod<std::uint32_t>(in, path) != detail::kClusterMagic)
        throw io_error(path + ": not a cluster dump (bad magic)");
    if (detail::read_pod<std::uint32_t>(in, path) != detail::kClusterVersion)
        throw io_error(path + ": unsupported cluster dump version");
    CsrClusterMatrix m;
    m.nclusters = detail::read_pod<index_t>(in, path);
    m.nrows = detail::read_pod<index_t>(in, path);
    m.ncols = detail::read_pod<index_t>(in, path);
    if (detail::read_pod<std::uint32_t>(in, path) != sizeof(index_t))
        throw io_error(path + ": index width mismatch");
    const std::size_t nc = static_cast<std::size_t>(m.nclusters);
    detail::read_array(in, m.cluster_sizes, nc, path);
    detail::read_array(in, m.cluster_col_ptr, nc + 1, path);
    detail::read_array(in, m.col_idx, static_cast<std::size_t>(m.cluster_col_ptr.back()), path);
    detail::read_array(in, m.value_ptr, nc + 1, path);
    const std::size_t slots = static_cast<std::size_t>(m.value_ptr.back());
    detail::read_array(in, m.values, slots, path);
    detail::read_array(in, m.valid, (slots + 63) / 64, path);
    detail::read_array(in, m.row_map, static_cast<std::size_t>(m.nrows), path);
    return m;
}

} // namespace cspgemm
