#pragma once

#include "cspgemm/cluster_format.hpp"
#include "cspgemm/csr.hpp"
#include "cspgemm/permutation.hpp"
#include "cspgemm/spgemm.hpp"
#include "cspgemm/types.hpp"

#include <algorithm>
#include <cstdint>
#include <queue>
#include <unordered_set>
#include <vector>

namespace cspgemm {

/// Union-find with union by size and path compression. Ties on size are
/// resolved towards the smaller root index so merge results are
/// reproducible.
struct DisjointSet {
    std::vector<index_t> parent;
    std::vector<index_t> size;

    explicit DisjointSet(index_t n)
        : parent(static_cast<std::size_t>(n)), size(static_cast<std::size_t>(n), 1) {
        for (index_t i = 0; i < n; ++i) parent[i] = i;
    }

    index_t find(index_t x) {
        index_t root = x;
        while (parent[root] != root) root = parent[root];
        while (parent[x] != root) {
            const index_t next = parent[x];
            parent[x] = root;
            x = next;
        }
        return root;
    }

    /// Merges the sets of a and b. Returns the new root.
    index_t union_sets(index_t a, index_t b) {
        index_t ra = find(a), rb = find(b);
        if (ra == rb) return ra;
        if (size[ra] < size[rb] || (size[ra] == size[rb] && rb < ra)) std::swap(ra, rb);
        parent[rb] = ra;
        size[ra] += size[rb];
        return ra;
    }
};

/// Thresholds for the similarity-driven clustering strategies.
struct ClusterParams {
    value_t jacc_th = 0.3;
    index_t max_cluster_th = 8;
    index_t fixed_len = 4;
};

/// Groups k consecutive rows per cluster; the last cluster may be shorter.
inline ClusterAssignment fixed_length_clusters(index_t nrows, index_t k) {
    detail::require(k >= 1, "fixed_length_clusters: k must be >= 1");
    ClusterAssignment asg;
    for (index_t start = 0; start < nrows; start += k) {
        const index_t end = std::min<index_t>(start + k, nrows);
        std::vector<index_t> members(static_cast<std::size_t>(end - start));
        for (index_t i = start; i < end; ++i) members[i - start] = i;
        asg.clusters.push_back(std::move(members));
    }
    return asg;
}

/// Single forward scan: row 0 opens cluster 0 as its representative; each
/// subsequent row joins the current cluster iff its Jaccard similarity with
/// the representative is >= jacc_th and the cluster is not full, otherwise
/// it opens a new cluster and becomes the representative. Clusters are
/// contiguous row ranges.
inline ClusterAssignment variable_length_clusters(const CsrMatrix& a,
                                                  const ClusterParams& params = {}) {
    ClusterAssignment asg;
    if (a.nrows == 0) return asg;
    index_t rep = 0;
    asg.clusters.push_back({0});
    for (index_t i = 1; i < a.nrows; ++i) {
        auto& current = asg.clusters.back();
        const bool full = static_cast<index_t>(current.size()) >= params.max_cluster_th;
        if (!full && jaccard_similarity(a, rep, i) >= params.jacc_th) {
            current.push_back(i);
        } else {
            rep = i;
            asg.clusters.push_back({i});
        }
    }
    return asg;
}

/// One merge decision of the hierarchical pass: the two rows whose score
/// justified the union, and that score.
struct MergeRecord {
    index_t i;
    index_t j;
    value_t score;
};

/// Candidate pairs come from top-k rows of A*A^T (topk = max_cluster_th-1);
/// a max-heap greedily merges them through a union-find. When a popped
/// pair's endpoints are no longer roots, the pair is re-scored between the
/// two root rows and re-queued if still above threshold. Unions respect the
/// maximum cluster size. Cluster members are listed in ascending row order
/// and clusters are ordered by their smallest member.
inline ClusterAssignment hierarchical_clusters(const CsrMatrix& a,
                                               const ClusterParams& params = {},
                                               int num_threads = 0,
                                               std::vector<MergeRecord>* merge_trace = nullptr) {
    ClusterAssignment asg;
    if (a.nrows == 0) return asg;

    const CsrMatrix bin = binarize(a);
    const CsrMatrix bin_t = transpose(bin);
    const index_t topk = std::max<index_t>(params.max_cluster_th - 1, 1);
    const std::vector<CandidatePair> candidates =
        spgemm_topk(bin, bin_t, topk, params.jacc_th, num_threads);

    struct HeapEntry {
        value_t score;
        index_t i; // i < j
        index_t j;
    };
    const auto worse = [](const HeapEntry& x, const HeapEntry& y) {
        if (x.score != y.score) return x.score < y.score;
        if (x.i != y.i) return x.i > y.i;
        return x.j > y.j;
    };
    std::priority_queue<HeapEntry, std::vector<HeapEntry>, decltype(worse)> heap(worse);

    const auto pair_key = [](index_t lo, index_t hi) {
        return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(lo)) << 32) |
               static_cast<std::uint32_t>(hi);
    };
    std::unordered_set<std::uint64_t> known_pairs;
    known_pairs.reserve(candidates.size() * 2);

    for (const CandidatePair& cp : candidates) {
        const index_t lo = std::min(cp.i, cp.j);
        const index_t hi = std::max(cp.i, cp.j);
        heap.push({cp.score, lo, hi});
        known_pairs.insert(pair_key(lo, hi));
    }

    DisjointSet sets(a.nrows);
    while (!heap.empty()) {
        const HeapEntry top = heap.top();
        heap.pop();
        const index_t ri = sets.find(top.i);
        const index_t rj = sets.find(top.j);
        if (ri == rj) continue;
        if (ri == top.i && rj == top.j) {
            // Both endpoints still represent their sets: merge, capped.
            if (sets.size[ri] + sets.size[rj] <= params.max_cluster_th) {
                sets.union_sets(ri, rj);
                if (merge_trace) merge_trace->push_back({top.i, top.j, top.score});
            }
            continue;
        }
        // Re-score between the current root rows; queue if unseen and still
        // similar enough.
        const index_t lo = std::min(ri, rj);
        const index_t hi = std::max(ri, rj);
        if (known_pairs.insert(pair_key(lo, hi)).second) {
            const value_t score = jaccard_similarity(a, lo, hi);
            if (score >= params.jacc_th) heap.push({score, lo, hi});
        }
    }

    // Assemble clusters: members ascending, clusters ordered by smallest
    // member. A single ascending sweep gives both.
    std::vector<index_t> cluster_of(static_cast<std::size_t>(a.nrows), -1);
    for (index_t i = 0; i < a.nrows; ++i) {
        const index_t root = sets.find(i);
        if (cluster_of[root] == -1) {
            cluster_of[root] = static_cast<index_t>(asg.clusters.size());
            asg.clusters.emplace_back();
        }
        asg.clusters[cluster_of[root]].push_back(i);
    }
    return asg;
}

/// Permutation listing rows in cluster order: cluster 0's members first (in
/// stored order), then cluster 1's, and so on.
inline Permutation assignment_to_permutation(const ClusterAssignment& asg) {
    std::vector<index_t> perm;
    perm.reserve(static_cast<std::size_t>(asg.nrows()));
    for (const auto& c : asg.clusters) perm.insert(perm.end(), c.begin(), c.end());
    return Permutation::from_perm(std::move(perm));
}

} // namespace cspgemm
