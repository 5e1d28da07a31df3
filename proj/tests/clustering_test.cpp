#include "test_support.hpp"

#include <catch_amalgamated.hpp>

using namespace cspgemm;

namespace {

// Six rows whose representative-similarity sequence under the forward scan
// is 0.5, 0.5, 0.0, 0.5, 0.25.
CsrMatrix walkthrough_matrix() {
    return testsup::csr_from_rows(14, {{0, 1},
                                       {0, 1, 2, 3},
                                       {0, 1, 4, 5},
                                       {6, 7},
                                       {6, 7, 8, 9},
                                       {6, 10, 11}});
}

std::vector<index_t> cluster_sizes(const ClusterAssignment& asg) {
    std::vector<index_t> s;
    for (const auto& c : asg.clusters) s.push_back(static_cast<index_t>(c.size()));
    return s;
}

} // namespace

TEST_CASE("cluster params default to the experimental thresholds") {
    const ClusterParams p;
    CHECK(p.jacc_th == 0.3);
    CHECK(p.max_cluster_th == 8);
    CHECK(p.fixed_len == 4);
}

TEST_CASE("fixed-length clustering splits consecutive rows") {
    const ClusterAssignment asg = fixed_length_clusters(6, 3);
    REQUIRE(asg.clusters.size() == 2);
    CHECK(asg.clusters[0] == std::vector<index_t>{0, 1, 2});
    CHECK(asg.clusters[1] == std::vector<index_t>{3, 4, 5});
}

TEST_CASE("fixed-length remainder cluster is shorter") {
    const ClusterAssignment asg = fixed_length_clusters(7, 3);
    REQUIRE(asg.clusters.size() == 3);
    CHECK(asg.clusters[2] == std::vector<index_t>{6});
    asg.validate(7);
}

TEST_CASE("fixed-length with k=1 degenerates to singletons") {
    const ClusterAssignment asg = fixed_length_clusters(5, 1);
    CHECK(asg.clusters.size() == 5);
    CHECK_THROWS_AS(fixed_length_clusters(5, 0), contract_error);
}

TEST_CASE("variable-length reproduces the similarity-sequence walkthrough") {
    const CsrMatrix a = walkthrough_matrix();
    // Check the intended representative similarities first.
    CHECK(jaccard_similarity(a, 0, 1) == 0.5);
    CHECK(jaccard_similarity(a, 0, 2) == 0.5);
    CHECK(jaccard_similarity(a, 0, 3) == 0.0);
    CHECK(jaccard_similarity(a, 3, 4) == 0.5);
    CHECK(jaccard_similarity(a, 3, 5) == 0.25);

    const ClusterAssignment asg = variable_length_clusters(a, {});
    REQUIRE(asg.clusters.size() == 3);
    CHECK(asg.clusters[0] == std::vector<index_t>{0, 1, 2});
    CHECK(asg.clusters[1] == std::vector<index_t>{3, 4});
    CHECK(asg.clusters[2] == std::vector<index_t>{5});
}

TEST_CASE("variable-length on a diagonal matrix gives singletons") {
    const ClusterAssignment asg = variable_length_clusters(testsup::identity_csr(7), {});
    CHECK(asg.clusters.size() == 7);
}

TEST_CASE("variable-length caps cluster size at the threshold") {
    const CsrMatrix a = testsup::grouped_identical_rows(1, 20, 4);
    const ClusterAssignment asg = variable_length_clusters(a, {});
    CHECK(cluster_sizes(asg) == std::vector<index_t>{8, 8, 4});
}

TEST_CASE("variable-length clusters are contiguous and similarity-admitted") {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const CsrMatrix a = testsup::random_csr(50, 20, 0.25, seed);
        const ClusterParams params;
        const ClusterAssignment asg = variable_length_clusters(a, params);
        asg.validate(a.nrows);
        index_t next = 0;
        for (const auto& c : asg.clusters) {
            CHECK(static_cast<index_t>(c.size()) <= params.max_cluster_th);
            const index_t rep = c.front();
            CHECK(rep == next); // contiguous ranges in row order
            for (index_t member : c) {
                CHECK(member == next++);
                if (member != rep)
                    CHECK(jaccard_similarity(a, rep, member) >= params.jacc_th);
            }
        }
        CHECK(next == a.nrows);
    }
}

TEST_CASE("hierarchical on the identity matrix gives singletons") {
    const ClusterAssignment asg = hierarchical_clusters(testsup::identity_csr(6), {});
    CHECK(asg.clusters.size() == 6);
    asg.validate(6);
}

TEST_CASE("hierarchical pairs non-adjacent identical rows") {
    // Rows 0 and 2 identical on {0,1,2}; row 1 alone on {5}.
    const CsrMatrix a = testsup::csr_from_rows(6, {{0, 1, 2}, {5}, {0, 1, 2}});
    const ClusterAssignment asg = hierarchical_clusters(a, {});
    REQUIRE(asg.clusters.size() == 2);
    CHECK(asg.clusters[0] == std::vector<index_t>{0, 2});
    CHECK(asg.clusters[1] == std::vector<index_t>{1});
}

TEST_CASE("hierarchical respects the size cap on ten identical rows") {
    const CsrMatrix a = testsup::grouped_identical_rows(1, 10, 5);
    const ClusterAssignment asg = hierarchical_clusters(a, {});
    asg.validate(10);
    for (const auto& c : asg.clusters) CHECK(c.size() <= 8);
    // One full cluster plus remainder. Rows 8 and 9 stay single: top-7
    // truncation leaves the pair {8,9} out of the candidate set.
    CHECK(cluster_sizes(asg) == std::vector<index_t>{8, 1, 1});
    CHECK(asg.clusters[0] == std::vector<index_t>{0, 1, 2, 3, 4, 5, 6, 7});
}

TEST_CASE("hierarchical reproduces disjoint identical groups exactly") {
    const CsrMatrix a = testsup::grouped_identical_rows(5, 6, 3);
    const ClusterAssignment asg = hierarchical_clusters(a, {});
    REQUIRE(asg.clusters.size() == 5);
    for (index_t g = 0; g < 5; ++g) {
        REQUIRE(asg.clusters[g].size() == 6);
        for (index_t l = 0; l < 6; ++l) CHECK(asg.clusters[g][l] == g * 6 + l);
    }
}

TEST_CASE("hierarchical merge trace re-verifies against jaccard") {
    for (std::uint64_t seed = 0; seed < 8; ++seed) {
        const CsrMatrix a = testsup::random_csr(40, 18, 0.3, seed);
        const ClusterParams params;
        std::vector<MergeRecord> trace;
        const ClusterAssignment asg = hierarchical_clusters(a, params, 0, &trace);
        asg.validate(a.nrows);
        for (const auto& c : asg.clusters)
            CHECK(static_cast<index_t>(c.size()) <= params.max_cluster_th);
        for (const MergeRecord& mr : trace) {
            CHECK(mr.score >= params.jacc_th);
            CHECK(std::abs(mr.score - jaccard_similarity(a, mr.i, mr.j)) <= 1e-12);
        }
        // Every union step shows up in the trace: clusters - merges = rows.
        CHECK(asg.clusters.size() + trace.size() == static_cast<std::size_t>(a.nrows));
    }
}

TEST_CASE("clustering strategies are deterministic across runs and threads") {
    const CsrMatrix a = testsup::random_csr(60, 40, 0.2, 17);
    const auto h1 = hierarchical_clusters(a, {}, 1);
    const auto h4 = hierarchical_clusters(a, {}, 4);
    const auto h1b = hierarchical_clusters(a, {}, 1);
    CHECK(assignment_to_text(h1) == assignment_to_text(h4));
    CHECK(assignment_to_text(h1) == assignment_to_text(h1b));

    const auto v1 = variable_length_clusters(a, {});
    const auto v2 = variable_length_clusters(a, {});
    CHECK(assignment_to_text(v1) == assignment_to_text(v2));
}

TEST_CASE("assignment_to_permutation flattens cluster order") {
    CHECK(assignment_to_permutation(ClusterAssignment::singletons(4)).perm ==
          std::vector<index_t>{0, 1, 2, 3});

    ClusterAssignment asg;
    asg.clusters = {{0, 2}, {1}};
    CHECK(assignment_to_permutation(asg).perm == std::vector<index_t>{0, 2, 1});

    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const ClusterAssignment r = testsup::random_assignment(33, 6, seed);
        const Permutation p = assignment_to_permutation(r); // validates bijection
        CHECK(p.size == 33);
    }
}

TEST_CASE("every strategy yields a partition on random matrices") {
    for (std::uint64_t seed = 0; seed < 6; ++seed) {
        std::mt19937_64 rng(seed);
        const index_t n = static_cast<index_t>(1 + rng() % 70);
        const CsrMatrix a = testsup::random_csr(n, n, 0.15, seed + 3);
        fixed_length_clusters(n, 4).validate(n);
        variable_length_clusters(a, {}).validate(n);
        hierarchical_clusters(a, {}).validate(n);
    }
}
