#include "test_support.hpp"

#include <catch_amalgamated.hpp>

#include <cstdio>
#include <filesystem>
#include <set>

using namespace cspgemm;

namespace {

ClusterAssignment one_cluster(index_t nrows) {
    ClusterAssignment asg;
    std::vector<index_t> all(static_cast<std::size_t>(nrows));
    std::iota(all.begin(), all.end(), index_t{0});
    asg.clusters.push_back(std::move(all));
    return asg;
}

} // namespace

TEST_CASE("singleton clustering stores rows unchanged") {
    const CsrMatrix a = testsup::random_csr(18, 22, 0.2, 5, false);
    const CsrClusterMatrix m = build_csr_cluster(a, ClusterAssignment::singletons(18));
    CHECK(m.nclusters == 18);
    CHECK(m.placeholder_count() == 0);
    for (index_t c = 0; c < m.nclusters; ++c) {
        const auto want = a.row_cols(c);
        const auto got = m.cluster_col_span(c);
        CHECK(std::equal(want.begin(), want.end(), got.begin(), got.end()));
    }
    CHECK(csr_equal_canonical(cluster_to_csr(m), a, 0.0));
}

TEST_CASE("identical rows in one cluster need no placeholders") {
    const CsrMatrix a = testsup::csr_from_rows(9, {{1, 4, 7}, {1, 4, 7}});
    const CsrClusterMatrix m = build_csr_cluster(a, one_cluster(2));
    CHECK(m.cluster_cols(0) == 3);
    CHECK(m.placeholder_count() == 0);
    CHECK(csr_equal_canonical(cluster_to_csr(m), a, 0.0));
}

TEST_CASE("padding lands at the absent column of the middle row") {
    // Rows {0,5}, {0}, {0,5}: merged columns {0,5}, value span 2x3 = 6 with
    // exactly one placeholder at column 5, middle row.
    const CsrMatrix a = testsup::csr_from_rows(6, {{0, 5}, {0}, {0, 5}});
    const CsrClusterMatrix m = build_csr_cluster(a, one_cluster(3));
    REQUIRE(m.cluster_cols(0) == 2);
    REQUIRE(m.values.size() == 6);
    CHECK(m.placeholder_count() == 1);
    // Column-major within the cluster: slots [col0: r0 r1 r2][col5: r0 r1 r2].
    CHECK(m.valid_bit(0));
    CHECK(m.valid_bit(1));
    CHECK(m.valid_bit(2));
    CHECK(m.valid_bit(3));
    CHECK_FALSE(m.valid_bit(4));
    CHECK(m.values[4] == 0.0);
    CHECK(m.valid_bit(5));
}

TEST_CASE("round-trip over random matrices and partitions") {
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
        std::mt19937_64 rng(seed);
        const index_t n = static_cast<index_t>(1 + rng() % 60);
        const index_t c = static_cast<index_t>(1 + rng() % 40);
        const CsrMatrix a = testsup::random_csr(n, c, 0.15, seed + 7, false);
        const ClusterAssignment asg = testsup::random_assignment(n, 9, seed + 13);
        const CsrClusterMatrix m = build_csr_cluster(a, asg);
        CHECK(csr_equal_canonical(cluster_to_csr(m), a, 0.0));

        // Placeholder accounting: sum of K_c * ncols(c) minus nnz.
        std::size_t slots = 0;
        for (index_t cl = 0; cl < m.nclusters; ++cl)
            slots += static_cast<std::size_t>(m.cluster_sizes[cl]) * m.cluster_cols(cl);
        CHECK(m.values.size() == slots);
        CHECK(m.placeholder_count() == slots - static_cast<std::size_t>(a.nnz()));
    }
}

TEST_CASE("whole-matrix cluster round-trips") {
    const CsrMatrix a = testsup::random_csr(12, 12, 0.3, 3, false);
    const CsrClusterMatrix m = build_csr_cluster(a, one_cluster(12));
    CHECK(m.nclusters == 1);
    CHECK(csr_equal_canonical(cluster_to_csr(m), a, 0.0));
}

TEST_CASE("merged columns equal the set union of member rows") {
    const CsrMatrix a = testsup::random_csr(24, 17, 0.25, 19);
    const ClusterAssignment asg = testsup::random_assignment(24, 6, 23);
    const CsrClusterMatrix m = build_csr_cluster(a, asg);
    for (std::size_t c = 0; c < asg.clusters.size(); ++c) {
        std::set<index_t> uni;
        for (index_t r : asg.clusters[c]) {
            const auto cols = a.row_cols(r);
            uni.insert(cols.begin(), cols.end());
        }
        const auto got = m.cluster_col_span(static_cast<index_t>(c));
        CHECK(std::equal(uni.begin(), uni.end(), got.begin(), got.end()));
    }
}

TEST_CASE("invalid assignments are rejected") {
    const CsrMatrix a = testsup::random_csr(5, 5, 0.4, 2);
    ClusterAssignment missing;
    missing.clusters = {{0, 1}, {3, 4}}; // row 2 absent
    CHECK_THROWS_AS(build_csr_cluster(a, missing), contract_error);
    ClusterAssignment dup;
    dup.clusters = {{0, 1}, {1, 2, 3, 4}};
    CHECK_THROWS_AS(build_csr_cluster(a, dup), contract_error);
    ClusterAssignment unsorted;
    unsorted.clusters = {{1, 0}, {2, 3, 4}};
    CHECK_THROWS_AS(build_csr_cluster(a, unsorted), contract_error);
}

TEST_CASE("footprint of singleton clustering exceeds CSR") {
    const CsrMatrix a = testsup::random_csr(30, 30, 0.2, 29);
    const CsrClusterMatrix m = build_csr_cluster(a, ClusterAssignment::singletons(30));
    const FootprintReport r = footprint(a, m);
    CHECK(r.ratio > 1.0);
    CHECK(r.cluster_bytes > r.csr_bytes);
}

TEST_CASE("index sharing wins on grouped identical rows") {
    const CsrMatrix a = testsup::grouped_identical_rows(6, 8, 5);
    const CsrClusterMatrix m = build_csr_cluster(a, fixed_length_clusters(a.nrows, 8));
    const FootprintReport r = footprint(a, m);
    CHECK(m.placeholder_count() == 0);
    CHECK(r.cluster_bytes < r.csr_bytes);
    CHECK(r.ratio < 1.0);
}

TEST_CASE("byte accounting matches the closed form") {
    const CsrMatrix a = testsup::identity_csr(16);
    const CsrClusterMatrix m = build_csr_cluster(a, fixed_length_clusters(16, 4));
    // Diagonal matrix, clusters of 4: placeholders are 3/4 of value slots.
    CHECK(m.values.size() == 64);
    CHECK(m.placeholder_count() == 48);

    const FootprintReport r = footprint(a, m);
    const std::size_t csr_expected = (16 + 1) * 4 + 16 * 4 + 16 * 8;
    CHECK(r.csr_bytes == csr_expected);
    const std::size_t cluster_expected = 4 * 4      // cluster_sizes
                                         + 5 * 4    // cluster_col_ptr
                                         + 16 * 4   // col_idx
                                         + 5 * 4    // value_ptr
                                         + 64 * 8   // values
                                         + 8        // valid mask (64 bits)
                                         + 16 * 4;  // row_map
    CHECK(r.cluster_bytes == cluster_expected);
    REQUIRE(r.fixed_layout_bytes.has_value());
    CHECK(*r.fixed_layout_bytes == cluster_expected - 4 * 4 - 5 * 4);

    // 8-byte index accounting scales only the index arrays.
    const FootprintReport r8 = footprint(a, m, 8);
    CHECK(r8.csr_bytes == (16 + 1) * 8 + 16 * 8 + 16 * 8);
}

TEST_CASE("binary dump restores the same matrix") {
    const CsrMatrix a = testsup::random_csr(40, 33, 0.18, 77, false);
    const ClusterAssignment asg = testsup::random_assignment(40, 7, 78);
    const CsrClusterMatrix m = build_csr_cluster(a, asg);
    const auto path = (std::filesystem::temp_directory_path() / "cspgemm_cluster.bin").string();
    dump_csr_cluster(m, path);
    const CsrClusterMatrix back = restore_csr_cluster(path);
    CHECK(back.nclusters == m.nclusters);
    CHECK(back.cluster_sizes == m.cluster_sizes);
    CHECK(back.cluster_col_ptr == m.cluster_col_ptr);
    CHECK(back.col_idx == m.col_idx);
    CHECK(back.value_ptr == m.value_ptr);
    CHECK(back.values == m.values);
    CHECK(back.valid == m.valid);
    CHECK(back.row_map == m.row_map);
    CHECK(csr_equal_canonical(cluster_to_csr(back), a, 0.0));
    std::remove(path.c_str());

    CHECK_THROWS_AS(restore_csr_cluster("/nonexistent/cluster.bin"), io_error);
}

TEST_CASE("assignment text round-trips") {
    const ClusterAssignment asg = testsup::random_assignment(25, 5, 91);
    const ClusterAssignment back = assignment_from_text(assignment_to_text(asg));
    REQUIRE(back.clusters.size() == asg.clusters.size());
    for (std::size_t c = 0; c < asg.clusters.size(); ++c)
        CHECK(back.clusters[c] == asg.clusters[c]);
    back.validate(25);
}
