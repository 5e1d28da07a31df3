#pragma once

#include "cspgemm/cluster_format.hpp"
#include "cspgemm/cluster_spgemm.hpp"
#include "cspgemm/clustering.hpp"
#include "cspgemm/csr.hpp"
#include "cspgemm/frontier.hpp"
#include "cspgemm/matrix_market.hpp"
#include "cspgemm/permutation.hpp"
#include "cspgemm/reorder.hpp"
#include "cspgemm/spgemm.hpp"
#include "cspgemm/types.hpp"

#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>
#include <sys/stat.h>
#include <vector>

namespace cspgemm {

enum class Workload { a_squared, tall_skinny };

inline std::string workload_name(Workload w) {
    return w == Workload::a_squared ? "a2" : "tallskinny";
}

/// Which clustering (if any) prepares the A operand.
struct ClusteringSpec {
    enum class Method { none, fixed, variable, hierarchical };
    Method method = Method::none;
    ClusterParams params;

    std::string name() const {
        switch (method) {
            case Method::none: return "none";
            case Method::fixed: return "fixed";
            case Method::variable: return "variable";
            default: return "hierarchical";
        }
    }
};

inline std::string reorder_name(const ReorderSpec& r) {
    switch (r.method) {
        case ReorderSpec::Method::original: return "original";
        case ReorderSpec::Method::random: return "random";
        case ReorderSpec::Method::degree: return "degree";
        case ReorderSpec::Method::rcm: return "rcm";
        default: return "file:" + r.path;
    }
}

/// One benchmark experiment: matrix, workload, preprocessing, measurement
/// parameters, and the CSV destination.
struct BenchConfig {
    std::string matrix_path;
    Workload workload = Workload::a_squared;
    index_t num_frontiers = 10; // tall-skinny: frontier matrices taken
    index_t frontier_batch = 64;
    std::uint64_t frontier_seed = 0;
    ReorderSpec reorder;
    ClusteringSpec clustering;
    index_t repetitions = 10;
    int threads = 0;
    bool warmup = false;
    std::string output_path;
};

/// Measurements for one configuration. The baseline is always row-wise
/// SpGEMM on the original matrix order; preprocessing time is split between
/// reordering and cluster construction so amortization can be attributed.
struct BenchReport {
    BenchConfig config;
    double reorder_seconds = 0.0;
    double cluster_build_seconds = 0.0;
    double baseline_mean_s = 0.0;
    double baseline_min_s = 0.0;
    double baseline_max_s = 0.0;
    double variant_mean_s = 0.0;
    double variant_min_s = 0.0;
    double variant_max_s = 0.0;
    double speedup_vs_baseline = 0.0;
    FootprintReport footprint;
    AccessStats baseline_access;
    AccessStats access;
    /// SpGEMM executions until preprocessing pays for itself; +inf when the
    /// variant is not faster.
    double amortization_iters = 0.0;
};

namespace detail {

inline double now_seconds() {
    return std::chrono::duration<double>(
               std::chrono::steady_clock::now().time_since_epoch())
        .count();
}

/// The fully prepared operand set for one configuration.
struct PreparedBench {
    CsrMatrix a_original;
    CsrMatrix a_variant; // after permutation
    Permutation perm;
    std::vector<CsrMatrix> b_original; // one per SpGEMM execution
    std::vector<CsrMatrix> b_variant;
    bool clustered = false;
    ClusterAssignment assignment;
    CsrClusterMatrix a_cluster;
    double reorder_seconds = 0.0;
    double cluster_build_seconds = 0.0;
};

inline Permutation make_permutation(const ReorderSpec& spec, const CsrMatrix& a) {
    switch (spec.method) {
        case ReorderSpec::Method::original: return Permutation::identity(a.nrows);
        case ReorderSpec::Method::random: return reorder_random(a.nrows, spec.seed);
        case ReorderSpec::Method::degree: return reorder_degree(a);
        case ReorderSpec::Method::rcm: return reorder_rcm(a);
        default: return load_permutation(spec.path, a.nrows);
    }
}

inline PreparedBench prepare_bench(const BenchConfig& cfg) {
    PreparedBench p;
    p.a_original = coo_to_csr(load_matrix_market(cfg.matrix_path));
    require(p.a_original.nrows == p.a_original.ncols,
            "bench: both workloads require a square A matrix");

    double t0 = now_seconds();
    p.perm = make_permutation(cfg.reorder, p.a_original);
    p.reorder_seconds = now_seconds() - t0;

    // Both workloads permute A symmetrically so the product stays
    // well-defined; tall-skinny co-permutes B's rows by the same map.
    p.a_variant = permute_symmetric(p.a_original, p.perm);
    if (cfg.workload == Workload::a_squared) {
        p.b_original.push_back(p.a_original);
        p.b_variant.push_back(p.a_variant);
    } else {
        p.b_original =
            generate_frontiers(p.a_original, cfg.num_frontiers, cfg.frontier_batch,
                               cfg.frontier_seed);
        for (const CsrMatrix& f : p.b_original)
            p.b_variant.push_back(permute_rows(f, p.perm));
    }

    if (cfg.clustering.method != ClusteringSpec::Method::none) {
        p.clustered = true;
        t0 = now_seconds();
        switch (cfg.clustering.method) {
            case ClusteringSpec::Method::fixed:
                p.assignment =
                    fixed_length_clusters(p.a_variant.nrows, cfg.clustering.params.fixed_len);
                break;
            case ClusteringSpec::Method::variable:
                p.assignment = variable_length_clusters(p.a_variant, cfg.clustering.params);
                break;
            default:
                p.assignment =
                    hierarchical_clusters(p.a_variant, cfg.clustering.params, cfg.threads);
                break;
        }
        p.a_cluster = build_csr_cluster(p.a_variant, p.assignment);
        p.cluster_build_seconds = now_seconds() - t0;
    }
    return p;
}

// One timed SpGEMM execution over every B operand of the workload.
inline double time_rowwise(const CsrMatrix& a, const std::vector<CsrMatrix>& bs, int threads) {
    const double t0 = now_seconds();
    for (const CsrMatrix& b : bs) {
        CsrMatrix c = spgemm_rowwise(a, b, threads);
        (void)c;
    }
    return now_seconds() - t0;
}

inline double time_clusterwise(const CsrClusterMatrix& a, const std::vector<CsrMatrix>& bs,
                               int threads) {
    const double t0 = now_seconds();
    for (const CsrMatrix& b : bs) {
        CsrClusterMatrix c = spgemm_clusterwise(a, b, threads);
        (void)c;
    }
    return now_seconds() - t0;
}

struct TimingSummary {
    double mean = 0.0, min = 0.0, max = 0.0;
};

inline TimingSummary summarize(const std::vector<double>& samples) {
    TimingSummary s;
    s.min = std::numeric_limits<double>::infinity();
    for (double v : samples) {
        s.mean += v;
        s.min = std::min(s.min, v);
        s.max = std::max(s.max, v);
    }
    s.mean /= static_cast<double>(samples.size());
    return s;
}

} // namespace detail

/// Runs the configured experiment: baseline (row-wise, original order) and
/// variant, `repetitions` times each, interleaved. Timing covers the
/// symbolic+numeric kernel only; I/O and preprocessing are excluded and
/// reported separately. Appends one CSV row when output_path is set.
inline BenchReport run_bench(const BenchConfig& cfg);

/// Runs the configured pipeline once and checks the variant's output against
/// the row-wise result on the original order, transported through the
/// applied permutation. Failures carry the first mismatch coordinates.
struct VerifyReport {
    bool pass = true;
    std::string message = "ok";
};

inline VerifyReport verify_mode(const BenchConfig& cfg) try {
    detail::PreparedBench p = detail::prepare_bench(cfg);
    for (std::size_t t = 0; t < p.b_original.size(); ++t) {
        const CsrMatrix reference = spgemm_rowwise(p.a_original, p.b_original[t], cfg.threads);
        const CsrMatrix transported = cfg.workload == Workload::a_squared
                                          ? permute_symmetric(reference, p.perm)
                                          : permute_rows(reference, p.perm);
        const CsrMatrix actual =
            p.clustered ? cluster_to_csr(spgemm_clusterwise(p.a_cluster, p.b_variant[t],
                                                            cfg.threads))
                        : spgemm_rowwise(p.a_variant, p.b_variant[t], cfg.threads);
        CsrMismatch mm;
        if (csr_first_mismatch(actual, transported, 1e-9, mm)) {
            std::ostringstream msg;
            msg << "mismatch";
            if (p.b_original.size() > 1) msg << " at frontier " << t;
            msg << ": " << mm.what << " at (" << mm.row << ", " << mm.col << ")";
            if (mm.what == "value mismatch")
                msg << " got " << mm.lhs << " want " << mm.rhs;
            return {false, msg.str()};
        }
    }
    return {true, "ok"};
} catch (const std::exception& e) {
    return {false, e.what()};
}

// ---------------------------------------------------------------------------
// CSV report format, schema version 1. One header row, one data row per
// experiment; doubles are printed with 17 significant digits so parsing a
// file reproduces the report exactly.
// ---------------------------------------------------------------------------

inline const char* bench_csv_header() {
    return "schema,matrix,workload,reorder,reorder_seed,cluster,jacc_th,max_cluster,fixed_len,"
           "num_frontiers,frontier_batch,frontier_seed,reps,threads,warmup,"
           "reorder_seconds,cluster_build_seconds,"
           "baseline_mean_s,baseline_min_s,baseline_max_s,"
           "variant_mean_s,variant_min_s,variant_max_s,speedup_vs_baseline,"
           "csr_bytes,cluster_bytes,footprint_ratio,"
           "baseline_b_row_loads,b_row_loads,a_inner_iters,placeholder_skips,"
           "amortization_iters";
}

inline constexpr int kBenchCsvSchema = 1;

inline std::string bench_csv_row(const BenchReport& r) {
    // Shortest form that parses back to the identical double.
    const auto fmt = [](double v) {
        char num[64];
        const auto res = std::to_chars(num, num + sizeof(num), v);
        return std::string(num, res.ptr);
    };
    std::ostringstream out;
    out << kBenchCsvSchema << ',' << r.config.matrix_path << ','
        << workload_name(r.config.workload) << ',' << reorder_name(r.config.reorder) << ','
        << r.config.reorder.seed << ',' << r.config.clustering.name() << ','
        << fmt(r.config.clustering.params.jacc_th) << ','
        << r.config.clustering.params.max_cluster_th << ','
        << r.config.clustering.params.fixed_len << ',' << r.config.num_frontiers << ','
        << r.config.frontier_batch << ',' << r.config.frontier_seed << ','
        << r.config.repetitions << ',' << r.config.threads << ','
        << (r.config.warmup ? 1 : 0) << ',' << fmt(r.reorder_seconds) << ','
        << fmt(r.cluster_build_seconds) << ',' << fmt(r.baseline_mean_s) << ','
        << fmt(r.baseline_min_s) << ',' << fmt(r.baseline_max_s) << ','
        << fmt(r.variant_mean_s) << ',' << fmt(r.variant_min_s) << ',' << fmt(r.variant_max_s)
        << ',' << fmt(r.speedup_vs_baseline) << ',' << r.footprint.csr_bytes << ','
        << r.footprint.cluster_bytes << ',' << fmt(r.footprint.ratio) << ','
        << r.baseline_access.b_row_loads << ',' << r.access.b_row_loads << ','
        << r.access.a_inner_iters << ',' << r.access.placeholder_skips << ','
        << fmt(r.amortization_iters);
    return out.str();
}

inline void append_bench_csv(const BenchReport& r, const std::string& path) {
    struct stat st {};
    const bool need_header = stat(path.c_str(), &st) != 0 || st.st_size == 0;
    std::ofstream out(path, std::ios::app);
    if (!out) throw io_error("cannot open '" + path + "' for writing");
    if (need_header) out << bench_csv_header() << '\n';
    out << bench_csv_row(r) << '\n';
    if (!out) throw io_error("write failed for '" + path + "'");
}

/// Parses a version-1 report file back into BenchReports.
inline std::vector<BenchReport> parse_bench_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw io_error("cannot open '" + path + "'");
    std::string line;
    if (!std::getline(in, line)) throw io_error(path + ": empty report file");
    if (line != bench_csv_header())
        throw io_error(path + ": unrecognized report header (schema mismatch)");

    std::vector<BenchReport> out;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<std::string> f;
        std::size_t start = 0;
        while (true) {
            const std::size_t pos = line.find(',', start);
            if (pos == std::string::npos) {
                f.push_back(line.substr(start));
                break;
            }
            f.push_back(line.substr(start, pos - start));
            start = pos + 1;
        }
        if (f.size() != 32)
            throw io_error(path + ": malformed row (expected 32 fields, got " +
                           std::to_string(f.size()) + ")");
        if (std::stoi(f[0]) != kBenchCsvSchema)
            throw io_error(path + ": unsupported schema version " + f[0]);

        BenchReport r;
        r.config.matrix_path = f[1];
        r.config.workload = f[2] == "a2" ? Workload::a_squared : Workload::tall_skinny;
        const std::string& rn = f[3];
        if (rn == "original") r.config.reorder.method = ReorderSpec::Method::original;
        else if (rn == "random") r.config.reorder.method = ReorderSpec::Method::random;
        else if (rn == "degree") r.config.reorder.method = ReorderSpec::Method::degree;
        else if (rn == "rcm") r.config.reorder.method = ReorderSpec::Method::rcm;
        else {
            r.config.reorder.method = ReorderSpec::Method::file;
            r.config.reorder.path = rn.substr(rn.find(':') + 1);
        }
        r.config.reorder.seed = std::stoull(f[4]);
        const std::string& cn = f[5];
        if (cn == "none") r.config.clustering.method = ClusteringSpec::Method::none;
        else if (cn == "fixed") r.config.clustering.method = ClusteringSpec::Method::fixed;
        else if (cn == "variable") r.config.clustering.method = ClusteringSpec::Method::variable;
        else r.config.clustering.method = ClusteringSpec::Method::hierarchical;
        r.config.clustering.params.jacc_th = std::stod(f[6]);
        r.config.clustering.params.max_cluster_th = std::stoi(f[7]);
        r.config.clustering.params.fixed_len = std::stoi(f[8]);
        r.config.num_frontiers = std::stoi(f[9]);
        r.config.frontier_batch = std::stoi(f[10]);
        r.config.frontier_seed = std::stoull(f[11]);
        r.config.repetitions = std::stoi(f[12]);
        r.config.threads = std::stoi(f[13]);
        r.config.warmup = f[14] == "1";
        r.reorder_seconds = std::stod(f[15]);
        r.cluster_build_seconds = std::stod(f[16]);
        r.baseline_mean_s = std::stod(f[17]);
        r.baseline_min_s = std::stod(f[18]);
        r.baseline_max_s = std::stod(f[19]);
        r.variant_mean_s = std::stod(f[20]);
        r.variant_min_s = std::stod(f[21]);
        r.variant_max_s = std::stod(f[22]);
        r.speedup_vs_baseline = std::stod(f[23]);
        r.footprint.csr_bytes = std::stoull(f[24]);
        r.footprint.cluster_bytes = std::stoull(f[25]);
        r.footprint.ratio = std::stod(f[26]);
        r.baseline_access.b_row_loads = std::stoull(f[27]);
        r.access.b_row_loads = std::stoull(f[28]);
        r.access.a_inner_iters = std::stoull(f[29]);
        r.access.placeholder_skips = std::stoull(f[30]);
        r.amortization_iters = std::stod(f[31]);
        out.push_back(std::move(r));
    }
    return out;
}

inline BenchReport run_bench(const BenchConfig& cfg) {
    detail::require(cfg.repetitions >= 1, "bench: repetitions must be >= 1");
    detail::PreparedBench p = detail::prepare_bench(cfg);

    BenchReport r;
    r.config = cfg;
    r.reorder_seconds = p.reorder_seconds;
    r.cluster_build_seconds = p.cluster_build_seconds;

    std::vector<double> baseline_t, variant_t;
    const index_t total = cfg.repetitions + (cfg.warmup ? 1 : 0);
    for (index_t rep = 0; rep < total; ++rep) {
        const double tb = detail::time_rowwise(p.a_original, p.b_original, cfg.threads);
        const double tv = p.clustered
                              ? detail::time_clusterwise(p.a_cluster, p.b_variant, cfg.threads)
                              : detail::time_rowwise(p.a_variant, p.b_variant, cfg.threads);
        if (cfg.warmup && rep == 0) continue;
        baseline_t.push_back(tb);
        variant_t.push_back(tv);
    }
    const detail::TimingSummary bs = detail::summarize(baseline_t);
    const detail::TimingSummary vs = detail::summarize(variant_t);
    r.baseline_mean_s = bs.mean;
    r.baseline_min_s = bs.min;
    r.baseline_max_s = bs.max;
    r.variant_mean_s = vs.mean;
    r.variant_min_s = vs.min;
    r.variant_max_s = vs.max;
    r.speedup_vs_baseline = bs.mean / vs.mean;

    for (const CsrMatrix& b : p.b_original) {
        const AccessStats s = rowwise_access_stats(p.a_original, b);
        r.baseline_access.b_row_loads += s.b_row_loads;
        r.baseline_access.a_inner_iters += s.a_inner_iters;
    }
    for (std::size_t t = 0; t < p.b_variant.size(); ++t) {
        AccessStats s;
        if (p.clustered)
            s = spgemm_clusterwise_instrumented(p.a_cluster, p.b_variant[t], cfg.threads).second;
        else
            s = rowwise_access_stats(p.a_variant, p.b_variant[t]);
        r.access.b_row_loads += s.b_row_loads;
        r.access.a_inner_iters += s.a_inner_iters;
        r.access.placeholder_skips += s.placeholder_skips;
    }

    if (p.clustered) {
        r.footprint = footprint(p.a_variant, p.a_cluster);
    } else {
        r.footprint.csr_bytes = csr_footprint_bytes(p.a_variant);
        r.footprint.cluster_bytes = r.footprint.csr_bytes;
        r.footprint.ratio = 1.0;
    }

    const double gain = r.baseline_mean_s - r.variant_mean_s;
    const double preprocess = r.reorder_seconds + r.cluster_build_seconds;
    r.amortization_iters =
        gain > 0.0 ? preprocess / gain : std::numeric_limits<double>::infinity();

    if (!cfg.output_path.empty()) append_bench_csv(r, cfg.output_path);
    return r;
}

} // namespace cspgemm
