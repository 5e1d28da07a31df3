// Command-line driver: load a matrix, optionally reorder and cluster it,
// run SpGEMM workloads, and report timings, access counts and memory
// footprints as CSV.

#include "cspgemm/cspgemm.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <string>

namespace {

using namespace cspgemm;

ReorderSpec parse_reorder(const std::string& s, std::uint64_t seed) {
    ReorderSpec r;
    r.seed = seed;
    if (s == "original") {
        r.method = ReorderSpec::Method::original;
    } else if (s == "random") {
        r.method = ReorderSpec::Method::random;
    } else if (s == "degree") {
        r.method = ReorderSpec::Method::degree;
    } else if (s == "rcm") {
        r.method = ReorderSpec::Method::rcm;
    } else if (s.rfind("file:", 0) == 0) {
        r.method = ReorderSpec::Method::file;
        r.path = s.substr(5);
    } else {
        throw CLI::ValidationError("--reorder",
                                   "expected original|random|degree|rcm|file:PATH, got '" + s +
                                       "'");
    }
    return r;
}

ClusteringSpec parse_cluster(const std::string& s, const ClusterParams& params) {
    ClusteringSpec c;
    c.params = params;
    if (s == "none") {
        c.method = ClusteringSpec::Method::none;
    } else if (s == "variable") {
        c.method = ClusteringSpec::Method::variable;
    } else if (s == "hierarchical") {
        c.method = ClusteringSpec::Method::hierarchical;
    } else if (s.rfind("fixed", 0) == 0) {
        c.method = ClusteringSpec::Method::fixed;
        if (s.size() > 5) {
            if (s[5] != ':')
                throw CLI::ValidationError("--cluster", "expected fixed:K, got '" + s + "'");
            c.params.fixed_len = static_cast<index_t>(std::stoi(s.substr(6)));
            if (c.params.fixed_len < 1)
                throw CLI::ValidationError("--cluster", "fixed:K needs K >= 1");
        }
    } else {
        throw CLI::ValidationError(
            "--cluster", "expected none|fixed:K|variable|hierarchical, got '" + s + "'");
    }
    return c;
}

struct CommonArgs {
    std::string matrix;
    std::string workload = "a2";
    std::string reorder = "original";
    std::string cluster = "none";
    std::uint64_t seed = 0;
    double jacc_th = 0.3;
    index_t max_cluster = 8;
    index_t reps = 10;
    int threads = 0;
    index_t frontiers = 10;
    index_t batch = 64;
    bool warmup = false;
    std::string out;
};

void add_common_flags(CLI::App* cmd, CommonArgs& a, bool need_matrix = true) {
    auto* m = cmd->add_option("--matrix", a.matrix, "input Matrix Market file");
    if (need_matrix) m->required();
    cmd->add_option("--workload", a.workload, "a2 | tallskinny")
        ->check(CLI::IsMember({"a2", "tallskinny"}));
    cmd->add_option("--reorder", a.reorder, "original | random | degree | rcm | file:PATH");
    cmd->add_option("--seed", a.seed, "seed for random reorder and frontier sources");
    cmd->add_option("--cluster", a.cluster, "none | fixed:K | variable | hierarchical");
    cmd->add_option("--jacc-th", a.jacc_th, "Jaccard similarity threshold")
        ->capture_default_str();
    cmd->add_option("--max-cluster", a.max_cluster, "maximum cluster size")
        ->capture_default_str();
    cmd->add_option("--reps", a.reps, "timing repetitions")->capture_default_str();
    cmd->add_option("--threads", a.threads, "worker threads (0 = all)");
    cmd->add_option("--frontiers", a.frontiers, "tall-skinny: frontier matrices taken")
        ->capture_default_str();
    cmd->add_option("--batch", a.batch, "tall-skinny: BFS sources per frontier batch")
        ->capture_default_str();
    cmd->add_flag("--warmup", a.warmup, "discard one warm-up repetition");
    cmd->add_option("--out", a.out, "output file (subcommand-specific)");
}

BenchConfig make_config(const CommonArgs& a) {
    BenchConfig cfg;
    cfg.matrix_path = a.matrix;
    cfg.workload = a.workload == "a2" ? Workload::a_squared : Workload::tall_skinny;
    cfg.num_frontiers = a.frontiers;
    cfg.frontier_batch = a.batch;
    cfg.frontier_seed = a.seed;
    cfg.reorder = parse_reorder(a.reorder, a.seed);
    ClusterParams params;
    params.jacc_th = a.jacc_th;
    params.max_cluster_th = a.max_cluster;
    cfg.clustering = parse_cluster(a.cluster, params);
    cfg.repetitions = a.reps;
    cfg.threads = a.threads;
    cfg.warmup = a.warmup;
    cfg.output_path = a.out;
    return cfg;
}

int cmd_multiply(const CommonArgs& a) {
    const BenchConfig cfg = make_config(a);
    const detail::PreparedBench p = detail::prepare_bench(cfg);
    const CsrMatrix& b = p.b_variant.front();
    const CsrMatrix c =
        p.clustered ? cluster_to_csr(spgemm_clusterwise(p.a_cluster, b, cfg.threads))
                    : spgemm_rowwise(p.a_variant, b, cfg.threads);
    if (a.out.empty()) throw CLI::ValidationError("--out", "multiply needs an output path");
    write_matrix_market(c, a.out);
    std::cout << "wrote " << c.nrows << "x" << c.ncols << " result with " << c.nnz()
              << " nonzeros to " << a.out << "\n";
    return 0;
}

int cmd_cluster(const CommonArgs& a) {
    BenchConfig cfg = make_config(a);
    if (cfg.clustering.method == ClusteringSpec::Method::none)
        cfg.clustering.method = ClusteringSpec::Method::hierarchical;
    const detail::PreparedBench p = detail::prepare_bench(cfg);
    const std::string text = assignment_to_text(p.assignment);
    if (a.out.empty()) {
        std::cout << text;
    } else {
        std::ofstream f(a.out);
        if (!f) throw io_error("cannot open '" + a.out + "' for writing");
        f << text;
    }
    std::cerr << p.assignment.clusters.size() << " clusters over " << p.a_variant.nrows
              << " rows\n";
    return 0;
}

int cmd_reorder(const CommonArgs& a) {
    const BenchConfig cfg = make_config(a);
    const CsrMatrix m = coo_to_csr(load_matrix_market(cfg.matrix_path));
    const Permutation perm = detail::make_permutation(cfg.reorder, m);
    if (a.out.empty()) {
        for (index_t k = 0; k < perm.size; ++k) std::cout << perm.perm[k] << '\n';
    } else {
        write_permutation(perm, a.out);
    }
    return 0;
}

int cmd_bench(const CommonArgs& a) {
    const BenchConfig cfg = make_config(a);
    const BenchReport r = run_bench(cfg);
    std::printf("%s workload=%s reorder=%s cluster=%s\n", cfg.matrix_path.c_str(),
                workload_name(cfg.workload).c_str(), reorder_name(cfg.reorder).c_str(),
                cfg.clustering.name().c_str());
    std::printf("  baseline %.6fs  variant %.6fs  speedup %.3fx\n", r.baseline_mean_s,
                r.variant_mean_s, r.speedup_vs_baseline);
    std::printf("  preprocess: reorder %.6fs, cluster build %.6fs, amortized after %.1f runs\n",
                r.reorder_seconds, r.cluster_build_seconds, r.amortization_iters);
    std::printf("  footprint: csr %zu B, cluster %zu B (%.3fx)\n", r.footprint.csr_bytes,
                r.footprint.cluster_bytes, r.footprint.ratio);
    std::printf("  B-row loads: baseline %llu, variant %llu\n",
                static_cast<unsigned long long>(r.baseline_access.b_row_loads),
                static_cast<unsigned long long>(r.access.b_row_loads));
    if (!cfg.output_path.empty()) std::printf("  appended CSV row to %s\n", a.out.c_str());
    return 0;
}

int cmd_verify(const CommonArgs& a) {
    const BenchConfig cfg = make_config(a);
    const VerifyReport v = verify_mode(cfg);
    std::cout << (v.pass ? "PASS" : "FAIL") << ": " << v.message << "\n";
    return v.pass ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"cluster-wise SpGEMM kernels and benchmark harness"};
    app.require_subcommand(1);

    CommonArgs margs, cargs, rargs, bargs, vargs;
    auto* multiply = app.add_subcommand("multiply", "run one SpGEMM and write the result .mtx");
    add_common_flags(multiply, margs);
    auto* cluster = app.add_subcommand("cluster", "emit a cluster assignment as text");
    add_common_flags(cluster, cargs);
    auto* reorder = app.add_subcommand("reorder", "emit a permutation file");
    add_common_flags(reorder, rargs);
    auto* bench = app.add_subcommand("bench", "run a timed benchmark and append a CSV row");
    add_common_flags(bench, bargs);
    auto* verify = app.add_subcommand("verify", "check the pipeline against the row-wise oracle");
    add_common_flags(verify, vargs);

    CLI11_PARSE(app, argc, argv);

    try {
        if (multiply->parsed()) return cmd_multiply(margs);
        if (cluster->parsed()) return cmd_cluster(cargs);
        if (reorder->parsed()) return cmd_reorder(rargs);
        if (bench->parsed()) return cmd_bench(bargs);
        if (verify->parsed()) return cmd_verify(vargs);
    } catch (const CLI::Error& e) {
        return app.exit(e);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
