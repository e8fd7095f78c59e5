// repsim: command-line front end for bundle comparison, sanity checks,
// motif profiles, graph export, and the synthetic self-test.

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "repsim/repsim.hpp"

namespace {

using namespace repsim;

struct Config {
    std::string a;
    std::string b;
    std::string method = "gbs-lsim";
    std::string kernel = "linear";
    std::size_t k = default_graph_degree;
    std::size_t m = 0;
    double bandwidth = default_bandwidth_multiplier;
    std::string layer;
    std::string out;
    std::string emit;
    std::uint64_t seed = 0;
    std::size_t threads = 0;
};

/// Writes to --out, or stdout when it is empty.
void emit_output(const std::string& path, const std::string& text) {
    if (path.empty()) {
        std::cout << text;
        std::cout.flush();
        return;
    }
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) fail(ErrorKind::io, "cannot create " + path);
    f << text;
    if (!f) fail(ErrorKind::io, "write failure on " + path);
}

AnalysisOptions analysis_options(const Config& cfg, const CLI::App& sub) {
    AnalysisOptions opt;
    opt.method = parse_method(cfg.method);
    opt.threads = cfg.threads;
    opt.params.bandwidth_multiplier = cfg.bandwidth;
    opt.params.kernel = parse_kernel(cfg.kernel);

    const bool gbs = opt.method == Method::gbs_lsim || opt.method == Method::gbs_degree_pearson;
    const bool given_k = sub.count("--k") > 0;
    const bool given_m = sub.count("--m") > 0;
    const bool given_kernel = sub.count("--kernel") > 0;
    const bool given_bw = sub.count("--bandwidth") > 0;

    if (!(cfg.bandwidth > 0.0)) fail(ErrorKind::parameter, "--bandwidth must be positive");
    if (gbs) {
        if (given_m) fail(ErrorKind::parameter, "--m applies only to sparse-cka");
        if (given_kernel || given_bw)
            fail(ErrorKind::parameter, "--kernel/--bandwidth do not apply to graph-based methods");
        if (cfg.k < 1) fail(ErrorKind::parameter, "--k must be at least 1");
        opt.params.k = cfg.k;
        opt.params.kernel = KernelKind::cosine;
    } else {
        if (given_k) fail(ErrorKind::parameter, "--k applies only to gbs-lsim and gbs-degree");
        if (opt.method == Method::sparse_cka) {
            if (!given_m) fail(ErrorKind::parameter, "sparse-cka requires --m");
            if (cfg.m < 2) fail(ErrorKind::parameter, "--m must be at least 2");
            opt.params.m = cfg.m;
        } else if (given_m) {
            fail(ErrorKind::parameter, "--m applies only to sparse-cka");
        }
        if (given_bw && opt.params.kernel != KernelKind::rbf)
            fail(ErrorKind::parameter, "--bandwidth applies only to the rbf kernel");
    }
    return opt;
}

void add_analysis_flags(CLI::App* sub, Config& cfg) {
    sub->add_option("--a", cfg.a, "bundle directory A")->required();
    sub->add_option("--b", cfg.b, "bundle directory B (defaults to A)");
    sub->add_option("--method", cfg.method, "cka | sparse-cka | gbs-lsim | gbs-degree")->capture_default_str();
    sub->add_option("--kernel", cfg.kernel, "linear | rbf | cosine (cka, sparse-cka)")->capture_default_str();
    sub->add_option("--k", cfg.k, "graph degree (gbs-lsim, gbs-degree)")->capture_default_str();
    sub->add_option("--m", cfg.m, "entries kept per Gram row (sparse-cka)");
    sub->add_option("--bandwidth", cfg.bandwidth, "rbf bandwidth multiplier of the median distance")
        ->capture_default_str();
}

int run_selftest(const Config& cfg) {
    if (!cfg.emit.empty()) {
        namespace fs = std::filesystem;
        synthetic::Rng rng(cfg.seed);
        const auto base = synthetic::random_bundle("synthetic", 6, 100, 64, 10, rng);
        const auto twin = synthetic::orthogonal_twin(base, rng);
        const auto clustered = synthetic::clustered_bundle(200, 10, 32, rng);
        write_bundle(fs::path(cfg.emit) / "base", base);
        write_bundle(fs::path(cfg.emit) / "twin", twin);
        write_bundle(fs::path(cfg.emit) / "clustered", clustered);
    }
    std::ostringstream text;
    std::size_t passed = 0;
    const auto results = selftest::run_all(cfg.seed, cfg.threads);
    for (const auto& r : results) {
        text << (r.passed ? "PASS " : "FAIL ") << r.name << ": " << r.detail << '\n';
        passed += r.passed;
    }
    text << "selftest: " << passed << '/' << results.size() << " passed\n";
    emit_output(cfg.out, text.str());
    return passed == results.size() ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Layer representation similarity: CKA baselines, graph-based similarity, triangle motifs"};
    app.require_subcommand(1);
    Config cfg;
    app.add_option("--threads", cfg.threads, "worker threads (default: $REPSIM_THREADS or 1)");
    app.add_option("-o,--out", cfg.out, "output file (default: stdout)");

    auto* compare = app.add_subcommand("compare", "layer confusion matrix CSV between bundles A and B");
    add_analysis_flags(compare, cfg);
    auto* sanity = app.add_subcommand("sanity", "corresponding-layer sanity check report (JSON)");
    add_analysis_flags(sanity, cfg);

    auto* motifs = app.add_subcommand("motifs", "per-layer triangle motif census CSV");
    motifs->add_option("--a", cfg.a, "bundle directory")->required();
    motifs->add_option("--k", cfg.k, "graph degree")->capture_default_str();

    auto* graph = app.add_subcommand("graph", "edge list CSV of one layer's graph");
    graph->add_option("--a", cfg.a, "bundle directory")->required();
    graph->add_option("--layer", cfg.layer, "layer name")->required();
    graph->add_option("--k", cfg.k, "graph degree")->capture_default_str();

    auto* self = app.add_subcommand("selftest", "run the invariance property suite on synthetic data");
    self->add_option("--seed", cfg.seed, "random seed")->capture_default_str();
    self->add_option("--emit", cfg.emit, "also write synthetic bundles (base, twin, clustered) here");

    for (auto* sub : {compare, sanity, motifs, graph, self}) {
        sub->add_option("--threads", cfg.threads, "worker threads");
        sub->add_option("-o,--out", cfg.out, "output file");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "parameter_error: " << e.what() << '\n';
        return 1;
    }

    try {
        if (cfg.threads == 0) cfg.threads = threads_from_env(1);

        if (*compare || *sanity) {
            CLI::App& sub = *compare ? *compare : *sanity;
            const AnalysisOptions opt = analysis_options(cfg, sub);
            const auto a = load_bundle(cfg.a);
            const std::optional<RepresentationBundle> b =
                cfg.b.empty() ? std::nullopt : std::optional<RepresentationBundle>(load_bundle(cfg.b));
            const RepresentationBundle& rb = b ? *b : a;
            std::ostringstream text;
            if (*compare) {
                write_confusion_csv(text, layer_confusion(a, rb, opt));
            } else {
                text << to_json(sanity_accuracy(a, rb, opt)).dump(2) << '\n';
            }
            emit_output(cfg.out, text.str());
        } else if (*motifs) {
            if (cfg.k < 1) fail(ErrorKind::parameter, "--k must be at least 1");
            const auto a = load_bundle(cfg.a);
            const auto rows = motif_profile(a, cfg.k, cfg.threads);
            for (const auto& r : rows)
                if (r.triangle_free)
                    std::cerr << "warning: layer '" << r.layer << "' has no triangles; type1_ratio reported as 0\n";
            std::ostringstream text;
            write_motif_csv(text, rows);
            emit_output(cfg.out, text.str());
        } else if (*graph) {
            if (cfg.k < 1) fail(ErrorKind::parameter, "--k must be at least 1");
            const auto a = load_bundle(cfg.a);
            const Layer& layer = a.layer(cfg.layer);
            std::ostringstream text;
            write_edge_csv(text, build_graph(layer.matrix, cfg.k, layer.name, cfg.threads));
            emit_output(cfg.out, text.str());
        } else if (*self) {
            return run_selftest(cfg);
        }
    } catch (const Error& e) {
        std::string message = e.what();
        std::replace(message.begin(), message.end(), '\n', ' ');
        std::cerr << to_string(e.kind()) << ": " << message << '\n';
        return e.kind() == ErrorKind::io ? 2 : 1;
    } catch (const std::exception& e) {
        std::cerr << "internal_error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
