#include "cli.hpp"

#include "vbsbm/bench.hpp"
#include "vbsbm/errors.hpp"
#include "vbsbm/exact_oracle.hpp"
#include "vbsbm/generator.hpp"
#include "vbsbm/graph.hpp"
#include "vbsbm/model_selection.hpp"
#include "vbsbm/report.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>
#include <stdexcept>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

namespace vbsbm::cli {
namespace {

// Thrown for anything that should end with the usage exit code.
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

const std::map<std::string, InitMethod> kInitMethods{
    {"ward", InitMethod::ward}, {"kmeans-ward", InitMethod::kmeans_then_ward}, {"random", InitMethod::random}};

struct GraphArgs {
    std::string edges;
    std::size_t n = 0;
    bool directed = false;

    void add_to(CLI::App& cmd) {
        cmd.add_option("--edges", edges, "Edge list file (0-based 'i j' per line)")->required();
        cmd.add_option("--n", n, "Number of vertices")->required()->check(CLI::PositiveNumber);
        cmd.add_flag("--directed", directed, "Treat edges as directed");
    }

    Graph load() const {
        std::ifstream in(edges);
        if (!in) {
            throw UsageError("cannot open edge file '" + edges + "'");
        }
        return load_edge_list(in, n, directed);
    }
};

struct SearchArgs {
    std::size_t restarts = 5;
    double eps = 1e-6;
    std::uint64_t seed = 0;
    InitMethod init = InitMethod::ward;
    std::size_t kmeans_k = 40;
    std::size_t max_iters = 500;
    std::size_t threads = 1;

    void add_to(CLI::App& cmd) {
        cmd.add_option("--restarts", restarts, "Initialisations per Q")->check(CLI::PositiveNumber);
        cmd.add_option("--eps", eps, "Convergence threshold on the lower bound")->check(CLI::PositiveNumber);
        cmd.add_option("--seed", seed, "Random seed");
        cmd.add_option("--init", init, "Initialisation: ward, kmeans-ward or random")
            ->transform(CLI::CheckedTransformer(kInitMethods));
        cmd.add_option("--kmeans-k", kmeans_k, "Number of k-means clusters before Ward")->check(CLI::PositiveNumber);
        cmd.add_option("--max-iters", max_iters, "Maximum EM iterations")->check(CLI::PositiveNumber);
        cmd.add_option("--threads", threads, "Worker threads (0 = all cores)");
    }

    SelectionConfig selection(std::size_t q_min, std::size_t q_max) const {
        SelectionConfig cfg;
        cfg.q_min = q_min;
        cfg.q_max = q_max;
        cfg.restarts = restarts;
        cfg.fit.eps_elbo = eps;
        cfg.fit.max_outer_iters = max_iters;
        cfg.init_method = init;
        cfg.kmeans_k = kmeans_k;
        cfg.seed = seed;
        cfg.threads = threads;
        return cfg;
    }
};

void check_q(std::size_t q, const Graph& g, const char* flag) {
    if (q < 1) {
        throw UsageError(std::string(flag) + " must be at least 1");
    }
    if (q > g.size()) {
        throw UsageError(std::string(flag) + " exceeds the number of vertices");
    }
}

std::ofstream open_output(const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw UsageError("cannot write '" + path + "'");
    }
    return out;
}

} // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Variational Bayes inference and model selection for stochastic block models"};
    app.name("vbsbm");
    app.require_subcommand(1);

    // generate
    auto* gen = app.add_subcommand("generate", "Sample an SBM network with an affiliation or hub structure");
    std::size_t gen_n = 50;
    std::size_t gen_q = 3;
    double gen_lambda = 0.9;
    double gen_eps = 0.1;
    std::string gen_topology = "affiliation";
    std::uint64_t gen_seed = 0;
    std::string gen_prefix;
    bool gen_directed = false;
    gen->add_option("--n", gen_n, "Number of vertices")->check(CLI::PositiveNumber);
    gen->add_option("--q", gen_q, "Number of classes")->check(CLI::PositiveNumber);
    gen->add_option("--lambda", gen_lambda, "Strong connection probability")->check(CLI::Range(0.0, 1.0));
    gen->add_option("--eps", gen_eps, "Weak connection probability")->check(CLI::Range(0.0, 1.0));
    gen->add_option("--topology", gen_topology, "affiliation or hubs")->check(CLI::IsMember({"affiliation", "hubs"}));
    gen->add_option("--seed", gen_seed, "Random seed");
    gen->add_option("--out-prefix", gen_prefix, "Writes <prefix>.edges and <prefix>.labels")->required();
    gen->add_flag("--directed", gen_directed, "Sample a directed graph");

    // fit
    auto* fitc = app.add_subcommand("fit", "Fit the variational posterior for one Q and print it as JSON");
    GraphArgs fit_graph;
    SearchArgs fit_search;
    std::size_t fit_q = 0;
    bool fit_tau = false;
    fit_graph.add_to(*fitc);
    fit_search.add_to(*fitc);
    fitc->add_option("--q", fit_q, "Number of classes")->required();
    fitc->add_flag("--emit-tau", fit_tau, "Include the N x Q responsibilities");

    // select
    auto* sel = app.add_subcommand("select", "Fit a range of Q and pick the one maximising ILvb");
    GraphArgs sel_graph;
    SearchArgs sel_search;
    std::size_t sel_qmin = 1;
    std::size_t sel_qmax = 7;
    std::vector<std::string> sel_criteria{"ilvb"};
    std::string sel_csv;
    sel_graph.add_to(*sel);
    sel_search.add_to(*sel);
    sel->add_option("--qmin", sel_qmin, "Smallest Q");
    sel->add_option("--qmax", sel_qmax, "Largest Q");
    sel->add_option("--criteria", sel_criteria, "ilvb and optionally icl")
        ->delimiter(',')
        ->check(CLI::IsMember({"ilvb", "icl"}));
    sel->add_option("--csv", sel_csv, "Write the per-restart table here instead of standard output");

    // bench
    auto* bench = app.add_subcommand("bench", "Confusion matrices of selected against true Q on synthetic networks");
    BenchConfig bcfg;
    std::string bench_topology = "affiliation";
    std::vector<std::string> bench_criteria{"ilvb"};
    std::string bench_dir = ".";
    bench->add_option("--n", bcfg.n_vertices, "Vertices per network")->check(CLI::PositiveNumber);
    bench->add_option("--lambda", bcfg.lambda, "Strong connection probability")->check(CLI::Range(0.0, 1.0));
    bench->add_option("--eps", bcfg.epsilon, "Weak connection probability")->check(CLI::Range(0.0, 1.0));
    bench->add_option("--q-true", bcfg.q_true_set, "True Q values")->delimiter(',');
    bench->add_option("--networks", bcfg.networks_per_q, "Networks per true Q")->check(CLI::PositiveNumber);
    bench->add_option("--qmin", bcfg.q_scan_min, "Smallest Q scanned");
    bench->add_option("--qmax", bcfg.q_scan_max, "Largest Q scanned");
    bench->add_option("--restarts", bcfg.restarts, "Initialisations per Q")->check(CLI::PositiveNumber);
    bench->add_option("--topology", bench_topology, "affiliation or hubs")->check(CLI::IsMember({"affiliation", "hubs"}));
    bench->add_option("--seed", bcfg.seed, "Base seed");
    bench->add_option("--criteria", bench_criteria, "ilvb and optionally icl")
        ->delimiter(',')
        ->check(CLI::IsMember({"ilvb", "icl"}));
    bench->add_option("--threads", bcfg.threads, "Worker threads (0 = all cores)");
    bench->add_option("--out-dir", bench_dir, "Directory for the CSV outputs");

    // oracle-check
    auto* oracle = app.add_subcommand("oracle-check", "Compare the variational bound with the exact marginal likelihood");
    GraphArgs oracle_graph;
    SearchArgs oracle_search;
    std::size_t oracle_q = 1;
    oracle_graph.add_to(*oracle);
    oracle_search.add_to(*oracle);
    oracle->add_option("--q", oracle_q, "Number of classes (at most 3)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (gen->parsed()) {
            if (gen_q > gen_n) {
                throw UsageError("--q exceeds --n");
            }
            const SbmParams params = benchmark_params(parse_topology(gen_topology), gen_q, gen_lambda, gen_eps);
            const SbmSample sample = sample_sbm(params, gen_n, gen_seed, gen_directed);
            auto edges_out = open_output(gen_prefix + ".edges");
            write_edge_list(sample.graph, edges_out);
            auto labels_out = open_output(gen_prefix + ".labels");
            write_labels(sample.labels, labels_out);
            out << "wrote " << gen_prefix << ".edges (" << sample.graph.edge_count() << " edges) and " << gen_prefix
                << ".labels\n";
            return kExitOk;
        }

        if (fitc->parsed()) {
            const Graph g = fit_graph.load();
            check_q(fit_q, g, "--q");
            const SelectionReport report = select_q(g, fit_search.selection(fit_q, fit_q));
            const FitResult& best = report.row(fit_q).best;
            out << fit_result_to_json(best, g, fit_tau).dump(2) << '\n';
            return best.converged ? kExitOk : kExitNotConverged;
        }

        if (sel->parsed()) {
            if (sel_qmin > sel_qmax) {
                throw UsageError("--qmin must not exceed --qmax");
            }
            const Graph g = sel_graph.load();
            check_q(sel_qmin, g, "--qmin");
            check_q(sel_qmax, g, "--qmax");
            SelectionConfig cfg = sel_search.selection(sel_qmin, sel_qmax);
            cfg.with_icl = std::find(sel_criteria.begin(), sel_criteria.end(), "icl") != sel_criteria.end();
            const SelectionReport report = select_q(g, cfg);
            if (sel_csv.empty()) {
                write_selection_csv(report, out);
            } else {
                auto csv = open_output(sel_csv);
                write_selection_csv(report, csv);
            }
            out << selection_summary_json(report).dump(2) << '\n';
            return kExitOk;
        }

        if (bench->parsed()) {
            bcfg.topology = parse_topology(bench_topology);
            bcfg.with_icl = std::find(bench_criteria.begin(), bench_criteria.end(), "icl") != bench_criteria.end();
            try {
                bcfg.validate();
            } catch (const ParameterError& e) {
                throw UsageError(e.what());
            }
            const BenchResult result = run_bench(bcfg, &err);
            const std::filesystem::path dir(bench_dir);
            std::filesystem::create_directories(dir);
            {
                auto csv = open_output((dir / "confusion_ilvb.csv").string());
                write_confusion_csv(result.ilvb, csv);
            }
            if (result.icl) {
                auto csv = open_output((dir / "confusion_icl.csv").string());
                write_confusion_csv(*result.icl, csv);
            }
            {
                auto csv = open_output((dir / "replicates.csv").string());
                write_replicates_csv(result, csv);
            }
            std::ostringstream summary;
            write_accuracy_summary(result, summary);
            {
                auto csv = open_output((dir / "accuracy.csv").string());
                csv << summary.str();
            }
            out << "ILvb confusion (rows: true Q, columns: selected Q)\n";
            write_confusion_csv(result.ilvb, out);
            if (result.icl) {
                out << "ICL confusion\n";
                write_confusion_csv(*result.icl, out);
            }
            out << summary.str();
            return kExitOk;
        }

        if (oracle->parsed()) {
            if (oracle_graph.n > 8) {
                throw UsageError("oracle-check is limited to --n 8");
            }
            if (oracle_q < 1 || oracle_q > 3) {
                throw UsageError("oracle-check needs 1 <= --q <= 3");
            }
            const Graph g = oracle_graph.load();
            check_q(oracle_q, g, "--q");
            const SelectionReport report = select_q(g, oracle_search.selection(oracle_q, oracle_q));
            const double bound = report.row(oracle_q).best.ilvb;
            const double exact = exact_log_marginal(g, oracle_q, Hyperparameters::jeffreys(oracle_q));
            const double gap = exact - bound;
            out << "lower_bound " << format_number(bound) << '\n'
                << "exact_log_marginal " << format_number(exact) << '\n'
                << "gap " << format_number(gap) << '\n';
            return gap < -1e-9 ? kExitFailure : kExitOk;
        }
    } catch (const UsageError& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const ParseError& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const ParameterError& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitFailure;
    }
    return kExitUsage;
}

} // namespace vbsbm::cli
