#include "cli.hpp"
#include "support.hpp"

#include "vbsbm/report.hpp"

#include <doctest.h>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

using namespace vbsbm;
namespace fs = std::filesystem;

namespace {

struct Run {
    int code;
    std::string out;
    std::string err;
};

Run run(std::vector<std::string> args) {
    args.insert(args.begin(), "vbsbm");
    std::vector<const char*> argv;
    for (const auto& a : args) {
        argv.push_back(a.c_str());
    }
    std::ostringstream out, err;
    const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() / ("vbsbm_cli_" + std::to_string(std::rand()) + "_" +
                                            std::to_string(reinterpret_cast<std::uintptr_t>(this)));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    std::string file(const std::string& name, const std::string& content = "") const {
        const fs::path p = path / name;
        if (!content.empty()) {
            std::ofstream(p) << content;
        }
        return p.string();
    }
};

} // namespace

TEST_CASE("generate writes edges and labels") {
    TempDir dir;
    const std::string prefix = dir.file("net");
    const Run r = run({"generate", "--n", "50", "--q", "3", "--lambda", "0.9", "--eps", "0.1", "--topology",
                       "affiliation", "--seed", "7", "--out-prefix", prefix});
    REQUIRE(r.code == 0);
    std::ifstream labels_in(prefix + ".labels");
    const Labels labels = load_labels(labels_in);
    CHECK(labels.size() == 50);
    std::ifstream edges_in(prefix + ".edges");
    CHECK(load_edge_list(edges_in, 50).size() == 50);

    const std::string second = dir.file("again");
    run({"generate", "--n", "50", "--q", "3", "--lambda", "0.9", "--eps", "0.1", "--topology", "affiliation",
         "--seed", "7", "--out-prefix", second});
    CHECK(slurp(prefix + ".edges") == slurp(second + ".edges"));
    CHECK(slurp(prefix + ".labels") == slurp(second + ".labels"));
}

TEST_CASE("generate with lambda 1 and eps 0 gives two cliques") {
    TempDir dir;
    const std::string prefix = dir.file("cliques");
    REQUIRE(run({"generate", "--n", "12", "--q", "2", "--lambda", "1", "--eps", "0", "--out-prefix", prefix}).code ==
            0);
    std::ifstream edges_in(prefix + ".edges");
    std::ifstream labels_in(prefix + ".labels");
    const Graph g = load_edge_list(edges_in, 12);
    const Labels z = load_labels(labels_in);
    for (std::size_t i = 0; i < 12; ++i) {
        for (std::size_t j = 0; j < 12; ++j) {
            CHECK(g.has_edge(i, j) == (i != j && z[i] == z[j]));
        }
    }
}

TEST_CASE("generate usage errors") {
    CHECK(run({"generate", "--n", "5"}).code == 2);
    CHECK(run({"generate", "--lambda", "1.5", "--out-prefix", "x"}).code == 2);
    CHECK(run({"generate", "--topology", "ring", "--out-prefix", "x"}).code == 2);
    CHECK(run({"generate", "--n", "3", "--q", "4", "--out-prefix", "x"}).code == 2);
    CHECK(run({}).code == 2);
    CHECK(run({"frobnicate"}).code == 2);
    CHECK(run({"--help"}).code == 0);
}

TEST_CASE("fit on a triangle") {
    TempDir dir;
    const std::string edges = dir.file("tri.edges", "0 1\n1 2\n0 2\n");
    const Run r = run({"fit", "--edges", edges, "--n", "3", "--q", "1"});
    REQUIRE(r.code == 0);
    const auto doc = nlohmann::json::parse(r.out);
    CHECK(doc.at("ilvb").get<double>() == doctest::Approx(-1.1632).epsilon(1e-4));
    CHECK(doc.at("ilvb").get<double>() == doctest::Approx(test::q1_log_marginal(test::triangle())).epsilon(1e-9));
    CHECK_FALSE(doc.contains("tau"));

    CHECK(run({"fit", "--edges", edges, "--n", "3", "--q", "0"}).code == 2);
    CHECK(run({"fit", "--edges", edges, "--n", "3", "--q", "4"}).code == 2);
    CHECK(run({"fit", "--edges", dir.file("missing.edges"), "--n", "3", "--q", "1"}).code == 2);
    CHECK(run({"fit", "--edges", dir.file("bad.edges", "0 5\n"), "--n", "3", "--q", "1"}).code == 2);
}

TEST_CASE("fit emits tau and parses back") {
    TempDir dir;
    const Graph g = test::disjoint_cliques(3, 4);
    std::ostringstream text;
    write_edge_list(g, text);
    const std::string edges = dir.file("g.edges", text.str());
    const Run r = run({"fit", "--edges", edges, "--n", "12", "--q", "3", "--emit-tau", "--restarts", "2"});
    REQUIRE(r.code == 0);
    const FitResult back = fit_result_from_json(nlohmann::json::parse(r.out));
    REQUIRE(back.state.tau.rows() == 12);
    REQUIRE(back.state.tau.cols() == 3);
    for (Eigen::Index i = 0; i < 12; ++i) {
        CHECK(back.state.tau.row(i).sum() == doctest::Approx(1.0).epsilon(1e-9));
    }
    CHECK((back.state.n.array() >= 0.5).all());
    CHECK(back.state.n.sum() == doctest::Approx(12 + 1.5).epsilon(1e-9));
    CHECK((back.state.eta - back.state.eta.transpose()).cwiseAbs().maxCoeff() <= 1e-9);
    CHECK(test::same_partition(map_labels(back.state.tau), {0, 0, 0, 0, 1, 1, 1, 1, 2, 2, 2, 2}));
    CHECK(back.ilvb == back.elbo_trace.back());
}

TEST_CASE("fit reports non-convergence with exit code 3") {
    TempDir dir;
    const Graph g = test::random_graph(40, 0.3, 5);
    std::ostringstream text;
    write_edge_list(g, text);
    const std::string edges = dir.file("g.edges", text.str());
    const Run r = run({"fit", "--edges", edges, "--n", "40", "--q", "4", "--max-iters", "1", "--restarts", "1",
                       "--init", "random"});
    CHECK(r.code == 3);
    CHECK(nlohmann::json::parse(r.out).at("converged") == false);
}

TEST_CASE("select") {
    TempDir dir;
    const std::string empty = dir.file("empty.edges", "# no edges\n");
    const Run r = run({"select", "--edges", empty, "--n", "20", "--qmin", "1", "--qmax", "4"});
    REQUIRE(r.code == 0);
    CHECK(r.out.rfind("Q,restart,ilvb,converged,iterations\n", 0) == 0);
    const auto summary = nlohmann::json::parse(r.out.substr(r.out.find('{')));
    CHECK(summary.at("q_star") == 1);

    const Run icl = run({"select", "--edges", empty, "--n", "20", "--qmax", "2", "--criteria", "ilvb,icl", "--csv",
                         dir.file("table.csv")});
    REQUIRE(icl.code == 0);
    CHECK(nlohmann::json::parse(icl.out).contains("q_star_icl"));
    CHECK(slurp(dir.path / "table.csv").rfind("Q,restart,ilvb,converged,iterations,icl\n", 0) == 0);

    CHECK(run({"select", "--edges", empty, "--n", "20", "--qmin", "3", "--qmax", "2"}).code == 2);
    CHECK(run({"select", "--edges", empty, "--n", "20", "--criteria", "bic"}).code == 2);
}

TEST_CASE("oracle-check") {
    TempDir dir;
    const std::string tri = dir.file("tri.edges", "0 1\n1 2\n0 2\n");
    const Run r = run({"oracle-check", "--edges", tri, "--n", "3", "--q", "1"});
    REQUIRE(r.code == 0);
    const double gap = std::stod(r.out.substr(r.out.find("gap ") + 4));
    CHECK(std::abs(gap) <= 1e-9);

    std::ostringstream text;
    write_edge_list(test::disjoint_cliques(2, 3), text);
    const Run cliques = run({"oracle-check", "--edges", dir.file("c.edges", text.str()), "--n", "6", "--q", "2"});
    CHECK(cliques.code == 0);
    CHECK(std::stod(cliques.out.substr(cliques.out.find("gap ") + 4)) >= 0.0);

    CHECK(run({"oracle-check", "--edges", tri, "--n", "9", "--q", "1"}).code == 2);
    CHECK(run({"oracle-check", "--edges", tri, "--n", "3", "--q", "4"}).code == 2);
}

TEST_CASE("bench writes confusion matrices") {
    TempDir dir;
    const std::string out_dir = (dir.path / "bench").string();
    const Run r = run({"bench", "--n", "30", "--q-true", "2,3", "--networks", "2", "--qmax", "4", "--restarts", "2",
                       "--criteria", "ilvb,icl", "--out-dir", out_dir, "--seed", "3"});
    REQUIRE(r.code == 0);
    for (const char* name : {"confusion_ilvb.csv", "confusion_icl.csv", "accuracy.csv", "replicates.csv"}) {
        CHECK(fs::exists(fs::path(out_dir) / name));
    }
    const std::string first = slurp(fs::path(out_dir) / "confusion_ilvb.csv");
    CHECK(first.rfind("q_true,1,2,3,4\n", 0) == 0);
    run({"bench", "--n", "30", "--q-true", "2,3", "--networks", "2", "--qmax", "4", "--restarts", "2", "--criteria",
         "ilvb,icl", "--out-dir", out_dir, "--seed", "3"});
    CHECK(slurp(fs::path(out_dir) / "confusion_ilvb.csv") == first);

    CHECK(run({"bench", "--networks", "0"}).code == 2);
    CHECK(run({"bench", "--topology", "hubs", "--q-true", "1"}).code == 2);
}
