#include "vbsbm/bench.hpp"
#include "vbsbm/errors.hpp"

#include <doctest.h>

#include <sstream>

using namespace vbsbm;

namespace {

BenchConfig small_config() {
    BenchConfig cfg;
    cfg.n_vertices = 30;
    cfg.q_true_set = {2, 3};
    cfg.networks_per_q = 3;
    cfg.q_scan_max = 4;
    cfg.restarts = 2;
    cfg.seed = 5;
    return cfg;
}

std::string csv_of(const ConfusionMatrix& m) {
    std::ostringstream out;
    write_confusion_csv(m, out);
    return out.str();
}

} // namespace

TEST_CASE("one replicate of one true Q") {
    BenchConfig cfg;
    cfg.q_true_set = {3};
    cfg.networks_per_q = 1;
    const BenchResult r = run_bench(cfg);
    CHECK(r.ilvb.true_values().size() == 1);
    CHECK(r.ilvb.row_total(3) == 1);
    CHECK(csv_of(r.ilvb).rfind("q_true,1,2,3,4,5,6,7\n3,", 0) == 0);
    CHECK(r.replicates.size() == 1);
    CHECK(r.replicates[0].seed == cfg.seed);
}

TEST_CASE("rows sum to the replicate count and output is deterministic") {
    BenchConfig cfg = small_config();
    cfg.with_icl = true;
    const BenchResult a = run_bench(cfg);
    for (const auto q : cfg.q_true_set) {
        CHECK(a.ilvb.row_total(q) == cfg.networks_per_q);
        CHECK(a.icl->row_total(q) == cfg.networks_per_q);
    }
    cfg.threads = 2;
    const BenchResult b = run_bench(cfg);
    CHECK(csv_of(a.ilvb) == csv_of(b.ilvb));
    CHECK(csv_of(*a.icl) == csv_of(*b.icl));
    std::ostringstream ra, rb;
    write_replicates_csv(a, ra);
    write_replicates_csv(b, rb);
    CHECK(ra.str() == rb.str());
    CHECK(a.replicates[4].seed == cfg.seed + 4 * kReplicateSeedStride);
}

TEST_CASE("accuracy summary") {
    const BenchResult r = run_bench(small_config());
    std::ostringstream out;
    write_accuracy_summary(r, out);
    std::istringstream lines(out.str());
    std::string line;
    std::getline(lines, line);
    CHECK(line == "criterion,q_true,correct,total,accuracy");
    std::getline(lines, line);
    CHECK(line.rfind("ilvb,2,", 0) == 0);
}

TEST_CASE("confusion matrix bookkeeping") {
    ConfusionMatrix m({3, 5}, 1, 7);
    m.add(3, 3);
    m.add(3, 4);
    m.add(5, 5);
    CHECK(m.at(3, 3) == 1);
    CHECK(m.at(3, 4) == 1);
    CHECK(m.row_total(3) == 2);
    CHECK(m.correct(5) == 1);
    CHECK(m.at(3, 9) == 0);
    CHECK_THROWS_AS(m.add(4, 3), ParameterError);
    CHECK_THROWS_AS(m.add(3, 8), ParameterError);
}

TEST_CASE("configuration validation") {
    BenchConfig cfg = small_config();
    cfg.lambda = 1.2;
    CHECK_THROWS_AS(cfg.validate(), ParameterError);
    cfg = small_config();
    cfg.networks_per_q = 0;
    CHECK_THROWS_AS(cfg.validate(), ParameterError);
    cfg = small_config();
    cfg.topology = Topology::hubs;
    cfg.q_true_set = {1};
    CHECK_THROWS_AS(cfg.validate(), ParameterError);
    CHECK_THROWS_AS(parse_topology("ring"), ParameterError);
    CHECK(parse_topology("hubs") == Topology::hubs);
}
