#pragma once

// Confusion-matrix benchmark: draw SBM networks for each true number of
// classes, select Q on each, and tally selected against true Q.

#include "vbsbm/generator.hpp"
#include "vbsbm/model_selection.hpp"
#include "vbsbm/vb_engine.hpp"

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace vbsbm {

enum class Topology { affiliation, hubs };

Topology parse_topology(const std::string& name);
std::string to_string(Topology t);

/// Equal class proportions with the affiliation or hub connectivity matrix.
SbmParams benchmark_params(Topology topology, std::size_t q_true, double lambda, double epsilon);

struct BenchConfig {
    std::size_t n_vertices = 50;
    double lambda = 0.9;
    double epsilon = 0.1;
    std::vector<std::size_t> q_true_set{3, 4, 5, 6, 7};
    std::size_t networks_per_q = 20;
    std::size_t q_scan_min = 1;
    std::size_t q_scan_max = 7;
    std::size_t restarts = 5;
    Topology topology = Topology::affiliation;
    std::uint64_t seed = 0;
    bool with_icl = false;
    std::size_t threads = 1; ///< 0 = hardware concurrency
    FitOptions fit;

    void validate() const;
};

/// Stride between replicate seeds.
inline constexpr std::uint64_t kReplicateSeedStride = 10007;
/// Re-draws allowed for a replicate whose selection fails.
inline constexpr std::size_t kMaxReplicateRetries = 3;

/// Rows indexed by true Q, columns by selected Q.
class ConfusionMatrix {
public:
    ConfusionMatrix(std::vector<std::size_t> q_true, std::size_t q_scan_min, std::size_t q_scan_max);

    void add(std::size_t q_true, std::size_t q_selected);
    std::size_t at(std::size_t q_true, std::size_t q_selected) const;
    std::size_t row_total(std::size_t q_true) const;
    std::size_t correct(std::size_t q_true) const { return at(q_true, q_true); }

    const std::vector<std::size_t>& true_values() const noexcept { return q_true_; }
    std::size_t scan_min() const noexcept { return q_min_; }
    std::size_t scan_max() const noexcept { return q_max_; }

private:
    std::size_t row_index(std::size_t q_true) const;

    std::vector<std::size_t> q_true_;
    std::size_t q_min_;
    std::size_t q_max_;
    std::vector<std::vector<std::size_t>> counts_;
};

struct ReplicateRecord {
    std::size_t q_true = 0;
    std::size_t replicate = 0;
    std::uint64_t seed = 0;    ///< seed of the accepted draw
    std::size_t attempts = 1;
    std::size_t q_ilvb = 0;
    std::optional<std::size_t> q_icl;
};

struct BenchResult {
    ConfusionMatrix ilvb;
    std::optional<ConfusionMatrix> icl;
    std::vector<ReplicateRecord> replicates;
};

/// Replicate r of the k-th true Q uses seed + (k * networks_per_q + r) * stride,
/// plus the attempt number on retries. Failures are reported to `log`.
BenchResult run_bench(const BenchConfig& cfg, std::ostream* log = nullptr);

/// Header "q_true,<q_min>,...,<q_max>", one row per true Q.
void write_confusion_csv(const ConfusionMatrix& m, std::ostream& out);

/// Columns: criterion, q_true, correct, total, accuracy.
void write_accuracy_summary(const BenchResult& result, std::ostream& out);

/// Columns: q_true, replicate, seed, attempts, q_ilvb[, q_icl].
void write_replicates_csv(const BenchResult& result, std::ostream& out);

} // namespace vbsbm
