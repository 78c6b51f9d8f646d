#include "vbsbm/bench.hpp"

#include "vbsbm/errors.hpp"
#include "vbsbm/parallel.hpp"
#include "vbsbm/report.hpp"

#include <algorithm>
#include <mutex>
#include <ostream>
#include <stdexcept>
#include <string>

namespace vbsbm {

Topology parse_topology(const std::string& name) {
    if (name == "affiliation") {
        return Topology::affiliation;
    }
    if (name == "hubs" || name == "hub") {
        return Topology::hubs;
    }
    throw ParameterError("unknown topology '" + name + "' (expected affiliation or hubs)");
}

std::string to_string(Topology t) { return t == Topology::affiliation ? "affiliation" : "hubs"; }

SbmParams benchmark_params(Topology topology, std::size_t q_true, double lambda, double epsilon) {
    return {equal_proportions(q_true), topology == Topology::affiliation ? affiliation_matrix(q_true, lambda, epsilon)
                                                                         : hub_matrix(q_true, lambda, epsilon)};
}

void BenchConfig::validate() const {
    if (!(lambda >= 0.0 && lambda <= 1.0) || !(epsilon >= 0.0 && epsilon <= 1.0)) {
        throw ParameterError("lambda and epsilon must lie in [0, 1]");
    }
    if (n_vertices < 1 || networks_per_q < 1 || restarts < 1 || q_true_set.empty()) {
        throw ParameterError("counts must be at least 1");
    }
    if (q_scan_min < 1 || q_scan_min > q_scan_max || q_scan_max > n_vertices) {
        throw ParameterError("invalid Q scan range");
    }
    for (const auto q : q_true_set) {
        if (q < 1 || q > n_vertices || (topology == Topology::hubs && q < 2)) {
            throw ParameterError("invalid true Q " + std::to_string(q));
        }
    }
    fit.validate();
}

ConfusionMatrix::ConfusionMatrix(std::vector<std::size_t> q_true, std::size_t q_scan_min, std::size_t q_scan_max)
    : q_true_(std::move(q_true)), q_min_(q_scan_min), q_max_(q_scan_max),
      counts_(q_true_.size(), std::vector<std::size_t>(q_scan_max - q_scan_min + 1, 0)) {}

std::size_t ConfusionMatrix::row_index(std::size_t q_true) const {
    const auto it = std::find(q_true_.begin(), q_true_.end(), q_true);
    if (it == q_true_.end()) {
        throw ParameterError("true Q " + std::to_string(q_true) + " not in confusion matrix");
    }
    return static_cast<std::size_t>(it - q_true_.begin());
}

void ConfusionMatrix::add(std::size_t q_true, std::size_t q_selected) {
    if (q_selected < q_min_ || q_selected > q_max_) {
        throw ParameterError("selected Q outside scan range");
    }
    ++counts_[row_index(q_true)][q_selected - q_min_];
}

std::size_t ConfusionMatrix::at(std::size_t q_true, std::size_t q_selected) const {
    if (q_selected < q_min_ || q_selected > q_max_) {
        return 0;
    }
    return counts_[row_index(q_true)][q_selected - q_min_];
}

std::size_t ConfusionMatrix::row_total(std::size_t q_true) const {
    const auto& row = counts_[row_index(q_true)];
    std::size_t total = 0;
    for (const auto c : row) {
        total += c;
    }
    return total;
}

BenchResult run_bench(const BenchConfig& cfg, std::ostream* log) {
    cfg.validate();
    const std::size_t total = cfg.q_true_set.size() * cfg.networks_per_q;
    std::vector<ReplicateRecord> records(total);
    std::mutex log_mutex;

    parallel_for(total, cfg.threads, [&](std::size_t index) {
        ReplicateRecord& rec = records[index];
        rec.q_true = cfg.q_true_set[index / cfg.networks_per_q];
        rec.replicate = index % cfg.networks_per_q;
        const std::uint64_t base = cfg.seed + static_cast<std::uint64_t>(index) * kReplicateSeedStride;
        const SbmParams params = benchmark_params(cfg.topology, rec.q_true, cfg.lambda, cfg.epsilon);

        SelectionConfig sel;
        sel.q_min = cfg.q_scan_min;
        sel.q_max = cfg.q_scan_max;
        sel.restarts = cfg.restarts;
        sel.fit = cfg.fit;
        sel.with_icl = cfg.with_icl;
        sel.threads = 1;

        for (std::size_t attempt = 0;; ++attempt) {
            rec.seed = base + attempt;
            rec.attempts = attempt + 1;
            try {
                const SbmSample sample = sample_sbm(params, cfg.n_vertices, rec.seed);
                sel.seed = rec.seed;
                const SelectionReport report = select_q(sample.graph, sel);
                rec.q_ilvb = report.q_star;
                rec.q_icl = report.q_star_icl;
                return;
            } catch (const std::exception& e) {
                if (log) {
                    std::lock_guard lock(log_mutex);
                    *log << "replicate " << rec.replicate << " (Q_true=" << rec.q_true << ", seed " << rec.seed
                         << ") failed: " << e.what() << '\n';
                }
                if (attempt == kMaxReplicateRetries) {
                    throw SelectionError("replicate " + std::to_string(rec.replicate) + " for Q_true=" +
                                         std::to_string(rec.q_true) + " failed after " +
                                         std::to_string(kMaxReplicateRetries) + " retries: " + e.what());
                }
            }
        }
    });

    BenchResult result{ConfusionMatrix(cfg.q_true_set, cfg.q_scan_min, cfg.q_scan_max), std::nullopt,
                       std::move(records)};
    if (cfg.with_icl) {
        result.icl.emplace(cfg.q_true_set, cfg.q_scan_min, cfg.q_scan_max);
    }
    for (const auto& rec : result.replicates) {
        result.ilvb.add(rec.q_true, rec.q_ilvb);
        if (result.icl && rec.q_icl) {
            result.icl->add(rec.q_true, *rec.q_icl);
        }
    }
    return result;
}

void write_confusion_csv(const ConfusionMatrix& m, std::ostream& out) {
    out << "q_true";
    for (auto q = m.scan_min(); q <= m.scan_max(); ++q) {
        out << ',' << q;
    }
    out << '\n';
    for (const auto qt : m.true_values()) {
        out << qt;
        for (auto q = m.scan_min(); q <= m.scan_max(); ++q) {
            out << ',' << m.at(qt, q);
        }
        out << '\n';
    }
}

void write_accuracy_summary(const BenchResult& result, std::ostream& out) {
    out << "criterion,q_true,correct,total,accuracy\n";
    const auto emit = [&](const std::string& name, const ConfusionMatrix& m) {
        for (const auto qt : m.true_values()) {
            const auto total = m.row_total(qt);
            const double accuracy = total ? static_cast<double>(m.correct(qt)) / static_cast<double>(total) : 0.0;
            out << name << ',' << qt << ',' << m.correct(qt) << ',' << total << ',' << format_number(accuracy) << '\n';
        }
    };
    emit("ilvb", result.ilvb);
    if (result.icl) {
        emit("icl", *result.icl);
    }
}

void write_replicates_csv(const BenchResult& result, std::ostream& out) {
    const bool with_icl = result.icl.has_value();
    out << "q_true,replicate,seed,attempts,q_ilvb" << (with_icl ? ",q_icl" : "") << '\n';
    for (const auto& r : result.replicates) {
        out << r.q_true << ',' << r.replicate << ',' << r.seed << ',' << r.attempts << ',' << r.q_ilvb;
        if (with_icl) {
            out << ',' << (r.q_icl ? std::to_string(*r.q_icl) : "");
        }
        out << '\n';
    }
}

} // namespace vbsbm
