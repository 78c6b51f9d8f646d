#include "vbsbm/model_selection.hpp"

#include "vbsbm/errors.hpp"
#include "vbsbm/frequentist.hpp"
#include "vbsbm/parallel.hpp"

#include <cmath>
#include <limits>
#include <optional>
#include <string>

namespace vbsbm {

void SelectionConfig::validate() const {
    if (q_min < 1 || q_min > q_max) {
        throw ParameterError("need 1 <= q_min <= q_max, got [" + std::to_string(q_min) + ", " +
                             std::to_string(q_max) + "]");
    }
    if (restarts < 1) {
        throw ParameterError("restarts must be at least 1");
    }
    fit.validate();
}

const CriterionRow& SelectionReport::row(std::size_t q) const {
    for (const auto& r : rows) {
        if (r.q == q) {
            return r;
        }
    }
    throw ParameterError("no row for Q = " + std::to_string(q));
}

std::size_t argmax_first(const std::vector<double>& values, double tolerance) {
    std::size_t best = 0;
    for (std::size_t k = 1; k < values.size(); ++k) {
        if (values[k] > values[best] + tolerance) {
            best = k;
        }
    }
    return best;
}

SelectionReport select_q(const Graph& g, const SelectionConfig& cfg,
                         const std::function<Hyperparameters(std::size_t)>& priors) {
    cfg.validate();
    if (cfg.q_max > g.size()) {
        throw ParameterError("q_max (" + std::to_string(cfg.q_max) + ") exceeds vertex count (" +
                             std::to_string(g.size()) + ")");
    }
    const InitConfig init{cfg.init_method, cfg.kmeans_k, cfg.seed, cfg.perturbation};
    std::optional<WardDendrogram> dendrogram;
    if (cfg.init_method == InitMethod::ward) {
        dendrogram.emplace(WardDendrogram::from_graph(g));
    }

    const std::size_t n_q = cfg.q_max - cfg.q_min + 1;
    const std::size_t cells = n_q * cfg.restarts;
    std::vector<RestartRecord> records(cells);
    std::vector<std::optional<FitResult>> fits(cells);

    parallel_for(cells, cfg.threads, [&](std::size_t cell) {
        RestartRecord& rec = records[cell];
        rec.q = cfg.q_min + cell / cfg.restarts;
        rec.restart = cell % cfg.restarts;
        try {
            const Labels labels = initial_labels(g, rec.q, init, rec.restart, dendrogram ? &*dendrogram : nullptr);
            const Responsibilities tau0 = hard_responsibilities(labels, rec.q);
            FitResult result = fit(g, rec.q, priors(rec.q), tau0, cfg.fit);
            rec.ilvb = result.ilvb;
            rec.converged = result.converged;
            rec.iterations = result.iterations;
            if (cfg.with_icl) {
                const FreqFitResult freq = fit_freq(g, rec.q, tau0, cfg.fit);
                rec.icl = icl(g, freq.params, rec.q);
            }
            fits[cell] = std::move(result);
        } catch (const std::exception& e) {
            rec.error = e.what();
        }
    });

    SelectionReport report;
    report.restarts = records;
    std::vector<double> ilvb_by_q;
    std::vector<double> icl_by_q;
    for (std::size_t k = 0; k < n_q; ++k) {
        CriterionRow row;
        row.q = cfg.q_min + k;
        std::optional<std::size_t> best;
        for (std::size_t r = 0; r < cfg.restarts; ++r) {
            const std::size_t cell = k * cfg.restarts + r;
            if (!fits[cell]) {
                continue;
            }
            if (!best || fits[cell]->ilvb > fits[*best]->ilvb) {
                best = cell;
            }
            if (records[cell].icl && (!row.icl || *records[cell].icl > *row.icl)) {
                row.icl = records[cell].icl;
            }
        }
        if (!best) {
            std::string detail;
            for (std::size_t r = 0; r < cfg.restarts; ++r) {
                detail += "\n  restart " + std::to_string(r) + ": " + records[k * cfg.restarts + r].error;
            }
            throw SelectionError("all restarts failed for Q = " + std::to_string(row.q) + detail);
        }
        row.best_restart = *best % cfg.restarts;
        row.best = std::move(*fits[*best]);
        ilvb_by_q.push_back(row.best.ilvb);
        if (row.icl) {
            icl_by_q.push_back(*row.icl);
        }
        report.rows.push_back(std::move(row));
    }
    report.q_star = cfg.q_min + argmax_first(ilvb_by_q);
    if (cfg.with_icl && icl_by_q.size() == n_q) {
        report.q_star_icl = cfg.q_min + argmax_first(icl_by_q);
    }
    return report;
}

} // namespace vbsbm
