#include "vbsbm/report.hpp"

#include "vbsbm/errors.hpp"

#include <cstdio>
#include <ostream>

namespace vbsbm {
namespace {

using Eigen::Index;
using nlohmann::json;

json matrix_to_json(const auto& m) {
    json rows = json::array();
    for (Index i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (Index j = 0; j < m.cols(); ++j) {
            row.push_back(round_for_output(m(i, j)));
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

template <typename Matrix>
Matrix matrix_from_json(const json& rows, Index cols) {
    Matrix m(static_cast<Index>(rows.size()), cols);
    for (Index i = 0; i < m.rows(); ++i) {
        const auto& row = rows.at(static_cast<std::size_t>(i));
        if (static_cast<Index>(row.size()) != cols) {
            throw ParseError("matrix row " + std::to_string(i) + " has wrong length", 0);
        }
        for (Index j = 0; j < cols; ++j) {
            m(i, j) = row.at(static_cast<std::size_t>(j)).get<double>();
        }
    }
    return m;
}

} // namespace

std::string format_number(double value) {
    char buffer[32];
    std::snprintf(buffer, sizeof buffer, "%.10g", value);
    return buffer;
}

double round_for_output(double value) { return std::stod(format_number(value)); }

json fit_result_to_json(const FitResult& result, const Graph& g, bool include_tau) {
    const auto& s = result.state;
    json doc;
    doc["q"] = s.classes();
    doc["n_vertices"] = g.size();
    doc["directed"] = g.directed();
    doc["ilvb"] = round_for_output(result.ilvb);
    doc["converged"] = result.converged;
    doc["iterations"] = result.iterations;
    doc["fixed_point_sweeps"] = result.fixed_point_sweeps;
    json trace = json::array();
    for (const double v : result.elbo_trace) {
        trace.push_back(round_for_output(v));
    }
    doc["elbo_trace"] = std::move(trace);
    doc["map_labels"] = map_labels(s.tau);
    json n = json::array();
    for (Index k = 0; k < s.n.size(); ++k) {
        n.push_back(round_for_output(s.n(k)));
    }
    doc["n"] = std::move(n);
    doc["eta"] = matrix_to_json(s.eta);
    doc["zeta"] = matrix_to_json(s.zeta);
    if (include_tau) {
        doc["tau"] = matrix_to_json(s.tau);
    }
    return doc;
}

FitResult fit_result_from_json(const json& doc) {
    try {
        FitResult result;
        const auto q = doc.at("q").get<std::size_t>();
        const auto n_vertices = doc.at("n_vertices").get<std::size_t>();
        const auto cols = static_cast<Index>(q);
        result.ilvb = doc.at("ilvb").get<double>();
        result.converged = doc.at("converged").get<bool>();
        result.iterations = doc.at("iterations").get<std::size_t>();
        result.fixed_point_sweeps = doc.value("fixed_point_sweeps", std::size_t{0});
        result.elbo_trace = doc.at("elbo_trace").get<std::vector<double>>();
        const auto n = doc.at("n").get<std::vector<double>>();
        if (n.size() != q) {
            throw ParseError("n has " + std::to_string(n.size()) + " entries, expected " + std::to_string(q), 0);
        }
        result.state.n = Eigen::Map<const Eigen::VectorXd>(n.data(), cols);
        result.state.eta = matrix_from_json<Eigen::MatrixXd>(doc.at("eta"), cols);
        result.state.zeta = matrix_from_json<Eigen::MatrixXd>(doc.at("zeta"), cols);
        if (result.state.eta.rows() != cols || result.state.zeta.rows() != cols) {
            throw ParseError("eta / zeta must be q x q", 0);
        }
        if (doc.contains("tau")) {
            result.state.tau = matrix_from_json<Responsibilities>(doc.at("tau"), cols);
            if (static_cast<std::size_t>(result.state.tau.rows()) != n_vertices) {
                throw ParseError("tau must have one row per vertex", 0);
            }
        } else {
            result.state.tau.resize(static_cast<Index>(n_vertices), 0);
        }
        return result;
    } catch (const json::exception& e) {
        throw ParseError(std::string("malformed fit document: ") + e.what(), 0);
    }
}

void write_selection_csv(const SelectionReport& report, std::ostream& out) {
    const bool with_icl = report.q_star_icl.has_value();
    out << "Q,restart,ilvb,converged,iterations" << (with_icl ? ",icl" : "") << '\n';
    for (const auto& r : report.restarts) {
        out << r.q << ',' << r.restart << ',' << (r.error.empty() ? format_number(r.ilvb) : "nan") << ','
            << (r.converged ? 1 : 0) << ',' << r.iterations;
        if (with_icl) {
            out << ',' << (r.icl ? format_number(*r.icl) : "nan");
        }
        out << '\n';
    }
}

json selection_summary_json(const SelectionReport& report) {
    json doc;
    doc["q_star"] = report.q_star;
    if (report.q_star_icl) {
        doc["q_star_icl"] = *report.q_star_icl;
    }
    json table = json::array();
    for (const auto& row : report.rows) {
        json entry{{"q", row.q},
                   {"ilvb", round_for_output(row.best.ilvb)},
                   {"best_restart", row.best_restart},
                   {"converged", row.best.converged}};
        if (row.icl) {
            entry["icl"] = round_for_output(*row.icl);
        }
        table.push_back(std::move(entry));
    }
    doc["criteria"] = std::move(table);
    return doc;
}

} // namespace vbsbm
