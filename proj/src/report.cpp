#include "permkit/report.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <sstream>

namespace permkit {

namespace {

Report finite_or_null(double v) {
    if (!std::isfinite(v)) return nullptr;
    return v;
}

/// Shortest representation that round-trips; used by the text renderer.
std::string fmt(double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

std::string fmt(const Report& v) {
    if (v.is_number_float()) return fmt(v.get<double>());
    if (v.is_string()) return v.get<std::string>();
    return v.dump();
}

}  // namespace

Report to_report(const Matrix& m) {
    Report rows = Report::array();
    for (int i = 0; i < m.dim(); ++i) {
        Report row = Report::array();
        for (int j = 0; j < m.dim(); ++j) row.push_back(m(i, j));
        rows.push_back(std::move(row));
    }
    return rows;
}

Report to_report(const Diagonal& d) {
    Report out = Report::array();
    for (int i = 0; i < d.dim(); ++i) out.push_back(d[i]);
    return out;
}

Report to_report(const NecessaryReport& r) {
    Report out;
    out["overall"] = r.overall;
    out["diag_nonneg"] = r.diag_nonneg;
    Report pairs = Report::array();
    for (size_t p = 0; p < r.pair_index.size(); ++p) {
        Report e;
        e["i"] = r.pair_index[p][0];
        e["j"] = r.pair_index[p][1];
        e["pair_product_nonneg"] = static_cast<bool>(r.pair_products_nonneg[p]);
        e["minor2_nonneg"] = static_cast<bool>(r.minors2_nonneg[p]);
        pairs.push_back(std::move(e));
    }
    out["pairs"] = std::move(pairs);
    out["det_nonneg"] = r.det_nonneg;
    out["real_eigs_positive"] = r.real_eigs_positive;
    if (!r.first_failure.empty()) out["first_failure"] = r.first_failure;
    return out;
}

Report to_report(const ClassificationReport& r) {
    Report out;
    out["verdict"] = to_string(r.verdict);
    if (!r.failure.empty()) out["failure"] = r.failure;
    if (!r.beta_note.empty()) out["beta"] = r.beta_note;
    if (r.class1_witness) {
        Report w;
        w["scaling"] = to_report(r.class1_witness->scaling);
        w["target"] = to_report(r.class1_witness->target);
        w["effective"] = r.class1_witness->effective;
        out["class1"] = std::move(w);
    }
    if (r.class2_witness) {
        Report w;
        w["signature"] = to_report(r.class2_witness->signature);
        w["mmatrix"] = to_report(r.class2_witness->mmatrix);
        out["class2"] = std::move(w);
    }
    Report notes = Report::array();
    for (const auto& n : r.notes) {
        Report e;
        e["name"] = n.name;
        e["pass"] = n.pass;
        if (!n.detail.empty()) e["detail"] = n.detail;
        notes.push_back(std::move(e));
    }
    out["notes"] = std::move(notes);
    return out;
}

Report to_report(const IndependenceReport& r) {
    Report out;
    out["pairwise_independent"] = r.pairwise_independent;
    out["product_form"] = r.product_form;
    out["c_coefficient"] = r.c_coefficient;
    out["fully_independent"] = r.fully_independent;
    out["shape_residual"] = r.shape_residual;
    return out;
}

Report to_report(const ResolventSweep& r) {
    Report out;
    out["verdict"] = to_string(r.verdict);
    if (r.verdict != ResolventSweep::Verdict::AllNonneg) out["fail_r"] = r.fail_r;
    out["real_eigs_positive"] = r.real_eigs_positive;
    out["grid_points"] = r.r_grid.size();
    double worst_entry = std::numeric_limits<double>::infinity();
    double min_det = std::numeric_limits<double>::infinity();
    for (const auto& [d, e] : r.per_r) {
        min_det = std::min(min_det, d);
        if (std::isfinite(e)) worst_entry = std::min(worst_entry, e);
    }
    out["min_det"] = finite_or_null(min_det);
    out["min_entry"] = finite_or_null(worst_entry);
    return out;
}

Report to_report(const SeriesCertificate& r) {
    Report out;
    out["verdict"] =
        r.verdict == SeriesCertificate::Verdict::Nonneg ? "Nonneg" : "NegativeAt";
    out["max_degree"] = r.max_degree;
    out["min_coefficient"] = r.min_coefficient;
    out["min_index"] = std::vector<int>(r.min_index.begin(), r.min_index.end());
    out["terms"] = r.coefficients.size();
    out["tolerance"] = r.tol_used;
    return out;
}

Report to_report(const CertifyResult& r) {
    Report out;
    out["certified"] = r.certified;
    if (!r.failure.empty()) out["failure"] = r.failure;
    if (r.class2) out["signature"] = to_report(r.class2->signature);
    if (r.series) out["series"] = to_report(*r.series);
    return out;
}

Report to_report(const MetricTable& r) {
    Report out;
    out["d"] = to_report(r.d);
    out["worst_triangle_slack"] = r.worst_triangle_slack;
    out["min_d_squared"] = r.min_d_squared;
    return out;
}

Report to_report(const MomentReport& r) {
    Report out;
    out["empirical_mean"] = r.empirical_mean;
    out["analytic_mean"] = r.analytic_mean;
    out["mean_z"] = r.mean_z;
    out["empirical_cov"] = to_report(r.empirical_cov);
    out["analytic_cov"] = to_report(r.analytic_cov);
    out["cov_z"] = to_report(r.cov_z);
    return out;
}

Report to_report(const LaplaceEstimate& r) {
    Report out;
    out["estimate"] = r.estimate;
    out["std_error"] = r.std_error;
    out["analytic"] = r.analytic;
    return out;
}

std::string render_text(const Report& run) {
    std::ostringstream out;
    out << "permkit " << run.value("command", std::string{"?"}) << " report\n";
    for (const auto& m : run.value("matrices", Report::array())) {
        out << "== " << m.value("label", std::string{"?"});
        if (m.contains("n")) out << " (" << m["n"].get<int>() << "x" << m["n"].get<int>() << ")";
        out << "\n";
        if (m.contains("error")) {
            out << "   error: " << m["error"].get<std::string>() << "\n";
            continue;
        }
        if (m.contains("classification")) {
            const auto& c = m["classification"];
            out << "   verdict: " << c["verdict"].get<std::string>();
            if (c.contains("failure")) out << "  failure: " << c["failure"].get<std::string>();
            if (c.contains("beta")) out << "  admissible: " << c["beta"].get<std::string>();
            out << "\n";
        }
        if (m.contains("independence")) {
            const auto& ind = m["independence"];
            out << "   independence: pairwise=" << ind["pairwise_independent"].get<bool>()
                << " full=" << ind["fully_independent"].get<bool>()
                << " c=" << fmt(ind["c_coefficient"]) << "\n";
        }
        if (m.contains("necessary"))
            out << "   necessary: " << (m["necessary"]["overall"].get<bool>() ? "pass" : "fail")
                << (m["necessary"].contains("first_failure")
                        ? " (" + m["necessary"]["first_failure"].get<std::string>() + ")"
                        : "")
                << "\n";
        if (m.contains("sweep")) {
            const auto& s = m["sweep"];
            out << "   sweep: " << s["verdict"].get<std::string>();
            if (s.contains("fail_r")) out << " at r=" << fmt(s["fail_r"]);
            out << "\n";
        }
        if (m.contains("series")) {
            const auto& s = m["series"];
            if (s.contains("skipped")) {
                out << "   series: skipped (" << s["skipped"].get<std::string>() << ")\n";
            } else {
                out << "   series: " << s["verdict"].get<std::string>()
                    << " min_coeff=" << fmt(s["min_coefficient"]) << " degree<="
                    << s["max_degree"].get<int>() << "\n";
            }
        }
        if (m.contains("certify")) {
            const auto& c = m["certify"];
            out << "   certify: "
                << (c["certified"].get<bool>() ? "CertifiedAllBeta" : "NotCertified");
            if (c.contains("failure")) out << " (" << c["failure"].get<std::string>() << ")";
            out << "\n";
        }
        if (m.contains("note")) out << "   note: " << m["note"].get<std::string>() << "\n";
        if (m.contains("moments")) {
            const auto& mm = m["moments"];
            out << "   means:";
            for (const auto& v : mm["empirical_mean"]) out << " " << fmt(v);
            out << "   max|z|=";
            double worst = 0.0;
            for (const auto& v : mm["mean_z"]) worst = std::max(worst, std::abs(v.get<double>()));
            for (const auto& row : mm["cov_z"])
                for (const auto& v : row) worst = std::max(worst, std::abs(v.get<double>()));
            out << fmt(worst) << "\n";
        }
        if (m.contains("laplace")) {
            double worst = 0.0;
            for (const auto& pt : m["laplace"])
                worst = std::max(worst, std::abs(pt["z"].get<double>()));
            out << "   laplace grid: " << m["laplace"].size() << " points, max|z|=" << fmt(worst)
                << "\n";
        }
        if (m.contains("metric")) {
            const auto& t = m["metric"];
            out << "   metric: worst_slack=" << fmt(t["worst_triangle_slack"]) << "\n";
        }
        if (m.contains("symmetrized_psd"))
            out << "   symmetrized_psd: " << m["symmetrized_psd"].get<bool>() << "\n";
    }
    const auto& summary = run.value("summary", Report::object());
    out << "-- " << summary.value("count", 0) << " matrices";
    if (summary.contains("verdicts")) {
        for (const auto& [k, v] : summary["verdicts"].items())
            out << "  " << k << ":" << v.get<int>();
    }
    out << "\n";
    return out.str();
}

}  // namespace permkit
