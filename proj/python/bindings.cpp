#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <complex>
#include <map>
#include <vector>

#include "permkit/classify.hpp"
#include "permkit/divisibility.hpp"
#include "permkit/kernelcheck.hpp"
#include "permkit/sampleverify.hpp"
#include "permkit/spectra.hpp"

namespace py = pybind11;
using namespace permkit;

namespace {

using Rows = std::vector<std::vector<double>>;

Matrix mat_from(const Rows& rows) {
    const int n = static_cast<int>(rows.size());
    if (n < 1 || n > kMaxDim) throw InvalidMatrix("dimension out of supported range");
    Matrix m(n);
    for (int i = 0; i < n; ++i) {
        if (static_cast<int>(rows[static_cast<size_t>(i)].size()) != n)
            throw InvalidMatrix("matrix must be square");
        for (int j = 0; j < n; ++j) m(i, j) = rows[static_cast<size_t>(i)][static_cast<size_t>(j)];
    }
    return m;
}

Rows mat_to(const Matrix& m) {
    Rows rows(static_cast<size_t>(m.dim()), std::vector<double>(static_cast<size_t>(m.dim())));
    for (int i = 0; i < m.dim(); ++i)
        for (int j = 0; j < m.dim(); ++j) rows[static_cast<size_t>(i)][static_cast<size_t>(j)] = m(i, j);
    return rows;
}

py::dict classify_py(const Rows& rows) {
    const Kernel k{mat_from(rows)};
    const auto rep = classify3(k);
    py::dict out;
    out["verdict"] = to_string(rep.verdict);
    out["failure"] = rep.failure;
    out["beta"] = rep.beta_note;
    if (rep.class1_witness) {
        py::dict w;
        w["scaling"] = rep.class1_witness->scaling.entries();
        w["target"] = mat_to(rep.class1_witness->target);
        w["effective"] = rep.class1_witness->effective;
        out["class1"] = w;
    }
    if (rep.class2_witness) {
        py::dict w;
        w["signature"] = rep.class2_witness->signature.entries();
        w["mmatrix"] = mat_to(rep.class2_witness->mmatrix);
        out["class2"] = w;
    }
    return out;
}

py::dict necessary_py(const Rows& rows) {
    const auto rep = check_necessary(Kernel{mat_from(rows)});
    py::dict out;
    out["overall"] = rep.overall;
    out["det_nonneg"] = rep.det_nonneg;
    out["real_eigs_positive"] = rep.real_eigs_positive;
    out["first_failure"] = rep.first_failure;
    return out;
}

py::dict independence_py(const Rows& rows) {
    const auto rep = independence_report(Kernel{mat_from(rows)});
    py::dict out;
    out["pairwise_independent"] = rep.pairwise_independent;
    out["product_form"] = rep.product_form;
    out["c_coefficient"] = rep.c_coefficient;
    out["fully_independent"] = rep.fully_independent;
    return out;
}

py::dict series_py(const Rows& rows, int degree) {
    const auto cert = log_det_series(Kernel{mat_from(rows)}, degree);
    py::dict out;
    out["verdict"] = cert.verdict == SeriesCertificate::Verdict::Nonneg ? "Nonneg" : "NegativeAt";
    out["min_coefficient"] = cert.min_coefficient;
    const int n = static_cast<int>(mat_from(rows).dim());
    py::dict coeffs;
    for (const auto& [idx, val] : cert.coefficients) {
        py::tuple key(n);
        for (int i = 0; i < n; ++i) key[static_cast<size_t>(i)] = static_cast<int>(idx[static_cast<size_t>(i)]);
        coeffs[key] = val;
    }
    out["coefficients"] = coeffs;
    return out;
}

py::dict certify_py(const Rows& rows, int degree) {
    const auto res = certify_all_beta(Kernel{mat_from(rows)}, degree);
    py::dict out;
    out["certified"] = res.certified;
    out["failure"] = res.failure;
    return out;
}

py::dict sweep_py(const Rows& rows, double r_max, int steps) {
    const auto sweep = vere_jones_sweep(Kernel{mat_from(rows)}, r_max, steps);
    py::dict out;
    out["verdict"] = to_string(sweep.verdict);
    out["real_eigs_positive"] = sweep.real_eigs_positive;
    if (sweep.verdict != ResolventSweep::Verdict::AllNonneg) out["fail_r"] = sweep.fail_r;
    return out;
}

py::dict moments_py(const Rows& rows, double beta, int64_t n, uint64_t seed) {
    const auto batch = sample_gaussian_squares(Kernel{mat_from(rows)}, beta, n, seed);
    const auto rep = moment_report(batch);
    py::dict out;
    out["empirical_mean"] = rep.empirical_mean;
    out["analytic_mean"] = rep.analytic_mean;
    out["mean_z"] = rep.mean_z;
    out["empirical_cov"] = mat_to(rep.empirical_cov);
    out["analytic_cov"] = mat_to(rep.analytic_cov);
    out["cov_z"] = mat_to(rep.cov_z);
    return out;
}

py::dict laplace_py(const Rows& rows, double beta, int64_t n, uint64_t seed,
                    const std::vector<double>& alpha) {
    const auto batch = sample_gaussian_squares(Kernel{mat_from(rows)}, beta, n, seed);
    const auto est = empirical_laplace(batch, alpha);
    py::dict out;
    out["estimate"] = est.estimate;
    out["std_error"] = est.std_error;
    out["analytic"] = est.analytic;
    return out;
}

py::dict metric_py(const Rows& rows) {
    const auto table = metric_table(Kernel{mat_from(rows)});
    py::dict out;
    out["d"] = mat_to(table.d);
    out["worst_triangle_slack"] = table.worst_triangle_slack;
    return out;
}

}  // namespace

PYBIND11_MODULE(_permkit, m) {
    m.doc() = "Kernel analysis for permanental vectors: classification, "
              "divisibility certificates and Monte Carlo validation.";

    py::register_exception<Error>(m, "PermkitError");

    m.def("det", [](const Rows& rows) { return det(mat_from(rows)); }, py::arg("matrix"));
    m.def("inverse", [](const Rows& rows) { return mat_to(inverse(mat_from(rows))); },
          py::arg("matrix"));
    m.def("adjugate", [](const Rows& rows) { return mat_to(adjugate(mat_from(rows))); },
          py::arg("matrix"));
    m.def("char_poly", [](const Rows& rows) { return char_poly(mat_from(rows)); },
          py::arg("matrix"),
          "Coefficients of det(m - lambda I), ascending by power.");
    m.def("eigenvalues",
          [](const Rows& rows) { return eigenvalues(mat_from(rows)).eigenvalues; },
          py::arg("matrix"), "Sorted by (Re desc, Im desc).");
    m.def("spectral_radius", [](const Rows& rows) { return spectral_radius(mat_from(rows)); },
          py::arg("matrix"));
    m.def("is_psd", [](const Rows& rows) { return is_psd(mat_from(rows)); }, py::arg("matrix"));
    m.def("is_mmatrix",
          [](const Rows& rows) {
              const auto r = is_mmatrix(mat_from(rows));
              return py::make_tuple(r.pass, r.diagnosis);
          },
          py::arg("matrix"), "Returns (pass, diagnosis).");
    m.def("is_class1",
          [](const Rows& rows) { return is_class1(Kernel{mat_from(rows)}).has_value(); },
          py::arg("matrix"), "Diagonally equivalent to a symmetric PSD matrix.");
    m.def("is_class2",
          [](const Rows& rows) { return is_class2(Kernel{mat_from(rows)}).has_value(); },
          py::arg("matrix"), "Inverse diagonally equivalent to an M-matrix.");
    m.def("classify", &classify_py, py::arg("matrix"),
          "Full 3x3 classification with witnesses.");
    m.def("check_necessary", &necessary_py, py::arg("matrix"));
    m.def("independence_report", &independence_py, py::arg("matrix"));
    m.def("symmetrize", [](const Rows& rows) { return mat_to(symmetrize(Kernel{mat_from(rows)})); },
          py::arg("matrix"));
    m.def("cycle_condition",
          [](const Rows& rows) {
              const auto [f, b] = cycle_condition(Kernel{mat_from(rows)});
              return py::make_tuple(f, b);
          },
          py::arg("matrix"));
    m.def("log_det_series", &series_py, py::arg("matrix"), py::arg("degree") = 8);
    m.def("certify_all_beta", &certify_py, py::arg("matrix"), py::arg("degree") = 8);
    m.def("vere_jones_sweep", &sweep_py, py::arg("matrix"), py::arg("r_max") = 1e3,
          py::arg("steps") = 64);
    m.def("modified_resolvent",
          [](const Rows& rows, double r) {
              return mat_to(modified_resolvent(Kernel{mat_from(rows)}, r));
          },
          py::arg("matrix"), py::arg("r"));
    m.def("reduce_kernel",
          [](const Rows& rows, const std::map<int, double>& fixed,
             const std::vector<int>& remaining) {
              return mat_to(
                  reduce_kernel(Kernel{mat_from(rows)}, ReductionSpec{fixed, remaining}).matrix());
          },
          py::arg("matrix"), py::arg("fixed"), py::arg("remaining"));
    m.def("sample_moments", &moments_py, py::arg("matrix"), py::arg("beta") = 0.5,
          py::arg("n") = 100000, py::arg("seed") = 1,
          "Empirical vs analytic moments of a class-1 kernel's samples.");
    m.def("empirical_laplace", &laplace_py, py::arg("matrix"), py::arg("beta"), py::arg("n"),
          py::arg("seed"), py::arg("alpha"));
    m.def("metric_table", &metric_py, py::arg("matrix"));
    m.def("symmetrized_psd_check",
          [](const Rows& rows) { return symmetrized_psd_check(Kernel{mat_from(rows)}); },
          py::arg("matrix"));
}
