#include "homsim/schmidt.hpp"

#include <Eigen/Dense>
#include <Eigen/SVD>
#include <cmath>

#include "homsim/errors.hpp"

namespace homsim::schmidt {

namespace {

constexpr double kCoefficientFloor = 1e-12;  // drop numerical-noise modes

Eigen::MatrixXcd to_matrix(const jsa::JsaMatrix& m) {
    if (!m.normalized) throw std::domain_error("Schmidt decomposition requires a normalized JSA");
    Eigen::MatrixXcd F(m.grid.n_signal, m.grid.n_idler);
    for (int i = 0; i < m.grid.n_signal; ++i)
        for (int j = 0; j < m.grid.n_idler; ++j) {
            const auto v = m.at(i, j);
            if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
                throw ComputeError("joint spectral amplitude contains non-finite entries");
            F(i, j) = v;
        }
    return F;
}

}  // namespace

SchmidtResult schmidt_decompose(const jsa::JsaMatrix& m) {
    const Eigen::MatrixXcd F = to_matrix(m);
    Eigen::BDCSVD<Eigen::MatrixXcd> svd(F);
    const Eigen::VectorXd s = svd.singularValues();

    double total = 0.0;
    for (Eigen::Index k = 0; k < s.size(); ++k) total += s[k] * s[k];
    if (!(total > 0.0)) throw ComputeError("zero joint spectral amplitude");

    SchmidtResult r;
    r.coefficients.reserve(static_cast<std::size_t>(s.size()));
    for (Eigen::Index k = 0; k < s.size(); ++k) {
        const double lam = s[k] * s[k] / total;
        if (lam < kCoefficientFloor) break;  // singular values are descending
        r.coefficients.push_back(lam);
    }
    double gamma = 0.0;
    for (double lam : r.coefficients) gamma += lam * lam;
    r.purity = gamma;
    r.schmidt_number = 1.0 / gamma;
    return r;
}

double purity(const SchmidtResult& r) { return r.purity; }

SchmidtModes schmidt_modes(const jsa::JsaMatrix& m, int count) {
    const Eigen::MatrixXcd F = to_matrix(m);
    Eigen::BDCSVD<Eigen::MatrixXcd> svd(F, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const int n = std::min<int>(count, static_cast<int>(svd.singularValues().size()));
    SchmidtModes modes;
    for (int k = 0; k < n; ++k) {
        std::vector<std::complex<double>> u(m.grid.n_signal), v(m.grid.n_idler);
        for (int i = 0; i < m.grid.n_signal; ++i) u[i] = svd.matrixU()(i, k);
        for (int j = 0; j < m.grid.n_idler; ++j) v[j] = svd.matrixV()(j, k);
        modes.signal_modes.push_back(std::move(u));
        modes.idler_modes.push_back(std::move(v));
    }
    return modes;
}

}  // namespace homsim::schmidt
