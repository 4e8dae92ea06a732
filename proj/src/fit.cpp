#include "homsim/fit.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "homsim/errors.hpp"
#include "homsim/units.hpp"

namespace homsim::fit {

namespace {

using Params = std::array<double, 4>;  // B, V, d0, w

struct Data {
    const std::vector<double>& d;
    const std::vector<double>& y;
    std::vector<double> weight;  // 1 / max(y, 1)
};

double model_value(const Params& t, double d) {
    const double z = (d - t[2]) / t[3];
    return t[0] * (1.0 - t[1] * std::exp(-0.5 * z * z));
}

double chi2(const Params& t, const Data& data) {
    // out-of-domain parameters get a smooth penalty so the simplex is
    // steered back rather than stranded
    double penalty = 0.0;
    if (t[0] <= 0.0) penalty += 1.0 + t[0] * t[0];
    if (t[1] < 0.0) penalty += 1.0 + t[1] * t[1];
    if (t[1] > 1.0) penalty += 1.0 + (t[1] - 1.0) * (t[1] - 1.0);
    if (t[3] <= 0.0) penalty += 1.0 + t[3] * t[3];
    if (penalty > 0.0) return 1e12 * penalty;
    double s = 0.0;
    for (std::size_t i = 0; i < data.d.size(); ++i) {
        const double r = data.y[i] - model_value(t, data.d[i]);
        s += r * r * data.weight[i];
    }
    return s;
}

// Jacobian row of the model at one point: d/d(B, V, d0, w).
void jacobian_row(const Params& t, double d, double* j) {
    const double z = (d - t[2]) / t[3];
    const double e = std::exp(-0.5 * z * z);
    j[0] = 1.0 - t[1] * e;
    j[1] = -t[0] * e;
    j[2] = -t[0] * t[1] * e * (d - t[2]) / (t[3] * t[3]);
    j[3] = -t[0] * t[1] * e * (d - t[2]) * (d - t[2]) / (t[3] * t[3] * t[3]);
}

struct SimplexOutcome {
    Params best;
    double f_best;
    int iterations;
    bool converged;
};

// Standard Nelder-Mead with deterministic tie-breaking. The converged
// flag reports the 1e-10 relative objective spread; iteration continues
// to a tighter internal spread so the polish step starts close.
SimplexOutcome nelder_mead(const Params& start, const Data& data, int max_iter) {
    constexpr double kAlpha = 1.0, kGamma = 2.0, kRho = 0.5, kSigma = 0.5;
    constexpr double kFlagTol = 1e-10, kStopTol = 1e-14;

    std::array<Params, 5> simplex;
    std::array<double, 5> fv;
    simplex[0] = start;
    for (int k = 1; k <= 4; ++k) {
        simplex[k] = start;
        double step = 0.1 * std::abs(start[k - 1]);
        if (step == 0.0) step = (k == 2) ? 0.05 : 1.0;  // V gets a small kick
        simplex[k][k - 1] += step;
    }
    for (int k = 0; k < 5; ++k) fv[k] = chi2(simplex[k], data);

    bool flagged = false;
    int it = 0;
    std::array<int, 5> order{};
    for (; it < max_iter; ++it) {
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(),
                         [&](int a, int b) { return fv[a] < fv[b]; });
        const int lo = order[0], hi = order[4], nh = order[3];
        const double spread = fv[hi] - fv[lo];
        if (spread <= kFlagTol * (1.0 + std::abs(fv[lo]))) flagged = true;
        if (spread <= kStopTol * (1.0 + std::abs(fv[lo]))) break;

        Params centroid{};
        for (int k = 0; k < 5; ++k)
            if (k != hi)
                for (int p = 0; p < 4; ++p) centroid[p] += simplex[k][p] / 4.0;

        auto blend = [&](double coef) {
            Params t;
            for (int p = 0; p < 4; ++p)
                t[p] = centroid[p] + coef * (simplex[hi][p] - centroid[p]);
            return t;
        };

        const Params refl = blend(-kAlpha);
        const double f_refl = chi2(refl, data);
        if (f_refl < fv[lo]) {
            const Params exp_ = blend(-kGamma);
            const double f_exp = chi2(exp_, data);
            if (f_exp < f_refl) {
                simplex[hi] = exp_;
                fv[hi] = f_exp;
            } else {
                simplex[hi] = refl;
                fv[hi] = f_refl;
            }
        } else if (f_refl < fv[nh]) {
            simplex[hi] = refl;
            fv[hi] = f_refl;
        } else {
            const Params con = blend(f_refl < fv[hi] ? -kRho : kRho);
            const double f_con = chi2(con, data);
            if (f_con < std::min(f_refl, fv[hi])) {
                simplex[hi] = con;
                fv[hi] = f_con;
            } else {
                for (int k = 0; k < 5; ++k) {
                    if (k == lo) continue;
                    for (int p = 0; p < 4; ++p)
                        simplex[k][p] = simplex[lo][p] + kSigma * (simplex[k][p] - simplex[lo][p]);
                    fv[k] = chi2(simplex[k], data);
                }
            }
        }
    }
    const int best = static_cast<int>(
        std::min_element(fv.begin(), fv.end()) - fv.begin());
    return {simplex[best], fv[best], it, flagged};
}

// Levenberg-style Gauss-Newton refinement; sharpens the simplex result
// to first-order optimality.
bool gauss_newton_polish(Params& t, const Data& data, int max_iter = 60) {
    double lambda = 1e-3;
    double f = chi2(t, data);
    bool improved_any = false;
    for (int it = 0; it < max_iter; ++it) {
        Eigen::Matrix4d JtWJ = Eigen::Matrix4d::Zero();
        Eigen::Vector4d g = Eigen::Vector4d::Zero();
        double j[4];
        for (std::size_t i = 0; i < data.d.size(); ++i) {
            jacobian_row(t, data.d[i], j);
            const double r = data.y[i] - model_value(t, data.d[i]);
            const double w = data.weight[i];
            for (int a = 0; a < 4; ++a) {
                g[a] += w * r * j[a];
                for (int b = 0; b < 4; ++b) JtWJ(a, b) += w * j[a] * j[b];
            }
        }
        bool stepped = false;
        for (int tries = 0; tries < 12; ++tries) {
            Eigen::Matrix4d A = JtWJ;
            for (int a = 0; a < 4; ++a) A(a, a) *= 1.0 + lambda;
            const Eigen::Vector4d step = A.ldlt().solve(g);
            Params cand = t;
            for (int a = 0; a < 4; ++a) cand[a] += step[a];
            const double fc = chi2(cand, data);
            if (std::isfinite(fc) && fc <= f) {
                const bool tiny = (f - fc) <= 1e-15 * (1.0 + f);
                t = cand;
                f = fc;
                lambda = std::max(lambda * 0.3, 1e-12);
                stepped = true;
                improved_any = true;
                if (tiny) return true;
                break;
            }
            lambda *= 10.0;
        }
        if (!stepped) break;
    }
    return improved_any;
}

void parameter_errors(const Params& t, const Data& data, FitResult& out) {
    Eigen::Matrix4d JtWJ = Eigen::Matrix4d::Zero();
    double j[4];
    for (std::size_t i = 0; i < data.d.size(); ++i) {
        jacobian_row(t, data.d[i], j);
        const double w = data.weight[i];
        for (int a = 0; a < 4; ++a)
            for (int b = 0; b < 4; ++b) JtWJ(a, b) += w * j[a] * j[b];
    }
    const Eigen::Matrix4d cov = JtWJ.inverse();
    out.err_baseline = std::sqrt(std::max(0.0, cov(0, 0)));
    out.err_visibility = std::sqrt(std::max(0.0, cov(1, 1)));
    out.err_center = std::sqrt(std::max(0.0, cov(2, 2)));
    out.err_width = std::sqrt(std::max(0.0, cov(3, 3)));
}

}  // namespace

double DipModel::operator()(double d_um) const {
    const double z = (d_um - center_um) / width_um;
    return baseline * (1.0 - visibility * std::exp(-0.5 * z * z));
}

double DipModel::fwhm_um() const { return units::kFwhmPerSigma * width_um; }

double FitResult::err_fwhm_um() const { return units::kFwhmPerSigma * err_width; }

FitResult fit_dip(const std::vector<double>& position_um, const std::vector<double>& counts) {
    if (position_um.size() != counts.size())
        throw std::domain_error("position and count arrays differ in length");
    const std::size_t n = position_um.size();
    if (n < 6) throw std::domain_error("dip fit needs at least 6 data points");

    // flat data: nothing to fit, visibility pinned to zero
    const auto [mn, mx] = std::minmax_element(counts.begin(), counts.end());
    if (*mn == *mx) {
        FitResult r;
        r.flat_data = true;
        r.converged = true;
        r.model.baseline = *mn;
        r.model.visibility = 0.0;
        r.model.center_um =
            0.5 * (*std::min_element(position_um.begin(), position_um.end()) +
                   *std::max_element(position_um.begin(), position_um.end()));
        r.model.width_um = 1.0;
        r.err_visibility = *mn > 0 ? 1.0 / std::sqrt(static_cast<double>(n) * *mn) : 0.0;
        return r;
    }

    // sort by position for the heuristics
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(),
                     [&](std::size_t a, std::size_t b) { return position_um[a] < position_um[b]; });
    std::vector<double> d(n), y(n);
    for (std::size_t k = 0; k < n; ++k) {
        d[k] = position_um[idx[k]];
        y[k] = counts[idx[k]];
    }

    Data data{d, y, {}};
    data.weight.resize(n);
    for (std::size_t i = 0; i < n; ++i) data.weight[i] = 1.0 / std::max(y[i], 1.0);

    // start heuristics: baseline from the outer quarters of the scan,
    // center from the smoothed minimum, width from half-depth crossings
    const double range = d.back() - d.front();
    double b0 = 0.0;
    int nb = 0;
    for (std::size_t i = 0; i < n; ++i) {
        if (d[i] <= d.front() + 0.25 * range || d[i] >= d.back() - 0.25 * range) {
            b0 += y[i];
            ++nb;
        }
    }
    b0 = nb > 0 ? b0 / nb : std::accumulate(y.begin(), y.end(), 0.0) / n;
    if (b0 <= 0.0) b0 = 1.0;

    std::vector<double> smooth(n);
    for (std::size_t i = 0; i < n; ++i) {
        double s = y[i];
        int c = 1;
        if (i > 0) {
            s += y[i - 1];
            ++c;
        }
        if (i + 1 < n) {
            s += y[i + 1];
            ++c;
        }
        smooth[i] = s / c;
    }
    const std::size_t imin = static_cast<std::size_t>(
        std::min_element(smooth.begin(), smooth.end()) - smooth.begin());
    const double d00 = d[imin];
    const double depth = b0 - smooth[imin];
    double v0 = std::clamp(depth / b0, 0.02, 0.98);

    const double half_level = b0 - 0.5 * depth;
    double left = d.front(), right = d.back();
    for (std::size_t i = imin; i-- > 0;) {
        if (smooth[i] > half_level) {
            left = d[i];
            break;
        }
    }
    for (std::size_t i = imin + 1; i < n; ++i) {
        if (smooth[i] > half_level) {
            right = d[i];
            break;
        }
    }
    double w0 = (right - left) / units::kFwhmPerSigma;
    if (!(w0 > 0.0)) w0 = 0.125 * range;

    const Params starts[4] = {{b0, v0, d00, w0},
                              {b0, v0, d00, 2.0 * w0},
                              {b0, v0, d00, 0.5 * w0},
                              {b0, 0.5 * v0, d00, 1.5 * w0}};

    FitResult result;
    double best_f = std::numeric_limits<double>::infinity();
    bool any_converged = false;
    Params best{};
    int best_start = -1, best_iters = 0;
    for (int s = 0; s < 4; ++s) {
        SimplexOutcome run = nelder_mead(starts[s], data, 4000);
        if (run.f_best < best_f) {  // ties keep the earliest start
            best_f = run.f_best;
            best = run.best;
            best_start = s;
            best_iters = run.iterations;
        }
        any_converged = any_converged || run.converged;
    }
    if (!any_converged) {
        std::ostringstream os;
        os << "dip fit did not converge from any start; best chi2=" << best_f << " at B="
           << best[0] << " V=" << best[1] << " d0=" << best[2] << " w=" << best[3];
        throw ComputeError(os.str());
    }

    gauss_newton_polish(best, data);
    best[3] = std::abs(best[3]);  // width sign is a gauge freedom

    result.model.baseline = best[0];
    result.model.visibility = best[1];
    result.model.center_um = best[2];
    result.model.width_um = best[3];
    result.chi2 = chi2(best, data);
    result.reduced_chi2 = result.chi2 / static_cast<double>(n - 4);
    result.converged = true;
    result.iterations = best_iters;
    result.best_start = best_start;
    parameter_errors(best, data, result);
    return result;
}

VisibilityEstimate visibility_from_fit(const FitResult& r) {
    if (!r.converged) throw ComputeError("visibility requested from an unconverged fit");
    return {r.model.visibility, r.err_visibility};
}

}  // namespace homsim::fit
