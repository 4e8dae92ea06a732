#pragma once

#include <string>
#include <vector>

namespace homsim::fit {

// Gaussian dip in count rate:
//   C(d) = B * [1 - V * exp(-(d - d0)^2 / (2 w^2))]
struct DipModel {
    double baseline = 0;    // B, counts
    double visibility = 0;  // V in [0, 1]
    double center_um = 0;   // d0
    double width_um = 0;    // w (Gaussian standard deviation)

    double operator()(double d_um) const;
    double fwhm_um() const;  // 2 sqrt(2 ln 2) w
};

struct FitResult {
    DipModel model;
    double err_baseline = 0;
    double err_visibility = 0;
    double err_center = 0;
    double err_width = 0;
    double chi2 = 0;
    double reduced_chi2 = 0;
    bool converged = false;
    bool flat_data = false;
    int iterations = 0;
    int best_start = 0;

    double fwhm_um() const { return model.fwhm_um(); }
    double err_fwhm_um() const;
};

// Weighted least squares with Poisson weights (variance = max(count, 1)).
// Derivative-free simplex descent from 4 deterministic data-driven
// starts, then a short Gauss-Newton polish; parameter errors from the
// inverse Gauss-Newton normal matrix at the optimum.
FitResult fit_dip(const std::vector<double>& position_um, const std::vector<double>& counts);

// (V, sigma_V); the model is parameterized directly in V.
struct VisibilityEstimate {
    double value;
    double error;
};
VisibilityEstimate visibility_from_fit(const FitResult& r);

}  // namespace homsim::fit
