#pragma once

#include <vector>

#include "homsim/units.hpp"

namespace homsim::hom {

// Bandwidth convention for the analytic coincidence formula: sigma_s
// and sigma_lo are the FWHM of the *intensity* spectrum expressed in
// angular frequency. This reading reproduces the expected dip width
// from the 9.3/7.1 nm spectra; a standard-deviation reading would not.
inline constexpr double kBandwidthConventionScale = 1.0;

double eq_bandwidth(const units::GaussianSpectrum& s);

struct HomParams {
    double sigma_s;   // signal bandwidth, rad/s
    double sigma_lo;  // LO bandwidth, rad/s
    double delta = 0.0;  // central frequency difference signal - LO, rad/s

    HomParams(double sigma_s_, double sigma_lo_, double delta_ = 0.0);
};

// Three-fold coincidence probability
//   P(tau) = 1/2 - [s_s s_L / (s_s^2 + s_L^2)]
//            * exp(-(s_s^2 s_L^2 tau^2 + 4 delta^2) / (2 (s_s^2 + s_L^2)))
double coincidence_probability(double tau_s, const HomParams& p);

// V = 2x/(1+x^2) = sech(ln x), x = sigma_s/sigma_lo (delta = 0)
double visibility(double sigma_s, double sigma_lo);

double expected_visibility_from_spectra(const units::GaussianSpectrum& signal,
                                        const units::GaussianSpectrum& lo);

struct DipWidth {
    double fwhm_time_s;
    double fwhm_path_m;
};

// FWHM of the centered Gaussian dip term; requires delta = 0.
DipWidth dip_fwhm(const HomParams& p);

struct HomCurve {
    std::vector<double> delays_s;
    std::vector<double> path_um;
    std::vector<double> probability;
};

HomCurve hom_curve(const HomParams& p, const std::vector<double>& delays_s);

}  // namespace homsim::hom
