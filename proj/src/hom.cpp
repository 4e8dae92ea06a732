#include "homsim/hom.hpp"

#include <cmath>
#include <stdexcept>

namespace homsim::hom {

double eq_bandwidth(const units::GaussianSpectrum& s) {
    return kBandwidthConventionScale * s.fwhm_angfreq();
}

HomParams::HomParams(double sigma_s_, double sigma_lo_, double delta_)
    : sigma_s(sigma_s_), sigma_lo(sigma_lo_), delta(delta_) {
    if (!(sigma_s > 0.0) || !(sigma_lo > 0.0))
        throw std::domain_error("bandwidths must be positive");
}

double coincidence_probability(double tau_s, const HomParams& p) {
    const double s2 = p.sigma_s * p.sigma_s;
    const double l2 = p.sigma_lo * p.sigma_lo;
    const double denom = s2 + l2;
    const double arg = (s2 * l2 * tau_s * tau_s + 4.0 * p.delta * p.delta) / (2.0 * denom);
    return 0.5 - (p.sigma_s * p.sigma_lo / denom) * std::exp(-arg);
}

double visibility(double sigma_s, double sigma_lo) {
    if (!(sigma_s > 0.0) || !(sigma_lo > 0.0))
        throw std::domain_error("bandwidths must be positive");
    const double x = sigma_s / sigma_lo;
    return 2.0 * x / (1.0 + x * x);
}

double expected_visibility_from_spectra(const units::GaussianSpectrum& signal,
                                        const units::GaussianSpectrum& lo) {
    return visibility(eq_bandwidth(signal), eq_bandwidth(lo));
}

DipWidth dip_fwhm(const HomParams& p) {
    if (p.delta != 0.0)
        throw std::domain_error("dip width is defined for the centered dip (delta = 0) only");
    const double s2 = p.sigma_s * p.sigma_s;
    const double l2 = p.sigma_lo * p.sigma_lo;
    DipWidth w;
    w.fwhm_time_s = units::kFwhmPerSigma * std::sqrt(s2 + l2) / (p.sigma_s * p.sigma_lo);
    w.fwhm_path_m = units::delay_to_path_length(w.fwhm_time_s);
    return w;
}

HomCurve hom_curve(const HomParams& p, const std::vector<double>& delays_s) {
    HomCurve c;
    c.delays_s = delays_s;
    c.path_um.reserve(delays_s.size());
    c.probability.reserve(delays_s.size());
    for (double tau : delays_s) {
        c.path_um.push_back(units::delay_to_path_length(tau) * 1e6);
        c.probability.push_back(coincidence_probability(tau, p));
    }
    return c;
}

}  // namespace homsim::hom
