#include "homsim/units.hpp"

#include <cmath>
#include <stdexcept>

#include "homsim/errors.hpp"

namespace homsim::units {

namespace {
constexpr double kTwoPiC = 2.0 * M_PI * kSpeedOfLight;
}

double wavelength_to_angular_frequency(double lambda_m) {
    if (!(lambda_m > 0.0))
        throw std::domain_error("wavelength must be positive, got " +
                                std::to_string(lambda_m) + " m");
    return kTwoPiC / lambda_m;
}

double angular_frequency_to_wavelength(double omega_rad_s) {
    if (!(omega_rad_s > 0.0))
        throw std::domain_error("angular frequency must be positive, got " +
                                std::to_string(omega_rad_s) + " rad/s");
    return kTwoPiC / omega_rad_s;
}

double fwhm_wavelength_to_fwhm_angfreq(double lambda0_m, double dlambda_m) {
    if (!(lambda0_m > 0.0))
        throw std::domain_error("center wavelength must be positive");
    if (dlambda_m < 0.0)
        throw std::domain_error("bandwidth must be non-negative");
    if (dlambda_m >= lambda0_m)
        throw std::domain_error(
            "bandwidth >= center wavelength: first-order conversion invalid");
    return kTwoPiC * dlambda_m / (lambda0_m * lambda0_m);
}

double fwhm_angfreq_to_fwhm_wavelength(double lambda0_m, double domega_rad_s) {
    if (!(lambda0_m > 0.0))
        throw std::domain_error("center wavelength must be positive");
    if (domega_rad_s < 0.0)
        throw std::domain_error("bandwidth must be non-negative");
    return domega_rad_s * lambda0_m * lambda0_m / kTwoPiC;
}

double delay_to_path_length(double tau_s) { return kSpeedOfLight * tau_s; }

double path_length_to_delay(double d_m) { return d_m / kSpeedOfLight; }

double gaussian_fwhm_to_sigma(double fwhm) { return fwhm / kFwhmPerSigma; }

GaussianSpectrum::GaussianSpectrum(double center_nm, double fwhm_nm)
    : center_nm_(center_nm), fwhm_nm_(fwhm_nm) {
    if (!(center_nm > 0.0))
        throw std::domain_error("spectrum center wavelength must be positive");
    if (!(fwhm_nm > 0.0))
        throw std::domain_error("spectrum FWHM must be positive");
    if (!(fwhm_nm < center_nm))
        throw std::domain_error("spectrum FWHM must be below the center wavelength");
}

double GaussianSpectrum::center_angfreq() const {
    return wavelength_to_angular_frequency(center_nm_ * 1e-9);
}

double GaussianSpectrum::fwhm_angfreq() const {
    return fwhm_wavelength_to_fwhm_angfreq(center_nm_ * 1e-9, fwhm_nm_ * 1e-9);
}

double GaussianSpectrum::sigma_angfreq() const {
    return gaussian_fwhm_to_sigma(fwhm_angfreq());
}

}  // namespace homsim::units
