#pragma once

#include <string>

namespace homsim::units {

// CODATA vacuum light speed, m/s. Fixed so results are identical on
// every platform.
inline constexpr double kSpeedOfLight = 2.99792458e8;

// 2*sqrt(2*ln 2): FWHM of a Gaussian intensity profile over its
// standard deviation.
inline constexpr double kFwhmPerSigma = 2.3548200450309493;

double wavelength_to_angular_frequency(double lambda_m);
double angular_frequency_to_wavelength(double omega_rad_s);

// First-order bandwidth conversion d_omega = 2*pi*c*d_lambda/lambda0^2.
double fwhm_wavelength_to_fwhm_angfreq(double lambda0_m, double dlambda_m);
double fwhm_angfreq_to_fwhm_wavelength(double lambda0_m, double domega_rad_s);

double delay_to_path_length(double tau_s);
double path_length_to_delay(double d_m);

double gaussian_fwhm_to_sigma(double fwhm);

// A Gaussian spectral line. The FWHM refers to the *intensity*
// profile, as a spectrometer would report it; amplitude envelopes
// derived from it use sigma = FWHM/(2*sqrt(2 ln 2)) in angular
// frequency.
class GaussianSpectrum {
  public:
    GaussianSpectrum(double center_nm, double fwhm_nm);

    double center_nm() const { return center_nm_; }
    double fwhm_nm() const { return fwhm_nm_; }

    double center_angfreq() const;
    double fwhm_angfreq() const;
    double sigma_angfreq() const;  // of the intensity profile

  private:
    double center_nm_;
    double fwhm_nm_;
};

}  // namespace homsim::units
