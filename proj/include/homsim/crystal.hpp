#pragma once

#include <string>

namespace homsim::crystal {

// One axis of a uniaxial Sellmeier fit, lambda in micrometers:
//   n^2(lambda) = a + b/(lambda^2 - c) + d*lambda^2/(lambda^2 - e)
struct SellmeierAxis {
    double a = 0, b = 0, c = 0, d = 0, e = 0;
    double n_squared(double lambda_um) const;
};

struct SellmeierSet {
    std::string name;
    std::string citation;
    double lambda_min_nm = 0;
    double lambda_max_nm = 0;
    SellmeierAxis ordinary;       // n_o
    SellmeierAxis extraordinary;  // principal n_e (theta = 90 deg)

    // Built-in KDP dispersion data (see kdp() implementation for the
    // data source recorded in `citation`).
    static SellmeierSet kdp();

    // Key-value material file, same coefficients as the built-in set.
    static SellmeierSet load(const std::string& path);

    void check_range(double lambda_m) const;
};

enum class Polarization { ordinary, extraordinary };

// Type-II (eoe) collinear interaction: pump e, signal o, idler e.
struct CrystalConfig {
    SellmeierSet material;
    double length_m = 0;
    double cut_angle_rad = 0;
};

double index_ordinary(double lambda_m, const SellmeierSet& mat);

// Index-ellipse extraordinary index at propagation angle theta from
// the optic axis: 1/n^2 = cos^2/n_o^2 + sin^2/n_e^2.
double index_extraordinary(double lambda_m, double theta_rad, const SellmeierSet& mat);

double wavenumber(double omega_rad_s, Polarization pol, double theta_rad,
                  const SellmeierSet& mat);

// n_g = n + omega*dn/domega, central finite difference with relative
// step `rel_step` in omega. Group velocity is c/n_g.
double group_index(double omega_rad_s, Polarization pol, double theta_rad,
                   const SellmeierSet& mat, double rel_step = 1e-6);

// delta_k = k_e(omega_s + omega_i, theta) - k_o(omega_s) - k_e(omega_i, theta)
double phase_mismatch(double omega_s, double omega_i, const CrystalConfig& cfg);

// Cut angle solving delta_k = 0 for degenerate type-II down-conversion
// lambda_pump -> lambda_degenerate + lambda_degenerate. Bisection to
// |delta_k| < 1e-6 rad/m.
double phasematch_angle(double lambda_pump_m, double lambda_degenerate_m,
                        const SellmeierSet& mat);

// Pump wavelength at which the pump (e-ray) group velocity equals the
// degenerate signal (o-ray) group velocity at 2*lambda_pump.
double gvm_pump_wavelength(double theta_rad, const SellmeierSet& mat,
                           double lambda_lo_m = 360e-9, double lambda_hi_m = 520e-9);

}  // namespace homsim::crystal
