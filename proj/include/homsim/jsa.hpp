#pragma once

#include <complex>
#include <string>
#include <vector>

#include "homsim/crystal.hpp"
#include "homsim/units.hpp"

namespace homsim::jsa {

// Uniform rectangular grid in angular frequency, signal x idler.
struct FrequencyGrid {
    double signal_start = 0, signal_step = 0;
    double idler_start = 0, idler_step = 0;
    int n_signal = 0, n_idler = 0;

    static FrequencyGrid centered(double w_signal_0, double halfspan_s, int ns,
                                  double w_idler_0, double halfspan_i, int ni);

    double signal(int i) const { return signal_start + i * signal_step; }
    double idler(int j) const { return idler_start + j * idler_step; }
    std::vector<double> signal_axis() const;
    std::vector<double> idler_axis() const;
};

// f(w_s, w_i) = phi(w_s, w_i) * alpha(w_s + w_i), L2-normalized so that
// sum |f|^2 dws dwi = 1. The alpha and phi factor grids are kept for
// density export.
struct JsaMatrix {
    FrequencyGrid grid;
    std::vector<std::complex<double>> f;    // row-major, index i_s * n_idler + i_i
    std::vector<double> alpha;              // pump envelope factor
    std::vector<std::complex<double>> phi;  // phase-matching factor
    bool normalized = false;

    std::complex<double> at(int i_s, int i_i) const { return f[static_cast<std::size_t>(i_s) * grid.n_idler + i_i]; }
    double intensity_sum() const;  // sum |f|^2 dws dwi, fixed sequential order
};

// Gaussian pump amplitude exp(-(w_s + w_i - w_p0)^2 / (4 sigma_p^2));
// sigma_p is the standard deviation of the pump *intensity* spectrum.
double pump_envelope(double w_s, double w_i, const units::GaussianSpectrum& pump);

// sinc(dk L/2) * exp(i dk L/2), sinc(0) = 1
std::complex<double> phase_matching_function(double w_s, double w_i,
                                             const crystal::CrystalConfig& cfg);

JsaMatrix build_jsa(const FrequencyGrid& grid, const units::GaussianSpectrum& pump,
                    const crystal::CrystalConfig& cfg);

struct Marginals {
    std::vector<double> signal;  // intensity marginal over w_s, integrates to 1
    std::vector<double> idler;
    double signal_fwhm_rad_s = 0, idler_fwhm_rad_s = 0;
    double signal_fwhm_nm = 0, idler_fwhm_nm = 0;
};

Marginals marginal_spectra(const JsaMatrix& m);

// Grid sized from the physics: probe pass on a wide coarse grid to
// measure the marginal widths, then +-span_fwhms of the measured FWHM
// per axis at n x n points.
FrequencyGrid default_grid(const units::GaussianSpectrum& pump,
                           const crystal::CrystalConfig& cfg, int n = 256,
                           double span_fwhms = 4.0);

// Writes <base>_alpha.csv, <base>_phi.csv, <base>_jsa.csv with |.|^2
// panels. header_lines are prepended as '#' comments.
void export_density(const JsaMatrix& m, const std::string& base_path,
                    const std::vector<std::string>& header_lines = {});

// Reads back a density CSV written by export_density.
struct DensityPanel {
    std::vector<double> signal_axis_rad_s, idler_axis_rad_s;
    std::vector<double> values;  // row-major signal x idler
};
DensityPanel read_density(const std::string& path);

}  // namespace homsim::jsa
