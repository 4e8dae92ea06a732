#include "homsim/crystal.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "homsim/config.hpp"
#include "homsim/errors.hpp"
#include "homsim/units.hpp"

namespace homsim::crystal {

using units::kSpeedOfLight;

double SellmeierAxis::n_squared(double lambda_um) const {
    const double l2 = lambda_um * lambda_um;
    return a + b / (l2 - c) + d * l2 / (l2 - e);
}

SellmeierSet SellmeierSet::kdp() {
    // KH2PO4 at room temperature, "Handbook of Nonlinear Optical
    // Crystals" (Dmitriev, Gurzadyan, Nikogosyan), 3rd ed., Springer 1999.
    SellmeierSet s;
    s.name = "KDP";
    s.citation =
        "Dmitriev, Gurzadyan, Nikogosyan, Handbook of Nonlinear Optical "
        "Crystals, 3rd ed. (Springer, 1999), KDP";
    s.lambda_min_nm = 250.0;
    s.lambda_max_nm = 1500.0;
    s.ordinary = {2.259276, 0.01008956, 0.012942625, 13.005522, 400.0};
    s.extraordinary = {2.132668, 0.008637494, 0.012281043, 3.2279924, 400.0};
    return s;
}

SellmeierSet SellmeierSet::load(const std::string& path) {
    config::KeyValueFile kv = config::KeyValueFile::parse_file(path);
    SellmeierSet s;
    s.name = kv.get_string("material", "name");
    s.citation = kv.get_string("material", "citation");
    s.lambda_min_nm = kv.get_double("material", "lambda_min_nm");
    s.lambda_max_nm = kv.get_double("material", "lambda_max_nm");
    auto axis = [&kv](const std::string& section) {
        SellmeierAxis ax;
        ax.a = kv.get_double(section, "a");
        ax.b = kv.get_double(section, "b");
        ax.c = kv.get_double(section, "c");
        ax.d = kv.get_double(section, "d");
        ax.e = kv.get_double(section, "e");
        return ax;
    };
    s.ordinary = axis("ordinary");
    s.extraordinary = axis("extraordinary");
    if (!(s.lambda_min_nm > 0) || !(s.lambda_max_nm > s.lambda_min_nm))
        throw ConfigError("material file " + path + ": invalid wavelength range");
    return s;
}

void SellmeierSet::check_range(double lambda_m) const {
    const double nm = lambda_m * 1e9;
    if (!(nm >= lambda_min_nm && nm <= lambda_max_nm)) {
        std::ostringstream os;
        os << "wavelength " << nm << " nm outside " << name << " validity range ["
           << lambda_min_nm << ", " << lambda_max_nm << "] nm";
        throw RangeError(os.str());
    }
}

double index_ordinary(double lambda_m, const SellmeierSet& mat) {
    mat.check_range(lambda_m);
    return std::sqrt(mat.ordinary.n_squared(lambda_m * 1e6));
}

double index_extraordinary(double lambda_m, double theta_rad, const SellmeierSet& mat) {
    mat.check_range(lambda_m);
    if (theta_rad < 0.0 || theta_rad > M_PI / 2.0)
        throw std::domain_error("cut angle must lie in [0, 90] degrees");
    const double lum = lambda_m * 1e6;
    const double no2 = mat.ordinary.n_squared(lum);
    const double ne2 = mat.extraordinary.n_squared(lum);
    const double c = std::cos(theta_rad);
    const double s = std::sin(theta_rad);
    return 1.0 / std::sqrt(c * c / no2 + s * s / ne2);
}

double wavenumber(double omega_rad_s, Polarization pol, double theta_rad,
                  const SellmeierSet& mat) {
    const double lambda = units::angular_frequency_to_wavelength(omega_rad_s);
    const double n = (pol == Polarization::ordinary)
                         ? index_ordinary(lambda, mat)
                         : index_extraordinary(lambda, theta_rad, mat);
    return n * omega_rad_s / kSpeedOfLight;
}

double group_index(double omega_rad_s, Polarization pol, double theta_rad,
                   const SellmeierSet& mat, double rel_step) {
    const double h = rel_step * omega_rad_s;
    auto n_of = [&](double w) {
        const double lambda = units::angular_frequency_to_wavelength(w);
        return (pol == Polarization::ordinary)
                   ? index_ordinary(lambda, mat)
                   : index_extraordinary(lambda, theta_rad, mat);
    };
    const double n = n_of(omega_rad_s);
    const double dndw = (n_of(omega_rad_s + h) - n_of(omega_rad_s - h)) / (2.0 * h);
    return n + omega_rad_s * dndw;
}

double phase_mismatch(double omega_s, double omega_i, const CrystalConfig& cfg) {
    const double omega_p = omega_s + omega_i;  // energy conservation
    return wavenumber(omega_p, Polarization::extraordinary, cfg.cut_angle_rad, cfg.material) -
           wavenumber(omega_s, Polarization::ordinary, cfg.cut_angle_rad, cfg.material) -
           wavenumber(omega_i, Polarization::extraordinary, cfg.cut_angle_rad, cfg.material);
}

double phasematch_angle(double lambda_pump_m, double lambda_degenerate_m,
                        const SellmeierSet& mat) {
    if (std::abs(lambda_degenerate_m - 2.0 * lambda_pump_m) > 1e-9 * lambda_degenerate_m)
        throw std::domain_error(
            "degenerate wavelength must be twice the pump wavelength");
    const double w_deg = units::wavelength_to_angular_frequency(lambda_degenerate_m);

    auto dk = [&](double theta) {
        CrystalConfig cfg{mat, 1.0, theta};
        return phase_mismatch(w_deg, w_deg, cfg);
    };

    double lo = 0.5 * M_PI / 180.0;
    double hi = 89.5 * M_PI / 180.0;
    double flo = dk(lo);
    double fhi = dk(hi);
    if (flo == 0.0) return lo;
    if (fhi == 0.0) return hi;
    if ((flo > 0.0) == (fhi > 0.0))
        throw ComputeError("no phase-matching angle in (0, 90) degrees for " +
                           mat.name + " at this wavelength pair");
    double mid = 0.5 * (lo + hi);
    for (int i = 0; i < 240; ++i) {
        mid = 0.5 * (lo + hi);
        const double fm = dk(mid);
        if (std::abs(fm) < 1e-6) return mid;
        if ((fm > 0.0) == (flo > 0.0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    throw ComputeError("phase-matching angle bisection failed to reach |delta_k| < 1e-6 rad/m");
}

double gvm_pump_wavelength(double theta_rad, const SellmeierSet& mat,
                           double lambda_lo_m, double lambda_hi_m) {
    auto residual = [&](double lam_p) {
        const double wp = units::wavelength_to_angular_frequency(lam_p);
        const double ws = units::wavelength_to_angular_frequency(2.0 * lam_p);
        return group_index(wp, Polarization::extraordinary, theta_rad, mat) -
               group_index(ws, Polarization::ordinary, theta_rad, mat);
    };

    double lo = lambda_lo_m;
    double hi = lambda_hi_m;
    double flo = residual(lo);
    double fhi = residual(hi);
    if ((flo > 0.0) == (fhi > 0.0))
        throw ComputeError("no group-velocity-matched pump wavelength in [" +
                           std::to_string(lambda_lo_m * 1e9) + ", " +
                           std::to_string(lambda_hi_m * 1e9) + "] nm for " + mat.name);
    double mid = 0.5 * (lo + hi);
    for (int i = 0; i < 200; ++i) {
        mid = 0.5 * (lo + hi);
        const double fm = residual(mid);
        if (std::abs(fm) < 1e-6 && (hi - lo) < 0.01e-9) return mid;
        if ((fm > 0.0) == (flo > 0.0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    throw ComputeError("group-velocity-match bisection failed to converge");
}

}  // namespace homsim::crystal
