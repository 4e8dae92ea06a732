#include "homsim/jsa.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "homsim/csv.hpp"
#include "homsim/errors.hpp"
#include "homsim/parallel.hpp"

namespace homsim::jsa {

using units::kSpeedOfLight;

namespace {

double sinc(double x) {
    if (std::abs(x) < 1e-6) {
        const double x2 = x * x;
        return 1.0 - x2 / 6.0 + x2 * x2 / 120.0;
    }
    return std::sin(x) / x;
}

// Interpolated full width at half maximum of a sampled profile.
// Returns 0 if the profile never drops below half max on either side.
double fwhm_of_profile(const std::vector<double>& x, const std::vector<double>& y) {
    const auto it = std::max_element(y.begin(), y.end());
    const double half = *it / 2.0;
    const int imax = static_cast<int>(it - y.begin());
    int il = -1;
    for (int i = imax; i >= 0; --i) {
        if (y[i] < half) {
            il = i;
            break;
        }
    }
    int ir = -1;
    for (int i = imax; i < static_cast<int>(y.size()); ++i) {
        if (y[i] < half) {
            ir = i;
            break;
        }
    }
    if (il < 0 || ir < 0) return 0.0;
    const double xl = x[il] + (half - y[il]) / (y[il + 1] - y[il]) * (x[il + 1] - x[il]);
    const double xr = x[ir - 1] + (half - y[ir - 1]) / (y[ir] - y[ir - 1]) * (x[ir] - x[ir - 1]);
    return xr - xl;
}

std::string format_axis_comment(const std::string& name, const std::vector<double>& axis) {
    std::ostringstream os;
    os << "# " << name;
    os.precision(12);
    for (double v : axis) os << ',' << v;
    return os.str();
}

}  // namespace

FrequencyGrid FrequencyGrid::centered(double w_signal_0, double halfspan_s, int ns,
                                      double w_idler_0, double halfspan_i, int ni) {
    if (ns < 2 || ni < 2) throw std::domain_error("frequency grid needs at least 2x2 points");
    if (!(halfspan_s > 0.0) || !(halfspan_i > 0.0))
        throw std::domain_error("frequency grid spans must be positive");
    FrequencyGrid g;
    g.n_signal = ns;
    g.n_idler = ni;
    g.signal_step = 2.0 * halfspan_s / (ns - 1);
    g.idler_step = 2.0 * halfspan_i / (ni - 1);
    g.signal_start = w_signal_0 - halfspan_s;
    g.idler_start = w_idler_0 - halfspan_i;
    return g;
}

std::vector<double> FrequencyGrid::signal_axis() const {
    std::vector<double> v(n_signal);
    for (int i = 0; i < n_signal; ++i) v[i] = signal(i);
    return v;
}

std::vector<double> FrequencyGrid::idler_axis() const {
    std::vector<double> v(n_idler);
    for (int i = 0; i < n_idler; ++i) v[i] = idler(i);
    return v;
}

double JsaMatrix::intensity_sum() const {
    double s = 0.0;
    for (const auto& v : f) s += std::norm(v);
    return s * grid.signal_step * grid.idler_step;
}

double pump_envelope(double w_s, double w_i, const units::GaussianSpectrum& pump) {
    const double sigma = pump.sigma_angfreq();
    const double d = w_s + w_i - pump.center_angfreq();
    return std::exp(-d * d / (4.0 * sigma * sigma));
}

std::complex<double> phase_matching_function(double w_s, double w_i,
                                             const crystal::CrystalConfig& cfg) {
    const double x = crystal::phase_mismatch(w_s, w_i, cfg) * cfg.length_m / 2.0;
    return sinc(x) * std::complex<double>(std::cos(x), std::sin(x));
}

JsaMatrix build_jsa(const FrequencyGrid& grid, const units::GaussianSpectrum& pump,
                    const crystal::CrystalConfig& cfg) {
    JsaMatrix m;
    m.grid = grid;
    const std::size_t total = static_cast<std::size_t>(grid.n_signal) * grid.n_idler;
    m.f.resize(total);
    m.alpha.resize(total);
    m.phi.resize(total);

    // cell evaluations are independent; fill is bit-identical for any
    // thread count because each index owns its slot
    parallel::parallel_for(static_cast<std::size_t>(grid.n_signal),
                           [&](std::size_t begin, std::size_t end) {
                               for (std::size_t i = begin; i < end; ++i) {
                                   const double ws = grid.signal(static_cast<int>(i));
                                   for (int j = 0; j < grid.n_idler; ++j) {
                                       const double wi = grid.idler(j);
                                       const double a = pump_envelope(ws, wi, pump);
                                       const auto p = phase_matching_function(ws, wi, cfg);
                                       const std::size_t idx = i * grid.n_idler + j;
                                       m.alpha[idx] = a;
                                       m.phi[idx] = p;
                                       m.f[idx] = a * p;
                                   }
                               }
                           });

    // fixed sequential reduction
    double s = 0.0;
    for (const auto& v : m.f) s += std::norm(v);
    s *= grid.signal_step * grid.idler_step;
    if (!(s > 0.0)) throw ComputeError("joint spectral amplitude vanishes on this grid");
    const double inv = 1.0 / std::sqrt(s);
    for (auto& v : m.f) v *= inv;
    m.normalized = true;

    // resolve the narrow ridge: require >= 8 idler samples across the
    // idler marginal FWHM
    Marginals mg = marginal_spectra(m);
    if (mg.idler_fwhm_rad_s / grid.idler_step < 8.0)
        throw ComputeError(
            "grid too coarse: fewer than 8 idler samples across the idler marginal FWHM");
    return m;
}

Marginals marginal_spectra(const JsaMatrix& m) {
    if (!m.normalized) throw std::domain_error("marginals require a normalized JSA");
    const auto& g = m.grid;
    Marginals out;
    out.signal.assign(g.n_signal, 0.0);
    out.idler.assign(g.n_idler, 0.0);
    for (int i = 0; i < g.n_signal; ++i) {
        for (int j = 0; j < g.n_idler; ++j) {
            const double p = std::norm(m.at(i, j));
            out.signal[i] += p * g.idler_step;
            out.idler[j] += p * g.signal_step;
        }
    }

    const auto ws = g.signal_axis();
    const auto wi = g.idler_axis();
    out.signal_fwhm_rad_s = fwhm_of_profile(ws, out.signal);
    out.idler_fwhm_rad_s = fwhm_of_profile(wi, out.idler);
    if (out.signal_fwhm_rad_s <= 0.0 || out.idler_fwhm_rad_s <= 0.0)
        throw ComputeError("grid too narrow: a marginal does not drop below half max inside it");

    const double ws0 = 0.5 * (ws.front() + ws.back());
    const double wi0 = 0.5 * (wi.front() + wi.back());
    out.signal_fwhm_nm = units::fwhm_angfreq_to_fwhm_wavelength(
                             units::angular_frequency_to_wavelength(ws0), out.signal_fwhm_rad_s) *
                         1e9;
    out.idler_fwhm_nm = units::fwhm_angfreq_to_fwhm_wavelength(
                            units::angular_frequency_to_wavelength(wi0), out.idler_fwhm_rad_s) *
                        1e9;
    return out;
}

FrequencyGrid default_grid(const units::GaussianSpectrum& pump, const crystal::CrystalConfig& cfg,
                           int n, double span_fwhms) {
    // first-pass width estimates from the group slopes
    const double w_p0 = pump.center_angfreq();
    const double w_deg = w_p0 / 2.0;
    const double ng_p = crystal::group_index(w_p0, crystal::Polarization::extraordinary,
                                             cfg.cut_angle_rad, cfg.material);
    const double ng_s =
        crystal::group_index(w_deg, crystal::Polarization::ordinary, cfg.cut_angle_rad, cfg.material);
    const double ng_i = crystal::group_index(w_deg, crystal::Polarization::extraordinary,
                                             cfg.cut_angle_rad, cfg.material);

    // FWHM of sinc^2(dk' nu L / 2) in nu; 4 * 1.3915574 = half-max span
    auto sinc_width = [&](double ng_other) {
        const double slope = std::abs(ng_p - ng_other) / kSpeedOfLight * cfg.length_m;
        return slope > 0.0 ? 5.5662311 / slope : 1e30;
    };
    const double pump_w = pump.fwhm_angfreq();
    const double est_s = std::min(pump_w, sinc_width(ng_s));
    const double est_i = std::min(pump_w, sinc_width(ng_i));

    // probe pass: wide grid, actual marginal widths; widen (keeping
    // sample density) if the estimates were low
    double span_mult = 8.0;
    int probe_n = 192;
    for (int attempt = 0; attempt < 3; ++attempt) {
        try {
            const FrequencyGrid probe = FrequencyGrid::centered(
                w_deg, span_mult * est_s, probe_n, w_deg, span_mult * est_i, probe_n);
            const JsaMatrix pm = build_jsa(probe, pump, cfg);
            const Marginals mg = marginal_spectra(pm);
            return FrequencyGrid::centered(w_deg, span_fwhms * mg.signal_fwhm_rad_s, n, w_deg,
                                           span_fwhms * mg.idler_fwhm_rad_s, n);
        } catch (const ComputeError&) {
            span_mult *= 2.0;
            probe_n *= 2;
        }
    }
    throw ComputeError("could not autosize a frequency grid for this configuration");
}

void export_density(const JsaMatrix& m, const std::string& base_path,
                    const std::vector<std::string>& header_lines) {
    struct Panel {
        const char* suffix;
        const char* kind;
    };
    const Panel panels[] = {{"_alpha.csv", "pump-envelope |alpha|^2"},
                            {"_phi.csv", "phase-matching |phi|^2"},
                            {"_jsa.csv", "joint-spectral |f|^2"}};

    const auto ws = m.grid.signal_axis();
    const auto wi = m.grid.idler_axis();
    std::vector<double> wi_nm(wi.size()), ws_nm(ws.size());
    for (std::size_t j = 0; j < wi.size(); ++j)
        wi_nm[j] = units::angular_frequency_to_wavelength(wi[j]) * 1e9;
    for (std::size_t i = 0; i < ws.size(); ++i)
        ws_nm[i] = units::angular_frequency_to_wavelength(ws[i]) * 1e9;

    for (int p = 0; p < 3; ++p) {
        const std::string path = base_path + panels[p].suffix;
        std::ofstream out(path);
        if (!out) throw IoError("cannot open " + path + " for writing");
        out << "# homsim density export: " << panels[p].kind << "\n";
        for (const auto& h : header_lines) out << "# " << h << "\n";
        out << "# rows=signal cols=idler\n";
        out << format_axis_comment("idler_axis_rad_s", wi) << "\n";
        out << format_axis_comment("idler_axis_nm", wi_nm) << "\n";
        out << "signal_rad_s,signal_nm,values\n";
        out.precision(12);
        for (int i = 0; i < m.grid.n_signal; ++i) {
            out << ws[i] << ',' << ws_nm[i];
            for (int j = 0; j < m.grid.n_idler; ++j) {
                const std::size_t idx = static_cast<std::size_t>(i) * m.grid.n_idler + j;
                double v = 0;
                if (p == 0)
                    v = m.alpha[idx] * m.alpha[idx];
                else if (p == 1)
                    v = std::norm(m.phi[idx]);
                else
                    v = std::norm(m.f[idx]);
                out << ',' << v;
            }
            out << '\n';
        }
        if (!out) throw IoError("write failed for " + path);
    }
}

DensityPanel read_density(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path);
    DensityPanel panel;
    std::string line;
    bool have_header = false;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (line[0] == '#') {
            const std::string tag = "# idler_axis_rad_s,";
            if (line.rfind(tag, 0) == 0) {
                const auto cells = csv::split_line(line.substr(2));
                for (std::size_t k = 1; k < cells.size(); ++k)
                    panel.idler_axis_rad_s.push_back(std::stod(cells[k]));
            }
            continue;
        }
        if (!have_header) {  // column header row
            have_header = true;
            continue;
        }
        const auto cells = csv::split_line(line);
        if (cells.size() < 3) throw IoError(path + ": malformed density row");
        panel.signal_axis_rad_s.push_back(std::stod(cells[0]));
        for (std::size_t k = 2; k < cells.size(); ++k)
            panel.values.push_back(std::stod(cells[k]));
    }
    if (panel.signal_axis_rad_s.empty() || panel.idler_axis_rad_s.empty())
        throw IoError(path + ": not a density export file");
    return panel;
}

}  // namespace homsim::jsa
