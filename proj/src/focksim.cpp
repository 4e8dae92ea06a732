#include "homsim/focksim.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "homsim/errors.hpp"
#include "homsim/hom.hpp"
#include "homsim/parallel.hpp"
#include "homsim/rng.hpp"

namespace homsim::focksim {

namespace {

constexpr double kLeakageLimit = 1e-6;
constexpr int kDefaultNmax = 4;
constexpr int kHardCapNmax = 12;

double factorial_d(int n) {
    double f = 1.0;
    for (int k = 2; k <= n; ++k) f *= k;
    return f;
}

double binomial_d(int n, int k) {
    double b = 1.0;
    for (int j = 1; j <= k; ++j) b = b * (n - k + j) / j;
    return b;
}

// Poisson(mean) mass at 0..nmax and its tail beyond nmax.
double poisson_tail(double mean, int nmax) {
    if (mean <= 0.0) return 0.0;
    double term = std::exp(-mean);
    double cum = term;
    for (int n = 1; n <= nmax; ++n) {
        term *= mean / n;
        cum += term;
    }
    return std::max(0.0, 1.0 - cum);
}

double thermal_tail(double mean, int nmax) {
    if (mean <= 0.0) return 0.0;
    return std::pow(mean / (1.0 + mean), nmax + 1);
}

void validate(const SourceConfig& s) {
    if (s.pair_probability < 0.0 || s.pair_probability > 0.2)
        throw std::domain_error("pair probability must lie in [0, 0.2]");
    if (s.lo_mean_photons < 0.0)
        throw std::domain_error("LO mean photon number must be non-negative");
    if (std::abs(s.overlap) > 1.0 + 1e-12)
        throw std::domain_error("spectral overlap amplitude must lie in the unit disc");
    if (s.herald_efficiency < 0.0 || s.herald_efficiency > 1.0)
        throw std::domain_error("herald efficiency must lie in [0, 1]");
    if (s.n_max < 0 || s.n_max > kHardCapNmax)
        throw std::domain_error("n_max must lie in [0, 12]");
}

// Smallest per-mode truncation keeping preparation leakage under the
// limit, honoring an explicit request if one was made.
int resolve_nmax(const SourceConfig& s) {
    const double z2 = std::norm(s.overlap);
    const double mu_m = z2 * s.lo_mean_photons;
    const double mu_o = (1.0 - z2) * s.lo_mean_photons;
    auto leakage = [&](int n) {
        double leak = poisson_tail(mu_m, n) + poisson_tail(mu_o, n);
        if (s.statistics == PairStatistics::thermal)
            leak += thermal_tail(s.pair_probability, n);
        return leak;
    };
    if (s.n_max > 0) {
        if (leakage(s.n_max) >= kLeakageLimit)
            throw ComputeError(
                "truncation leakage exceeds 1e-6 at n_max=" + std::to_string(s.n_max) +
                "; increase n_max or reduce the photon flux");
        return s.n_max;
    }
    for (int n = kDefaultNmax; n <= kHardCapNmax; ++n)
        if (leakage(n) < kLeakageLimit) return n;
    throw ComputeError("truncation leakage exceeds 1e-6 even at n_max=12");
}

std::vector<std::complex<double>> coherent_amplitudes(std::complex<double> beta, int nmax) {
    std::vector<std::complex<double>> v(nmax + 1);
    const double pref = std::exp(-0.5 * std::norm(beta));
    std::complex<double> num = 1.0;
    for (int n = 0; n <= nmax; ++n) {
        v[n] = pref * num / std::sqrt(factorial_d(n));
        num *= beta;
    }
    return v;
}

// <m, n-m | U(T) | k, n-k> within the n-photon sector of one mode pair;
// U: a+ -> r a+ + t b+, b+ -> t a+ - r b+ with r = sqrt(T), t = sqrt(1-T).
std::vector<std::vector<double>> sector_matrices(int max_total, double T) {
    const double r = std::sqrt(T);
    const double t = std::sqrt(1.0 - T);
    std::vector<std::vector<double>> mats(max_total + 1);
    for (int n = 0; n <= max_total; ++n) {
        auto& A = mats[n];
        A.assign(static_cast<std::size_t>(n + 1) * (n + 1), 0.0);
        for (int ka = 0; ka <= n; ++ka) {  // input (ka, n-ka)
            const int kb = n - ka;
            const double in_norm = std::sqrt(factorial_d(ka) * factorial_d(kb));
            for (int j = 0; j <= ka; ++j) {
                for (int l = 0; l <= kb; ++l) {
                    const int m = j + l;  // output port-a count
                    const double amp = binomial_d(ka, j) * binomial_d(kb, l) *
                                       std::pow(r, j) * std::pow(t, ka - j) * std::pow(t, l) *
                                       std::pow(-r, kb - l);
                    A[static_cast<std::size_t>(m) * (n + 1) + ka] +=
                        amp * std::sqrt(factorial_d(m) * factorial_d(n - m)) / in_norm;
                }
            }
        }
    }
    return mats;
}

}  // namespace

FockState::FockState(int cap) : cap_(cap), dim_(cap + 1) {
    if (cap < 0) throw std::domain_error("negative Fock capacity");
    amp_.assign(static_cast<std::size_t>(dim_) * dim_ * dim_ * dim_, {0.0, 0.0});
}

std::complex<double>& FockState::at(int n_am, int n_ao, int n_bm, int n_bo) {
    return amp_[((static_cast<std::size_t>(n_am) * dim_ + n_ao) * dim_ + n_bm) * dim_ + n_bo];
}

const std::complex<double>& FockState::at(int n_am, int n_ao, int n_bm, int n_bo) const {
    return amp_[((static_cast<std::size_t>(n_am) * dim_ + n_ao) * dim_ + n_bm) * dim_ + n_bo];
}

double FockState::norm() const {
    double s = 0.0;
    for (const auto& a : amp_) s += std::norm(a);
    return std::sqrt(s);
}

void FockState::normalize() {
    const double n = norm();
    if (!(n > 0.0)) throw ComputeError("cannot normalize a zero state");
    const double inv = 1.0 / n;
    for (auto& a : amp_) a *= inv;
}

double DetectorModel::click_probability(int n_photons) const {
    return 1.0 - std::pow(1.0 - efficiency, n_photons) * (1.0 - dark_prob);
}

std::complex<double> mode_overlap(const units::GaussianSpectrum& signal,
                                  const units::GaussianSpectrum& lo, double delta_rad_s,
                                  double tau_s) {
    const double ss = hom::eq_bandwidth(signal);
    const double sl = hom::eq_bandwidth(lo);
    const double s2 = ss * ss;
    const double l2 = sl * sl;
    const double z2 = 2.0 * ss * sl / (s2 + l2) *
                      std::exp(-(s2 * l2 * tau_s * tau_s + 4.0 * delta_rad_s * delta_rad_s) /
                               (2.0 * (s2 + l2)));
    return {std::sqrt(z2), 0.0};
}

std::vector<EnsembleComponent> prepare_input(const SourceConfig& source, bool heralded) {
    (void)heralded;  // the ensemble is identical; heralding is a detection-side condition
    validate(source);
    const int nmax = resolve_nmax(source);
    const int cap = 2 * nmax;

    const double z2 = std::norm(source.overlap);
    const std::complex<double> beta_m = source.overlap * std::sqrt(source.lo_mean_photons);
    const std::complex<double> beta_o = std::sqrt(std::max(0.0, (1.0 - z2) * source.lo_mean_photons));
    const auto bm = coherent_amplitudes(beta_m, nmax);
    const auto bo = coherent_amplitudes(beta_o, nmax);

    std::vector<std::pair<double, int>> pair_classes;  // (weight, pair count)
    const double p = source.pair_probability;
    if (source.statistics == PairStatistics::single_pair) {
        pair_classes = {{1.0 - p, 0}, {p, 1}};
    } else {
        for (int n = 0; n <= nmax; ++n)
            pair_classes.emplace_back(std::pow(p, n) / std::pow(1.0 + p, n + 1), n);
        // truncated thermal weights renormalized over the kept classes
        double w = 0.0;
        for (auto& c : pair_classes) w += c.first;
        for (auto& c : pair_classes) c.first /= w;
    }

    std::vector<EnsembleComponent> ensemble;
    ensemble.reserve(pair_classes.size());
    for (const auto& [weight, n_pairs] : pair_classes) {
        if (weight <= 0.0) continue;
        FockState st(cap);
        for (int nm = 0; nm <= nmax; ++nm)
            for (int no = 0; no <= nmax; ++no) st.at(n_pairs, 0, nm, no) = bm[nm] * bo[no];
        st.normalize();  // truncation renormalization
        ensemble.push_back({weight, n_pairs, std::move(st)});
    }
    return ensemble;
}

void beam_splitter(FockState& state, double transmittance) {
    if (transmittance < 0.0 || transmittance > 1.0)
        throw std::domain_error("beam splitter transmittance must lie in [0, 1]");
    const int D = state.dim();
    const int cap = state.cap();
    const auto mats = sector_matrices(2 * cap, transmittance);

    // overflow guard: a populated pair sector beyond cap cannot be
    // represented after mixing
    auto check_sector = [&](int total, double mag) {
        if (total > cap && mag > 1e-300)
            throw ComputeError("beam splitter would overflow the Fock capacity");
    };

    std::vector<std::complex<double>> in(D), out(D);

    // pair (a_m, b_m): fixed (n_ao, n_bo)
    for (int ao = 0; ao < D; ++ao) {
        for (int bo = 0; bo < D; ++bo) {
            bool any = false;
            for (int am = 0; am < D && !any; ++am)
                for (int bm = 0; bm < D; ++bm)
                    if (std::norm(state.at(am, ao, bm, bo)) > 0.0) {
                        any = true;
                        break;
                    }
            if (!any) continue;
            for (int n = 0; n <= 2 * cap; ++n) {
                const int klo = std::max(0, n - cap);
                const int khi = std::min(n, cap);
                if (klo > khi) continue;
                double mag = 0.0;
                for (int k = klo; k <= khi; ++k) {
                    in[k] = state.at(k, ao, n - k, bo);
                    mag += std::norm(in[k]);
                }
                if (mag == 0.0) continue;
                check_sector(n, mag);
                const auto& A = mats[n];
                for (int m = klo; m <= khi; ++m) {
                    std::complex<double> acc = 0.0;
                    for (int k = klo; k <= khi; ++k)
                        acc += A[static_cast<std::size_t>(m) * (n + 1) + k] * in[k];
                    out[m] = acc;
                }
                for (int m = klo; m <= khi; ++m) state.at(m, ao, n - m, bo) = out[m];
            }
        }
    }

    // pair (a_o, b_o): fixed (n_am, n_bm)
    for (int am = 0; am < D; ++am) {
        for (int bm = 0; bm < D; ++bm) {
            bool any = false;
            for (int ao = 0; ao < D && !any; ++ao)
                for (int bo = 0; bo < D; ++bo)
                    if (std::norm(state.at(am, ao, bm, bo)) > 0.0) {
                        any = true;
                        break;
                    }
            if (!any) continue;
            for (int n = 0; n <= 2 * cap; ++n) {
                const int klo = std::max(0, n - cap);
                const int khi = std::min(n, cap);
                if (klo > khi) continue;
                double mag = 0.0;
                for (int k = klo; k <= khi; ++k) {
                    in[k] = state.at(am, k, bm, n - k);
                    mag += std::norm(in[k]);
                }
                if (mag == 0.0) continue;
                check_sector(n, mag);
                const auto& A = mats[n];
                for (int m = klo; m <= khi; ++m) {
                    std::complex<double> acc = 0.0;
                    for (int k = klo; k <= khi; ++k)
                        acc += A[static_cast<std::size_t>(m) * (n + 1) + k] * in[k];
                    out[m] = acc;
                }
                for (int m = klo; m <= khi; ++m) state.at(am, m, bm, n - m) = out[m];
            }
        }
    }
}

double ClickProbabilities::sum() const {
    double s = 0.0;
    for (double v : p) s += v;
    return s;
}

ClickProbabilities click_probabilities(const std::vector<EnsembleComponent>& ensemble,
                                       const Detectors& det) {
    ClickProbabilities out;
    if (ensemble.empty()) throw std::domain_error("empty source ensemble");
    const int D = ensemble.front().state.dim();
    const int max_port = 2 * (D - 1);

    std::vector<double> c1(max_port + 1), c2(max_port + 1);
    for (int n = 0; n <= max_port; ++n) {
        c1[n] = det.d1.click_probability(n);
        c2[n] = det.d2.click_probability(n);
    }

    for (const auto& comp : ensemble) {
        // port-count joint distribution after whatever unitaries were applied
        double p11 = 0.0, p10 = 0.0, p01 = 0.0, p00 = 0.0;
        const auto& st = comp.state;
        for (int am = 0; am < D; ++am)
            for (int ao = 0; ao < D; ++ao)
                for (int bm = 0; bm < D; ++bm)
                    for (int bo = 0; bo < D; ++bo) {
                        const double pr = std::norm(st.at(am, ao, bm, bo));
                        if (pr == 0.0) continue;
                        const double q1 = c1[am + ao];
                        const double q2 = c2[bm + bo];
                        p11 += pr * q1 * q2;
                        p10 += pr * q1 * (1.0 - q2);
                        p01 += pr * (1.0 - q1) * q2;
                        p00 += pr * (1.0 - q1) * (1.0 - q2);
                    }
        const double ph = det.herald.click_probability(comp.idler_photons);
        const double w = comp.weight;
        out.p[0] += w * (1.0 - ph) * p00;
        out.p[1] += w * (1.0 - ph) * p01;
        out.p[2] += w * (1.0 - ph) * p10;
        out.p[3] += w * (1.0 - ph) * p11;
        out.p[4] += w * ph * p00;
        out.p[5] += w * ph * p01;
        out.p[6] += w * ph * p10;
        out.p[7] += w * ph * p11;
    }
    return out;
}

namespace {

ClickProbabilities patterns_for(const SourceConfig& source, const Detectors& det) {
    auto ensemble = prepare_input(source, true);
    for (auto& comp : ensemble) beam_splitter(comp.state, 0.5);
    return click_probabilities(ensemble, det);
}

}  // namespace

double threefold_probability(const SourceConfig& source, const Detectors& det) {
    return patterns_for(source, det).at(true, true, true);
}

double twofold_probability(const SourceConfig& source, const Detectors& det) {
    if (source.statistics != PairStatistics::thermal)
        throw std::domain_error(
            "two-fold (unheralded) probabilities require thermal signal statistics");
    const auto p = patterns_for(source, det);
    return p.at(true, true, true) + p.at(false, true, true);
}

double threefold_at_delay(const InterferenceSetup& setup, double tau_s) {
    SourceConfig src = setup.source;
    src.overlap = mode_overlap(setup.signal, setup.lo, setup.delta_rad_s, tau_s);
    return threefold_probability(src, setup.detectors);
}

double twofold_at_delay(const InterferenceSetup& setup, double tau_s) {
    SourceConfig src = setup.source;
    src.overlap = mode_overlap(setup.signal, setup.lo, setup.delta_rad_s, tau_s);
    return twofold_probability(src, setup.detectors);
}

CountRecord simulate_counts(const InterferenceSetup& setup, const std::vector<double>& delays_s,
                            std::uint64_t pulses_per_point, std::uint64_t seed) {
    if (pulses_per_point < 1 && !delays_s.empty())
        throw std::domain_error("pulses_per_point must be at least 1");
    CountRecord rec;
    rec.seed = seed;
    rec.rows.resize(delays_s.size());

    parallel::parallel_for(delays_s.size(), [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
            const double tau = delays_s[i];
            SourceConfig src = setup.source;
            src.overlap = mode_overlap(setup.signal, setup.lo, setup.delta_rad_s, tau);
            const ClickProbabilities cp = patterns_for(src, setup.detectors);

            double cum[8];
            double acc = 0.0;
            for (int k = 0; k < 8; ++k) {
                acc += cp.p[k];
                cum[k] = acc;
            }
            cum[7] = std::max(cum[7], 1.0);  // guard the final bin against round-off

            rng::Stream stream(rng::stream_seed(seed, i));
            std::uint64_t counts[8] = {0, 0, 0, 0, 0, 0, 0, 0};
            for (std::uint64_t pulse = 0; pulse < pulses_per_point; ++pulse) {
                const double u = stream.uniform01();
                int k = 0;
                while (k < 7 && u >= cum[k]) ++k;
                ++counts[k];
            }

            CountRecord::Row& row = rec.rows[i];
            row.delay_s = tau;
            row.path_um = units::delay_to_path_length(tau) * 1e6;
            row.pulses = pulses_per_point;
            for (int k = 0; k < 8; ++k) {
                const bool h = k & 4, d1 = k & 2, d2 = k & 1;
                if (h) row.singles_idler += counts[k];
                if (d1) row.singles_d1 += counts[k];
                if (d2) row.singles_d2 += counts[k];
                if (d1 && d2) row.doubles_d1d2 += counts[k];
                if (h && d1 && d2) row.triples += counts[k];
            }
        }
    });
    return rec;
}

}  // namespace homsim::focksim
