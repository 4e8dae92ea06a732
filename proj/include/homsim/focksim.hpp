#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <vector>

#include "homsim/units.hpp"

namespace homsim::focksim {

// Four bosonic modes: two spatial ports crossed with two spectral
// modes. Port a carries the heralded signal, port b the LO; spectral
// mode m is the signal's own spectral mode, mode o the LO component
// orthogonal to it.
enum Mode : int { kSignalMatched = 0, kSignalOrtho = 1, kLoMatched = 2, kLoOrtho = 3 };

// Dense state vector over occupation tuples (n_am, n_ao, n_bm, n_bo),
// each mode holding at most `cap` photons. Preparation fills at most
// n_max <= cap/2 per mode so a beam splitter can never overflow.
class FockState {
  public:
    explicit FockState(int cap);

    int cap() const { return cap_; }
    int dim() const { return dim_; }  // cap + 1

    std::complex<double>& at(int n_am, int n_ao, int n_bm, int n_bo);
    const std::complex<double>& at(int n_am, int n_ao, int n_bm, int n_bo) const;

    double norm() const;
    void normalize();

    const std::vector<std::complex<double>>& amplitudes() const { return amp_; }
    std::vector<std::complex<double>>& amplitudes() { return amp_; }

  private:
    int cap_;
    int dim_;
    std::vector<std::complex<double>> amp_;
};

enum class PairStatistics { single_pair, thermal };

struct SourceConfig {
    double pair_probability = 0.01;                   // per pulse
    PairStatistics statistics = PairStatistics::single_pair;
    double herald_efficiency = 1.0;                   // idler arm
    double lo_mean_photons = 0.02;                    // mu per pulse
    std::complex<double> overlap = {0.0, 0.0};        // zeta(tau)
    int n_max = 0;                                    // photons per mode; 0 = auto
};

// Threshold (click / no-click) detector:
// P(click | n photons) = 1 - (1-eta)^n (1-dark_prob).
struct DetectorModel {
    double efficiency = 1.0;
    double dark_prob = 0.0;
    double click_probability(int n_photons) const;
};

struct Detectors {
    DetectorModel d1;      // beam splitter output port a
    DetectorModel d2;      // beam splitter output port b
    DetectorModel herald;  // idler arm
};

// |zeta(tau)|^2 = [2 s_s s_L/(s_s^2+s_L^2)] exp(-(s_s^2 s_L^2 tau^2 + 4 delta^2)
//                                               / (2 (s_s^2+s_L^2)))
// so that a (1,1)-photon beam-splitter coincidence reproduces the
// analytic Gaussian-spectra coincidence dip. Phase fixed to 0: the LO
// carries no phase reference relative to the down-conversion photons
// and every click probability is insensitive to it.
std::complex<double> mode_overlap(const units::GaussianSpectrum& signal,
                                  const units::GaussianSpectrum& lo,
                                  double delta_rad_s, double tau_s);

struct EnsembleComponent {
    double weight;      // prior probability of this pulse class
    int idler_photons;  // herald-arm photon number
    FockState state;
};

// Signal arm: |n> in mode a_m with the selected pair statistics.
// LO arm: coherent state split exactly into matched / orthogonal
// spectral components with amplitudes zeta*sqrt(mu) and
// sqrt((1-|zeta|^2) mu). Truncation leakage above n_max must stay
// below 1e-6 or preparation fails; n_max = 0 selects the smallest
// adequate truncation automatically.
std::vector<EnsembleComponent> prepare_input(const SourceConfig& source, bool heralded);

// Two-port beam-splitter unitary with transmittance T, applied
// identically to the matched and orthogonal spectral mode pairs.
void beam_splitter(FockState& state, double transmittance);

// Exact probabilities of the 8 click patterns over (herald, D1, D2).
struct ClickProbabilities {
    // index = herald*4 + d1*2 + d2
    std::array<double, 8> p{};
    double sum() const;
    double at(bool herald, bool d1, bool d2) const { return p[(herald ? 4 : 0) + (d1 ? 2 : 0) + (d2 ? 1 : 0)]; }
};

ClickProbabilities click_probabilities(const std::vector<EnsembleComponent>& ensemble,
                                       const Detectors& det);

// P(herald AND D1 AND D2) for the source as configured (overlap field
// already set, e.g. via mode_overlap at some delay).
double threefold_probability(const SourceConfig& source, const Detectors& det);

// P(D1 AND D2) with no heralding condition; requires thermal signal
// statistics (the unheralded signal arm is a thermal state).
double twofold_probability(const SourceConfig& source, const Detectors& det);

struct InterferenceSetup {
    SourceConfig source;
    Detectors detectors;
    units::GaussianSpectrum signal{830.0, 9.3};
    units::GaussianSpectrum lo{830.0, 7.1};
    double delta_rad_s = 0.0;
};

double threefold_at_delay(const InterferenceSetup& setup, double tau_s);
double twofold_at_delay(const InterferenceSetup& setup, double tau_s);

struct CountRecord {
    struct Row {
        double delay_s = 0;
        double path_um = 0;
        std::uint64_t pulses = 0;
        std::uint64_t singles_idler = 0;
        std::uint64_t singles_d1 = 0;
        std::uint64_t singles_d2 = 0;
        std::uint64_t doubles_d1d2 = 0;
        std::uint64_t triples = 0;
    };
    std::uint64_t seed = 0;
    std::vector<Row> rows;
};

// Per-delay click sampling from the exact pattern probabilities. Each
// delay point owns an RNG stream derived from (seed, delay index), so
// the record is bit-identical for any thread count.
CountRecord simulate_counts(const InterferenceSetup& setup, const std::vector<double>& delays_s,
                            std::uint64_t pulses_per_point, std::uint64_t seed);

}  // namespace homsim::focksim
