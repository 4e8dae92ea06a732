#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "homsim/crystal.hpp"
#include "homsim/focksim.hpp"
#include "homsim/units.hpp"

namespace homsim::config {

// Minimal sectioned key-value format:
//   [section]
//   key = value        # trailing comments allowed
// Lines starting with '#' or ';' are comments. Keys are unique per
// section; values are free text up to the comment marker.
class KeyValueFile {
  public:
    static KeyValueFile parse_file(const std::string& path);
    static KeyValueFile parse_text(const std::string& text, const std::string& origin);

    bool has(const std::string& section, const std::string& key) const;
    std::string get_string(const std::string& section, const std::string& key) const;
    std::string get_string(const std::string& section, const std::string& key,
                           const std::string& fallback) const;
    double get_double(const std::string& section, const std::string& key) const;
    double get_double(const std::string& section, const std::string& key, double fallback) const;
    long long get_int(const std::string& section, const std::string& key, long long fallback) const;

    const std::string& origin() const { return origin_; }

  private:
    std::string origin_;
    std::map<std::string, std::map<std::string, std::string>> sections_;
};

struct ScanConfig {
    double path_min_um = -150.0;
    double path_max_um = 150.0;
    int points = 41;
    std::uint64_t pulses_per_point = 100000;
    std::uint64_t seed = 42;

    std::vector<double> delays_s() const;
    std::vector<double> positions_um() const;
};

struct GridConfig {
    int n = 256;
    double span_fwhms = 4.0;
};

// Everything a subcommand needs, validated before any computation.
struct RunConfig {
    crystal::SellmeierSet material;
    std::string material_file;  // empty = built-in
    double crystal_length_m = 15e-3;
    // negative = solve the degenerate phase-matching angle from the pump
    double cut_angle_deg = -1.0;

    units::GaussianSpectrum pump{415.0, 2.3};
    units::GaussianSpectrum signal{830.0, 9.3};
    units::GaussianSpectrum lo{830.0, 7.1};
    double center_offset_rad_s = 0.0;  // delta, signal minus LO

    GridConfig grid;
    focksim::SourceConfig source;
    focksim::Detectors detectors;
    ScanConfig scan;

    // Reference configuration: 415/2.3 nm pump, 15 mm KDP cut for
    // degenerate phase matching, 9.3/7.1 nm signal/LO spectra, weak LO.
    static RunConfig preset_paper();
    static RunConfig load(const std::string& path);

    crystal::CrystalConfig crystal_config() const;
    double resolved_cut_angle_rad() const;

    // FNV-1a over a canonical serialization; stamped into output files.
    std::uint64_t hash() const;
    std::string describe() const;

  private:
    void validate() const;
};

}  // namespace homsim::config
