#include "homsim/config.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "homsim/errors.hpp"

namespace homsim::config {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t");
    return s.substr(b, e - b + 1);
}

}  // namespace

KeyValueFile KeyValueFile::parse_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_text(buf.str(), path);
}

KeyValueFile KeyValueFile::parse_text(const std::string& text, const std::string& origin) {
    KeyValueFile kv;
    kv.origin_ = origin;
    std::istringstream in(text);
    std::string line;
    std::string section;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        // strip comments
        for (const char marker : {'#', ';'}) {
            const auto pos = line.find(marker);
            if (pos != std::string::npos) line.erase(pos);
        }
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw ConfigError(origin + ":" + std::to_string(lineno) + ": malformed section");
            section = trim(line.substr(1, line.size() - 2));
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError(origin + ":" + std::to_string(lineno) + ": expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty())
            throw ConfigError(origin + ":" + std::to_string(lineno) + ": empty key");
        if (!kv.sections_[section].emplace(key, value).second)
            throw ConfigError(origin + ":" + std::to_string(lineno) + ": duplicate key '" + key +
                              "' in section [" + section + "]");
    }
    return kv;
}

bool KeyValueFile::has(const std::string& section, const std::string& key) const {
    const auto s = sections_.find(section);
    return s != sections_.end() && s->second.count(key) > 0;
}

std::string KeyValueFile::get_string(const std::string& section, const std::string& key) const {
    const auto s = sections_.find(section);
    if (s == sections_.end() || !s->second.count(key))
        throw ConfigError(origin_ + ": missing required key " + section + "." + key);
    return s->second.at(key);
}

std::string KeyValueFile::get_string(const std::string& section, const std::string& key,
                                     const std::string& fallback) const {
    return has(section, key) ? get_string(section, key) : fallback;
}

double KeyValueFile::get_double(const std::string& section, const std::string& key) const {
    const std::string v = get_string(section, key);
    try {
        std::size_t used = 0;
        const double x = std::stod(v, &used);
        if (used != v.size()) throw std::invalid_argument(v);
        return x;
    } catch (const std::exception&) {
        throw ConfigError(origin_ + ": " + section + "." + key + " is not a number: '" + v + "'");
    }
}

double KeyValueFile::get_double(const std::string& section, const std::string& key,
                                double fallback) const {
    return has(section, key) ? get_double(section, key) : fallback;
}

long long KeyValueFile::get_int(const std::string& section, const std::string& key,
                                long long fallback) const {
    if (!has(section, key)) return fallback;
    const std::string v = get_string(section, key);
    try {
        std::size_t used = 0;
        const long long x = std::stoll(v, &used);
        if (used != v.size()) throw std::invalid_argument(v);
        return x;
    } catch (const std::exception&) {
        throw ConfigError(origin_ + ": " + section + "." + key + " is not an integer: '" + v + "'");
    }
}

std::vector<double> ScanConfig::delays_s() const {
    std::vector<double> out;
    out.reserve(points);
    for (const double p : positions_um())
        out.push_back(units::path_length_to_delay(p * 1e-6));
    return out;
}

std::vector<double> ScanConfig::positions_um() const {
    std::vector<double> out;
    out.reserve(points);
    if (points == 1) {
        out.push_back(0.5 * (path_min_um + path_max_um));
        return out;
    }
    const double step = (path_max_um - path_min_um) / (points - 1);
    for (int i = 0; i < points; ++i) out.push_back(path_min_um + i * step);
    return out;
}

RunConfig RunConfig::preset_paper() {
    RunConfig c;
    c.material = crystal::SellmeierSet::kdp();
    c.crystal_length_m = 15e-3;
    c.cut_angle_deg = -1.0;  // solve degenerate phase matching from the pump
    c.pump = units::GaussianSpectrum(415.0, 2.3);
    c.signal = units::GaussianSpectrum(830.0, 9.3);
    c.lo = units::GaussianSpectrum(830.0, 7.1);
    c.grid = GridConfig{256, 4.0};
    c.source.pair_probability = 0.01;
    c.source.statistics = focksim::PairStatistics::single_pair;
    c.source.lo_mean_photons = 0.02;
    c.scan = ScanConfig{-150.0, 150.0, 41, 100000, 42};
    c.validate();
    return c;
}

RunConfig RunConfig::load(const std::string& path) {
    const KeyValueFile kv = KeyValueFile::parse_file(path);
    RunConfig c = preset_paper();

    c.material_file = kv.get_string("material", "file", "");
    if (!c.material_file.empty()) {
        if (!std::filesystem::exists(c.material_file))
            throw ConfigError("material file does not exist: " + c.material_file);
        c.material = crystal::SellmeierSet::load(c.material_file);
    }

    c.crystal_length_m = kv.get_double("crystal", "length_mm", 15.0) * 1e-3;
    const std::string theta = kv.get_string("crystal", "theta_deg", "solve");
    if (theta == "solve") {
        c.cut_angle_deg = -1.0;
    } else {
        c.cut_angle_deg = kv.get_double("crystal", "theta_deg");
    }

    auto spectrum = [&kv](const std::string& section, const units::GaussianSpectrum& fb) {
        try {
            return units::GaussianSpectrum(kv.get_double(section, "center_nm", fb.center_nm()),
                                           kv.get_double(section, "fwhm_nm", fb.fwhm_nm()));
        } catch (const std::domain_error& e) {
            throw ConfigError("section [" + section + "]: " + e.what());
        }
    };
    c.pump = spectrum("pump", c.pump);
    c.signal = spectrum("signal", c.signal);
    c.lo = spectrum("lo", c.lo);
    c.center_offset_rad_s = kv.get_double("lo", "delta_rad_s", 0.0);

    c.grid.n = static_cast<int>(kv.get_int("grid", "n", c.grid.n));
    c.grid.span_fwhms = kv.get_double("grid", "span_fwhms", c.grid.span_fwhms);

    c.source.pair_probability =
        kv.get_double("source", "pair_probability", c.source.pair_probability);
    const std::string stats = kv.get_string("source", "statistics", "single");
    if (stats == "single")
        c.source.statistics = focksim::PairStatistics::single_pair;
    else if (stats == "thermal")
        c.source.statistics = focksim::PairStatistics::thermal;
    else
        throw ConfigError("source.statistics must be 'single' or 'thermal', got '" + stats + "'");
    c.source.herald_efficiency =
        kv.get_double("source", "herald_efficiency", c.source.herald_efficiency);
    c.source.lo_mean_photons = kv.get_double("source", "lo_mean_photons", c.source.lo_mean_photons);
    c.source.n_max = static_cast<int>(kv.get_int("source", "n_max", c.source.n_max));

    auto detector = [&kv](const std::string& prefix, focksim::DetectorModel fb) {
        focksim::DetectorModel d;
        d.efficiency = kv.get_double("detectors", "efficiency_" + prefix, fb.efficiency);
        d.dark_prob = kv.get_double("detectors", "dark_prob_" + prefix, fb.dark_prob);
        return d;
    };
    c.detectors.d1 = detector("d1", c.detectors.d1);
    c.detectors.d2 = detector("d2", c.detectors.d2);
    c.detectors.herald = detector("herald", c.detectors.herald);

    c.scan.path_min_um = kv.get_double("scan", "path_min_um", c.scan.path_min_um);
    c.scan.path_max_um = kv.get_double("scan", "path_max_um", c.scan.path_max_um);
    c.scan.points = static_cast<int>(kv.get_int("scan", "points", c.scan.points));
    c.scan.pulses_per_point = static_cast<std::uint64_t>(
        kv.get_int("scan", "pulses_per_point", static_cast<long long>(c.scan.pulses_per_point)));
    c.scan.seed =
        static_cast<std::uint64_t>(kv.get_int("scan", "seed", static_cast<long long>(c.scan.seed)));

    c.validate();
    return c;
}

void RunConfig::validate() const {
    auto fail = [](const std::string& msg) { throw ConfigError("config validation: " + msg); };
    if (!(crystal_length_m > 0.0)) fail("crystal length must be positive");
    if (cut_angle_deg >= 0.0 && !(cut_angle_deg > 0.0 && cut_angle_deg < 90.0))
        fail("cut angle must lie in (0, 90) degrees");
    if (!(material.lambda_min_nm > 0.0) || !(material.lambda_max_nm > material.lambda_min_nm))
        fail("material wavelength range is invalid");
    if (grid.n < 16 || grid.n > 4096) fail("grid.n must lie in [16, 4096]");
    if (!(grid.span_fwhms >= 2.0 && grid.span_fwhms <= 32.0))
        fail("grid.span_fwhms must lie in [2, 32]");
    if (source.pair_probability < 0.0 || source.pair_probability > 0.2)
        fail("source.pair_probability must lie in [0, 0.2]");
    if (source.lo_mean_photons < 0.0) fail("source.lo_mean_photons must be non-negative");
    if (source.n_max < 0 || source.n_max > 12) fail("source.n_max must lie in [0, 12]");
    for (const auto* d : {&detectors.d1, &detectors.d2, &detectors.herald}) {
        if (d->efficiency < 0.0 || d->efficiency > 1.0)
            fail("detector efficiency must lie in [0, 1]");
        if (d->dark_prob < 0.0 || d->dark_prob >= 1.0) fail("dark probability must lie in [0, 1)");
    }
    if (source.herald_efficiency < 0.0 || source.herald_efficiency > 1.0)
        fail("herald efficiency must lie in [0, 1]");
    if (scan.points < 1) fail("scan.points must be at least 1");
    if (!(scan.path_max_um >= scan.path_min_um)) fail("scan path range is inverted");
    if (scan.pulses_per_point < 1) fail("scan.pulses_per_point must be at least 1");
}

crystal::CrystalConfig RunConfig::crystal_config() const {
    return {material, crystal_length_m, resolved_cut_angle_rad()};
}

double RunConfig::resolved_cut_angle_rad() const {
    if (cut_angle_deg > 0.0) return cut_angle_deg * M_PI / 180.0;
    const double pump_m = pump.center_nm() * 1e-9;
    return crystal::phasematch_angle(pump_m, 2.0 * pump_m, material);
}

std::string RunConfig::describe() const {
    std::ostringstream os;
    os.precision(12);
    os << "material=" << material.name << ";material_file=" << material_file
       << ";length_m=" << crystal_length_m << ";theta_deg=" << cut_angle_deg
       << ";pump=" << pump.center_nm() << '/' << pump.fwhm_nm()
       << ";signal=" << signal.center_nm() << '/' << signal.fwhm_nm()
       << ";lo=" << lo.center_nm() << '/' << lo.fwhm_nm() << ";delta=" << center_offset_rad_s
       << ";grid=" << grid.n << '/' << grid.span_fwhms
       << ";p=" << source.pair_probability
       << ";stats=" << (source.statistics == focksim::PairStatistics::thermal ? "thermal" : "single")
       << ";eta_h=" << source.herald_efficiency << ";mu=" << source.lo_mean_photons
       << ";n_max=" << source.n_max << ";det=" << detectors.d1.efficiency << '/'
       << detectors.d1.dark_prob << '/' << detectors.d2.efficiency << '/' << detectors.d2.dark_prob
       << '/' << detectors.herald.efficiency << '/' << detectors.herald.dark_prob
       << ";scan=" << scan.path_min_um << '/' << scan.path_max_um << '/' << scan.points << '/'
       << scan.pulses_per_point << ";seed=" << scan.seed;
    return os.str();
}

std::uint64_t RunConfig::hash() const {
    const std::string text = describe();
    std::uint64_t h = 1469598103934665603ull;  // FNV-1a 64
    for (unsigned char c : text) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

}  // namespace homsim::config
