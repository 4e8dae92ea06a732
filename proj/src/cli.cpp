#include "homsim/cli.hpp"

#include <CLI11.hpp>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "homsim/config.hpp"
#include "homsim/csv.hpp"
#include "homsim/errors.hpp"
#include "homsim/fit.hpp"
#include "homsim/focksim.hpp"
#include "homsim/hom.hpp"
#include "homsim/jsa.hpp"
#include "homsim/refchecks.hpp"
#include "homsim/schmidt.hpp"
#include "homsim/svgplot.hpp"
#include "homsim/units.hpp"

namespace homsim::cli {

namespace {

namespace fs = std::filesystem;

struct CommonOpts {
    std::string config_path;
    std::string preset;
    std::string out_dir = ".";
    std::uint64_t seed = 0;
    bool seed_set = false;
    int grid_n = 0;
    bool svg = false;
};

void add_common(CLI::App* cmd, CommonOpts& o, bool with_grid = false) {
    cmd->add_option("--config", o.config_path, "configuration file (key-value sections)");
    cmd->add_option("--preset", o.preset, "named preset; 'paper' is the reference scenario")
        ->check(CLI::IsMember({"paper"}));
    cmd->add_option("--out", o.out_dir, "output directory")->capture_default_str();
    cmd->add_option("--seed", o.seed, "override the scan seed")
        ->each([&o](const std::string&) { o.seed_set = true; });
    if (with_grid) cmd->add_option("--grid", o.grid_n, "override the grid point count per axis");
    cmd->add_flag("--svg", o.svg, "also render an SVG plot of the main output");
}

config::RunConfig load_config(const CommonOpts& o) {
    config::RunConfig cfg =
        o.config_path.empty() ? config::RunConfig::preset_paper()
                              : config::RunConfig::load(o.config_path);
    if (!o.preset.empty() && !o.config_path.empty())
        throw ConfigError("--preset and --config are mutually exclusive");
    if (o.seed_set) cfg.scan.seed = o.seed;
    if (o.grid_n > 0) {
        if (o.grid_n < 16 || o.grid_n > 4096)
            throw ConfigError("--grid must lie in [16, 4096]");
        cfg.grid.n = o.grid_n;
    }
    return cfg;
}

std::string out_path(const CommonOpts& o, const std::string& name) {
    fs::create_directories(o.out_dir);
    return (fs::path(o.out_dir) / name).string();
}

std::vector<std::string> provenance(const config::RunConfig& cfg, const std::string& subcommand) {
    std::ostringstream hash;
    hash << "0x" << std::hex << std::setw(16) << std::setfill('0') << cfg.hash();
    return {"homsim " + subcommand, "config_hash=" + hash.str(),
            "seed=" + std::to_string(cfg.scan.seed)};
}

void write_curve_csv(const std::string& path, const std::vector<std::string>& header_lines,
                     const hom::HomCurve& curve) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open " + path + " for writing");
    for (const auto& h : header_lines) out << "# " << h << "\n";
    out << "delay_s,path_um,probability\n";
    out.precision(12);
    for (std::size_t i = 0; i < curve.delays_s.size(); ++i)
        out << curve.delays_s[i] << ',' << curve.path_um[i] << ',' << curve.probability[i]
            << '\n';
    if (!out) throw IoError("write failed for " + path);
}

int cmd_jsa(const CommonOpts& o) {
    const config::RunConfig cfg = load_config(o);
    const auto ccfg = cfg.crystal_config();
    const auto grid = jsa::default_grid(cfg.pump, ccfg, cfg.grid.n, cfg.grid.span_fwhms);
    const auto m = jsa::build_jsa(grid, cfg.pump, ccfg);
    const auto marg = jsa::marginal_spectra(m);

    const auto head = provenance(cfg, "jsa");
    jsa::export_density(m, out_path(o, "density"), head);

    const std::string mpath = out_path(o, "jsa_marginals.csv");
    std::ofstream mf(mpath);
    if (!mf) throw IoError("cannot open " + mpath + " for writing");
    for (const auto& h : head) mf << "# " << h << "\n";
    mf << "axis,fwhm_rad_s,fwhm_nm\n";
    mf.precision(12);
    mf << "signal," << marg.signal_fwhm_rad_s << ',' << marg.signal_fwhm_nm << '\n';
    mf << "idler," << marg.idler_fwhm_rad_s << ',' << marg.idler_fwhm_nm << '\n';

    std::cout << "grid " << grid.n_signal << "x" << grid.n_idler << ", theta = "
              << ccfg.cut_angle_rad * 180.0 / M_PI << " deg\n";
    std::cout << "signal marginal FWHM: " << marg.signal_fwhm_nm << " nm\n";
    std::cout << "idler marginal FWHM:  " << marg.idler_fwhm_nm << " nm\n";

    if (o.svg) {
        std::vector<double> inten(m.f.size());
        for (std::size_t i = 0; i < m.f.size(); ++i) inten[i] = std::norm(m.f[i]);
        svgplot::write_heatmap(out_path(o, "density_jsa.svg"), grid.idler_axis(),
                               grid.signal_axis(), inten, "joint spectral intensity");
    }
    return 0;
}

int cmd_schmidt(const CommonOpts& o) {
    const config::RunConfig cfg = load_config(o);
    const auto ccfg = cfg.crystal_config();
    const auto grid = jsa::default_grid(cfg.pump, ccfg, cfg.grid.n, cfg.grid.span_fwhms);
    const auto m = jsa::build_jsa(grid, cfg.pump, ccfg);
    const auto res = schmidt::schmidt_decompose(m);

    std::cout.precision(10);
    std::cout << "schmidt_number," << res.schmidt_number << "\n";
    std::cout << "purity," << res.purity << "\n";
    for (std::size_t n = 0; n < res.coefficients.size() && n < 8; ++n)
        std::cout << "lambda_" << n << "," << res.coefficients[n] << "\n";

    const std::string path = out_path(o, "schmidt.csv");
    std::ofstream f(path);
    if (!f) throw IoError("cannot open " + path + " for writing");
    for (const auto& h : provenance(cfg, "schmidt")) f << "# " << h << "\n";
    f << "quantity,value\n";
    f.precision(12);
    f << "schmidt_number," << res.schmidt_number << "\npurity," << res.purity << "\n";
    for (std::size_t n = 0; n < res.coefficients.size() && n < 8; ++n)
        f << "lambda_" << n << ',' << res.coefficients[n] << "\n";
    return 0;
}

int cmd_hom(const CommonOpts& o) {
    const config::RunConfig cfg = load_config(o);
    const hom::HomParams params(hom::eq_bandwidth(cfg.signal), hom::eq_bandwidth(cfg.lo),
                                cfg.center_offset_rad_s);
    const auto curve = hom::hom_curve(params, cfg.scan.delays_s());
    const double v = hom::visibility(params.sigma_s, params.sigma_lo);

    const auto head = provenance(cfg, "hom");
    write_curve_csv(out_path(o, "hom_curve.csv"), head, curve);

    std::cout.precision(10);
    std::cout << "visibility," << v << "\n";
    if (params.delta == 0.0) {
        const auto w = hom::dip_fwhm(params);
        std::cout << "dip_fwhm_s," << w.fwhm_time_s << "\n";
        std::cout << "dip_fwhm_um," << w.fwhm_path_m * 1e6 << "\n";
    }
    if (o.svg)
        svgplot::write_line_plot(out_path(o, "hom_curve.svg"), curve.path_um,
                                 {curve.probability}, {"P(tau)"}, "coincidence dip",
                                 "path delay (um)", "probability");
    return 0;
}

int cmd_simulate(const CommonOpts& o) {
    const config::RunConfig cfg = load_config(o);
    focksim::InterferenceSetup setup;
    setup.source = cfg.source;
    setup.detectors = cfg.detectors;
    setup.signal = cfg.signal;
    setup.lo = cfg.lo;
    setup.delta_rad_s = cfg.center_offset_rad_s;

    const auto rec = focksim::simulate_counts(setup, cfg.scan.delays_s(),
                                              cfg.scan.pulses_per_point, cfg.scan.seed);
    csv::write_count_record(rec, out_path(o, "counts.csv"), provenance(cfg, "simulate"));
    std::cout << "wrote " << rec.rows.size() << " delay points x " << cfg.scan.pulses_per_point
              << " pulses (seed " << cfg.scan.seed << ")\n";

    if (o.svg) {
        std::vector<double> x, triples;
        for (const auto& r : rec.rows) {
            x.push_back(r.path_um);
            triples.push_back(static_cast<double>(r.triples));
        }
        svgplot::write_line_plot(out_path(o, "counts.svg"), x, {triples}, {"triples"},
                                 "simulated three-fold counts", "path delay (um)", "counts");
    }
    return 0;
}

int cmd_fit(const CommonOpts& o, const std::string& input, const std::string& column,
            const std::string& curve_out) {
    if (!fs::exists(input)) throw ConfigError("fit input file does not exist: " + input);
    const auto series = csv::read_fit_input(input, column);
    const auto result = fit::fit_dip(series.position_um, series.counts);

    std::cout.precision(10);
    std::cout << "baseline," << result.model.baseline << ',' << result.err_baseline << "\n";
    std::cout << "visibility," << result.model.visibility << ',' << result.err_visibility << "\n";
    std::cout << "center_um," << result.model.center_um << ',' << result.err_center << "\n";
    std::cout << "width_um," << result.model.width_um << ',' << result.err_width << "\n";
    std::cout << "fwhm_um," << result.fwhm_um() << ',' << result.err_fwhm_um() << "\n";
    std::cout << "reduced_chi2," << result.reduced_chi2 << "\n";
    std::cout << "converged," << (result.converged ? 1 : 0) << "\n";
    if (result.flat_data) std::cout << "flat_data,1\n";

    if (!curve_out.empty()) {
        std::ofstream f(curve_out);
        if (!f) throw IoError("cannot open " + curve_out + " for writing");
        f << "# homsim fit curve for " << input << "\n";
        f << "position_um,model_counts\n";
        f.precision(12);
        const double lo = *std::min_element(series.position_um.begin(), series.position_um.end());
        const double hi = *std::max_element(series.position_um.begin(), series.position_um.end());
        for (int i = 0; i < 200; ++i) {
            const double d = lo + (hi - lo) * i / 199.0;
            f << d << ',' << result.model(d) << '\n';
        }
    }
    if (o.svg) {
        std::vector<double> modeled;
        modeled.reserve(series.position_um.size());
        for (double d : series.position_um) modeled.push_back(result.model(d));
        svgplot::write_line_plot(out_path(o, "fit.svg"), series.position_um,
                                 {series.counts, modeled}, {"data", "fit"}, "dip fit",
                                 "position (um)", "counts");
    }
    return 0;
}

int cmd_paper(const CommonOpts& o, const std::string& only_spec) {
    double tol_scale = 1.0;
    if (const char* env = std::getenv("HOMSIM_TOL_SCALE")) {
        char* end = nullptr;
        const double v = std::strtod(env, &end);
        if (end != env && v > 0.0) tol_scale = v;
    }
    std::vector<int> only;
    if (!only_spec.empty()) {
        std::istringstream is(only_spec);
        std::string tok;
        while (std::getline(is, tok, ',')) only.push_back(std::stoi(tok));
    }

    const auto results = refchecks::run_reference_checks(tol_scale, only);
    const std::string path = out_path(o, "paper_report.csv");
    std::ofstream report(path);
    if (!report) throw IoError("cannot open " + path + " for writing");
    report << "# homsim paper: reference-scenario checks (tol_scale=" << tol_scale << ")\n";
    report << "status,id,name,detail\n";

    bool all_pass = true;
    for (const auto& r : results) {
        const std::string line = refchecks::format_line(r);
        std::cout << line << "\n";
        report << line << "\n";
        all_pass = all_pass && r.pass;
    }
    std::cout << (all_pass ? "ALL CHECKS PASSED" : "CHECK FAILURES PRESENT") << "\n";
    return all_pass ? 0 : 3;
}

}  // namespace

int run(int argc, const char* const* argv) {
    CLI::App app{"homsim: heralded-photon / weak-coherent-state interference simulator"};
    app.require_subcommand(1);

    CommonOpts jsa_o, schmidt_o, hom_o, sim_o, fit_o, paper_o;
    std::string fit_input, fit_column = "triples", fit_curve_out, paper_only;

    add_common(app.add_subcommand("jsa", "build the joint spectral amplitude and export densities"),
               jsa_o, true);
    add_common(app.add_subcommand("schmidt", "Schmidt number and purity of the modeled state"),
               schmidt_o, true);
    add_common(app.add_subcommand("hom", "analytic coincidence-dip curve, visibility and width"),
               hom_o);
    add_common(app.add_subcommand("simulate", "Monte Carlo photon counting over a delay scan"),
               sim_o);
    auto* fit_cmd = app.add_subcommand("fit", "fit a Gaussian dip to count data");
    add_common(fit_cmd, fit_o);
    fit_cmd->add_option("--input", fit_input, "counts CSV (count record or two-column)")
        ->required();
    fit_cmd->add_option("--column", fit_column, "count-record column to fit")
        ->capture_default_str();
    fit_cmd->add_option("--curve-out", fit_curve_out, "write the fitted curve CSV here");
    auto* paper_cmd =
        app.add_subcommand("paper", "run every reference-scenario check and report PASS/FAIL");
    add_common(paper_cmd, paper_o);
    paper_cmd->add_option("--only", paper_only, "comma-separated check ids to run");

    try {
        app.parse(argc, argv);
        if (app.got_subcommand("jsa")) return cmd_jsa(jsa_o);
        if (app.got_subcommand("schmidt")) return cmd_schmidt(schmidt_o);
        if (app.got_subcommand("hom")) return cmd_hom(hom_o);
        if (app.got_subcommand("simulate")) return cmd_simulate(sim_o);
        if (app.got_subcommand("fit")) return cmd_fit(fit_o, fit_input, fit_column, fit_curve_out);
        if (app.got_subcommand("paper")) return cmd_paper(paper_o, paper_only);
        return 2;
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const IoError& e) {
        std::cerr << "I/O error: " << e.what() << "\n";
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
}

}  // namespace homsim::cli
