// casmp: multipolar dispersion (Casimir / van der Waals) energies and forces
// for a metallic sphere above a planar substrate, via the spectral
// representation of the coupled multipole problem.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "casmp/analysis.hpp"
#include "casmp/errors.hpp"
#include "casmp/spectrum.hpp"
#include "casmp/sweep.hpp"
#include "casmp/version.hpp"

namespace {

using namespace casmp;

struct CommonFlags {
    std::string config_path;
    std::string out_path;
    std::string format;
    std::string grid;
    int l_max = 0;
    double tol = 0.0;
    CLI::Option* opt_out = nullptr;
    CLI::Option* opt_format = nullptr;
    CLI::Option* opt_lmax = nullptr;
    CLI::Option* opt_tol = nullptr;
    CLI::Option* opt_grid = nullptr;
};

void add_common(CLI::App* cmd, CommonFlags& flags, bool with_grid) {
    cmd->add_option("--config", flags.config_path, "JSON run configuration");
    flags.opt_out = cmd->add_option("--out", flags.out_path, "output path (default stdout)");
    flags.opt_format =
        cmd->add_option("--format", flags.format, "output format: csv|json")
            ->check(CLI::IsMember({"csv", "json"}));
    flags.opt_lmax = cmd->add_option("--lmax", flags.l_max, "largest multipole order")
                         ->check(CLI::PositiveNumber);
    flags.opt_tol = cmd->add_option("--tol", flags.tol, "relative energy tolerance")
                        ->check(CLI::NonNegativeNumber);
    if (with_grid)
        flags.opt_grid = cmd->add_option(
            "--grid", flags.grid, "log z/R grid LO:HI:POINTS_PER_DECADE");
}

RunConfig make_config(const CommonFlags& flags) {
    RunConfig config = flags.config_path.empty()
                           ? RunConfig{}
                           : RunConfig::from_json_file(flags.config_path);
    if (flags.opt_out && flags.opt_out->count()) config.out_path = flags.out_path;
    if (flags.opt_format && flags.opt_format->count()) config.format = flags.format;
    if (flags.opt_lmax && flags.opt_lmax->count()) config.truncation.l_max = flags.l_max;
    if (flags.opt_tol && flags.opt_tol->count()) config.truncation.tol = flags.tol;
    if (flags.opt_grid && flags.opt_grid->count()) {
        double lo = 0.0;
        double hi = 0.0;
        int ppd = 0;
        if (std::sscanf(flags.grid.c_str(), "%lf:%lf:%d", &lo, &hi, &ppd) != 3)
            throw ConfigError("--grid expects LO:HI:POINTS_PER_DECADE, got '" +
                              flags.grid + "'");
        config.z_list_nm.clear();
        config.z_over_r_list = log_grid(lo, hi, ppd);
    }
    config.validate();
    return config;
}

void emit(const RunConfig& config, const std::string& text) {
    if (config.out_path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream os(config.out_path, std::ios::binary);
    if (!os) throw ConfigError("cannot open output file: " + config.out_path);
    os << text;
}

void dump_blocks(const RunConfig& config, double z_over_r, const std::string& dir) {
    namespace fs = std::filesystem;
    fs::create_directories(dir);
    const Geometry geom = Geometry::from_ratio(z_over_r, config.radius_nm);
    const auto blocks =
        build_all_blocks(geom, config.substrate().f_c, config.truncation, Exec::parallel);
    for (const MBlock& b : blocks) {
        std::ofstream os(fs::path(dir) / ("block_m" + std::to_string(b.m) + ".csv"),
                         std::ios::binary);
        os << "row,col,value\n";
        char buf[40];
        for (int i = 0; i < b.dim; ++i)
            for (int j = 0; j <= i; ++j) {
                std::snprintf(buf, sizeof buf, "%.17g", b.h(i, j));
                os << i << ',' << j << ',' << buf << '\n';
            }
    }
}

std::string slope_json(const SlopeFit& fit) {
    nlohmann::json j;
    j["exponent"] = fit.exponent;
    j["stderr"] = fit.stderr_exponent;
    j["window"] = {fit.x_lo, fit.x_hi};
    j["r_squared"] = fit.r_squared;
    j["n_points"] = fit.n_points;
    return j.dump(2) + "\n";
}

int run(int argc, char** argv) {
    CLI::App app{"Multipolar dispersion energy and force between a sphere and a "
                 "planar substrate (spectral-representation mode sum)"};
    app.set_version_flag("--version", std::string("casmp ") + version);
    app.require_subcommand(1);

    CommonFlags energy_flags;
    CLI::App* energy = app.add_subcommand(
        "energy-sweep", "interaction energy over a z/R (or z) grid");
    add_common(energy, energy_flags, true);

    CommonFlags force_flags;
    std::string method = "hf";
    bool verify_force = false;
    CLI::App* force_cmd =
        app.add_subcommand("force-sweep", "force F = -dE/dz over a z/R (or z) grid");
    add_common(force_cmd, force_flags, true);
    force_cmd->add_option("--method", method, "derivative route: hf|fd")
        ->check(CLI::IsMember({"hf", "fd"}));
    force_cmd->add_flag("--verify-force", verify_force,
                        "cross-check both derivative routes at 1e-4 relative");

    CommonFlags modes_flags;
    double modes_x = 0.0;
    std::string dump_dir;
    CLI::App* modes_cmd =
        app.add_subcommand("modes", "proper-mode spectrum at one separation");
    add_common(modes_cmd, modes_flags, false);
    modes_cmd->add_option("--z-over-r", modes_x, "separation z/R")
        ->required()
        ->check(CLI::PositiveNumber);
    modes_cmd->add_option("--dump-blocks", dump_dir,
                          "also write each m-block as CSV (row,col,value) here");

    CommonFlags conv_flags;
    double conv_x = 0.0;
    CLI::App* conv_cmd =
        app.add_subcommand("converge", "truncation-doubling study at one separation");
    add_common(conv_cmd, conv_flags, false);
    conv_cmd->add_option("--z-over-r", conv_x, "separation z/R")
        ->required()
        ->check(CLI::PositiveNumber);

    std::string fit_in;
    std::string fit_ycol = "auto";
    std::string fit_out;
    double fit_xlo = 0.0;
    double fit_xhi = 0.0;
    CLI::App* fit_cmd =
        app.add_subcommand("fit-slope", "log-log power-law fit over a sweep window");
    fit_cmd->add_option("--in", fit_in, "sweep CSV produced by energy-sweep/force-sweep")
        ->required();
    fit_cmd->add_option("--xlo", fit_xlo, "window lower edge")->required();
    fit_cmd->add_option("--xhi", fit_xhi, "window upper edge")->required();
    fit_cmd->add_option("--y-col", fit_ycol, "y column name (default: auto)");
    fit_cmd->add_option("--out", fit_out, "output path (default stdout)");

    std::string cmp_full;
    std::string cmp_ref;
    std::string cmp_out;
    CLI::App* cmp_cmd = app.add_subcommand(
        "compare", "pointwise |full/reference| ratio of two aligned sweeps");
    cmp_cmd->add_option("--full", cmp_full, "full-solution sweep CSV")->required();
    cmp_cmd->add_option("--ref", cmp_ref, "reference sweep CSV")->required();
    cmp_cmd->add_option("--out", cmp_out, "output path (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    if (energy->parsed()) {
        const RunConfig config = make_config(energy_flags);
        const auto rows = run_energy_sweep(config, Exec::parallel);
        if (config.format == "json") {
            emit(config, energy_rows_to_json(config, rows));
        } else {
            std::ostringstream os;
            write_energy_csv(os, config, rows);
            emit(config, os.str());
        }
    } else if (force_cmd->parsed()) {
        const RunConfig config = make_config(force_flags);
        const auto m = method == "hf" ? ForceResult::Method::hellmann_feynman
                                      : ForceResult::Method::finite_difference;
        const auto rows = run_force_sweep(config, m, verify_force, Exec::parallel);
        if (config.format == "json") {
            emit(config, force_rows_to_json(config, rows));
        } else {
            std::ostringstream os;
            write_force_csv(os, config, rows);
            emit(config, os.str());
        }
    } else if (modes_cmd->parsed()) {
        const RunConfig config = make_config(modes_flags);
        const auto rows = run_modes(config, modes_x, Exec::parallel);
        std::ostringstream os;
        write_modes_csv(os, config, modes_x, rows);
        emit(config, os.str());
        if (!dump_dir.empty()) dump_blocks(config, modes_x, dump_dir);
    } else if (conv_cmd->parsed()) {
        const RunConfig config = make_config(conv_flags);
        const auto rows = run_converge(config, conv_x, Exec::parallel);
        std::ostringstream os;
        write_converge_csv(os, config, conv_x, rows);
        emit(config, os.str());
    } else if (fit_cmd->parsed()) {
        const SweepCurve curve = read_sweep_csv(fit_in, fit_ycol);
        SlopeFit fit;
        try {
            fit = fit_slope(curve, fit_xlo, fit_xhi);
        } catch (const std::invalid_argument& e) {
            throw ConfigError(e.what());
        }
        RunConfig sink;
        sink.out_path = fit_out;
        emit(sink, slope_json(fit));
    } else if (cmp_cmd->parsed()) {
        const SweepCurve full = read_sweep_csv(cmp_full);
        const SweepCurve ref = read_sweep_csv(cmp_ref);
        SweepCurve ratio;
        try {
            ratio = enhancement_ratio(full, ref);
        } catch (const std::invalid_argument& e) {
            throw ConfigError(e.what());
        }
        std::ostringstream os;
        os << "# casmp " << version << "\n";
        os << "# monotone_nonincreasing "
           << (monotone_nonincreasing(ratio) ? "true" : "false") << "\n";
        os << "z_over_R,ratio\n";
        char buf[40];
        for (const SweepPoint& p : ratio.points) {
            std::snprintf(buf, sizeof buf, "%.17g", p.x);
            os << buf << ',';
            std::snprintf(buf, sizeof buf, "%.17g", p.y);
            os << buf << '\n';
        }
        RunConfig sink;
        sink.out_path = cmp_out;
        emit(sink, os.str());
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const ConfigError& e) {
        std::cerr << "casmp: config error: " << e.what() << "\n";
        return 1;
    } catch (const std::domain_error& e) {
        std::cerr << "casmp: invalid input: " << e.what() << "\n";
        return 1;
    } catch (const std::invalid_argument& e) {
        std::cerr << "casmp: invalid input: " << e.what() << "\n";
        return 1;
    } catch (const SolverError& e) {
        std::cerr << "casmp: numerical failure: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "casmp: error: " << e.what() << "\n";
        return 2;
    }
}
