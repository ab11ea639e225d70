// Command-line front end: analytic, simulate, validate, reproduce-table2.
//
// Exit codes: 0 success, 1 usage or configuration error, 2 numerical or
// internal failure, 3 reproduce-table2 finished with failing rows.

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cstdio>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "tubechannel/analytic.hpp"
#include "tubechannel/config.hpp"
#include "tubechannel/csv_io.hpp"
#include "tubechannel/mcsim.hpp"
#include "tubechannel/metrics.hpp"
#include "tubechannel/pipeline.hpp"
#include "tubechannel/quadrature.hpp"
#include "tubechannel/scenario.hpp"

namespace tc = tubechannel;
namespace fs = std::filesystem;

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitNumerical = 2;
constexpr int kExitPartial = 3;

struct Overrides {
    std::string config;
    std::string out;
    std::optional<std::uint64_t> seed;
    std::optional<double> grid_step;
    std::string trunc;
    std::optional<int> replications;
    std::optional<double> dt;
    bool no_early_exit = false;
    bool self_check = false;
};

void add_common_options(CLI::App* cmd, Overrides& o) {
    cmd->add_option("--config", o.config, "run configuration file (INI sections scenario/sim/trunc/run)");
    cmd->add_option("--out", o.out, "output directory");
    cmd->add_option("--seed", o.seed, "top-level random seed");
    cmd->add_option("--grid-step", o.grid_step, "output / comparison grid step [s]");
    cmd->add_option("--trunc", o.trunc, "series truncation M,N");
    cmd->add_option("--replications", o.replications, "simulation replications");
    cmd->add_option("--dt", o.dt, "simulation time step [s]");
    cmd->add_flag("--no-early-exit", o.no_early_exit, "disable downstream early removal of molecules");
}

tc::Truncation parse_trunc(const std::string& text, int l_max) {
    const auto comma = text.find(',');
    if (comma == std::string::npos) throw tc::ConfigError("--trunc expects M,N");
    try {
        const int m = std::stoi(text.substr(0, comma));
        const int n = std::stoi(text.substr(comma + 1));
        return tc::Truncation::make(m, n, l_max < 0 ? n : l_max);
    } catch (const std::logic_error&) {
        throw tc::ConfigError("--trunc expects two integers M,N with M >= 1, N >= 0");
    }
}

tc::RunConfig resolve(const Overrides& o, const tc::RunConfig& defaults) {
    tc::RunConfig cfg = o.config.empty() ? defaults : tc::load_run_config(o.config);
    if (!o.out.empty()) cfg.output_dir = o.out;
    if (o.seed) cfg.sim.seed = *o.seed;
    if (o.grid_step) cfg.grid_step = *o.grid_step;
    if (!o.trunc.empty()) cfg.trunc = parse_trunc(o.trunc, -1);
    if (o.replications) cfg.sim.replications = *o.replications;
    if (o.dt) cfg.sim.dt = *o.dt;
    if (o.no_early_exit) cfg.sim.early_exit_sigma = 0.0;
    tc::validate(cfg.sim);
    if (!(cfg.grid_step > 0.0)) throw tc::ConfigError("grid_step must be > 0");
    return cfg;
}

void print_regime(const tc::RegimeReport& r) {
    std::cout << "Re = " << r.reynolds << "\nPe = " << r.peclet << "\nlaminar = " << (r.laminar ? "true" : "false")
              << "\nflow_dominated = " << (r.flow_dominated ? "true" : "false") << '\n';
    for (const auto& w : tc::regime_warnings(r)) std::cerr << "warning: " << w << '\n';
}

int cmd_analytic(const Overrides& o) {
    const auto cfg = resolve(o, tc::RunConfig{});
    const auto run = tc::run_analytic(cfg);
    print_regime(run.regime);
    tc::csv::write_file(cfg.output_dir / "arrival_probability.csv",
                        [&](std::ostream& os) { tc::csv::write_response_curve(os, run.probability); });
    tc::csv::write_file(cfg.output_dir / "arrival_rate.csv",
                        [&](std::ostream& os) { tc::csv::write_response_curve(os, run.rate); });
    std::cout << "R(" << cfg.sim.horizon << ") = " << run.probability.values.back() << '\n';
    return 0;
}

int cmd_simulate(const Overrides& o) {
    const auto cfg = resolve(o, tc::RunConfig{});
    const auto start = std::chrono::steady_clock::now();
    const auto result = tc::run_ensemble(cfg.scenario, cfg.sim);
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    tc::csv::write_file(cfg.output_dir / "empirical_cdf.csv",
                        [&](std::ostream& os) { tc::csv::write_empirical_cdf(os, result); });
    tc::csv::write_file(cfg.output_dir / "rate_histogram.csv",
                        [&](std::ostream& os) { tc::csv::write_rate_histogram(os, result); });

    nlohmann::ordered_json manifest;
    manifest["seed"] = cfg.sim.seed;
    manifest["dt"] = cfg.sim.dt;
    manifest["horizon"] = cfg.sim.horizon;
    manifest["replications"] = cfg.sim.replications;
    manifest["n_molecules"] = cfg.sim.n_molecules;
    manifest["early_exit_enabled"] = cfg.sim.early_exit_sigma > 0.0;
    manifest["early_exit_sigma"] = cfg.sim.early_exit_sigma;
    manifest["tube_length"] = cfg.sim.tube_length;
    manifest["bin_width"] = cfg.sim.bin_width;
    manifest["absorbed_fraction"] = result.final_fraction();
    manifest["overshoot_clamps"] = result.diagnostics.overshoot_clamps;
    manifest["wall_clock_seconds"] = seconds;
    std::ostringstream cfg_text;
    tc::write_run_config(cfg_text, cfg);
    manifest["config"] = cfg_text.str();
    tc::csv::write_file(cfg.output_dir / "manifest.json",
                        [&](std::ostream& os) { os << manifest.dump(2) << '\n'; });

    std::cout << "absorbed fraction = " << result.final_fraction() << " (" << result.absorption_times.size() << " of "
              << result.total_molecules << ")\nwall clock = " << seconds << " s\n";
    return 0;
}

int cmd_validate(const Overrides& o) {
    const auto cfg = resolve(o, tc::RunConfig{});
    if (o.self_check) {
        const auto report = tc::run_self_validation(cfg, "self");
        tc::csv::write_file(cfg.output_dir / "metrics.csv",
                            [&](std::ostream& os) { tc::csv::write_metrics(os, {report}); });
        std::cout << "nrmse = " << report.nrmse << '\n';
        return 0;
    }
    const auto run = tc::run_validation(cfg, "config");
    print_regime(run.analytic.regime);
    tc::csv::write_file(cfg.output_dir / "metrics.csv",
                        [&](std::ostream& os) { tc::csv::write_metrics(os, {run.metrics}); });
    tc::csv::write_file(cfg.output_dir / "comparison.csv", [&](std::ostream& os) {
        os << "t,theory,simulation\n";
        for (std::size_t i = 0; i < run.pair.size(); ++i) {
            os << tc::csv::format_time(run.pair.times[i]) << ',' << tc::csv::format_value(run.pair.test[i]) << ','
               << tc::csv::format_value(run.pair.reference[i]) << '\n';
        }
    });
    std::cout << "rmse = " << run.metrics.rmse << "\nnmse = " << run.metrics.nmse << "\nnrmse = " << run.metrics.nrmse
              << '\n';
    return 0;
}

int cmd_reproduce(const Overrides& o) {
    tc::RunConfig defaults;
    defaults.sim.replications = 20;
    const auto cfg = resolve(o, defaults);
    std::printf("%-4s %6s %6s %10s %10s %8s %8s %8s  %s\n", "ex", "Re", "Re*", "Pe", "Pe*", "NRMSE", "NRMSE*",
                "R(end)", "status");
    const auto rows = tc::reproduce_table2(cfg, [](const tc::Table2Row& r) {
        std::printf("%-4d %6.2f %6.2f %10.4f %10.4f %8.4f %8.4f %8.4f  %s\n", r.id, r.reynolds, r.reference.reynolds,
                    r.peclet, r.reference.peclet, r.metrics.nrmse, r.reference.nrmse, r.analytic_final,
                    r.ok ? "ok" : r.message.c_str());
        std::fflush(stdout);
    });
    std::vector<tc::MetricReport> metrics;
    for (const auto& r : rows) metrics.push_back(r.metrics);
    tc::csv::write_file(cfg.output_dir / "metrics.csv", [&](std::ostream& os) { tc::csv::write_metrics(os, metrics); });
    tc::csv::write_file(cfg.output_dir / "table2.csv", [&](std::ostream& os) {
        os << "example_id,re,re_ref,pe,pe_ref,nrmse,nrmse_ref,rmse,nmse,sim_final,analytic_final,status\n";
        for (const auto& r : rows) {
            using tc::csv::format_value;
            os << r.id << ',' << format_value(r.reynolds) << ',' << format_value(r.reference.reynolds) << ','
               << format_value(r.peclet) << ',' << format_value(r.reference.peclet) << ','
               << format_value(r.metrics.nrmse) << ',' << format_value(r.reference.nrmse) << ','
               << format_value(r.metrics.rmse) << ',' << format_value(r.metrics.nmse) << ','
               << format_value(r.simulated_final) << ',' << format_value(r.analytic_final) << ','
               << (r.ok ? "ok" : "fail") << '\n';
        }
    });
    for (const auto& r : rows) {
        if (!r.ok) return kExitPartial;
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Channel response of a tube with an absorbing ring receiver"};
    app.require_subcommand(1);
    Overrides o;
    auto* analytic = app.add_subcommand("analytic", "arrival probability and rate from the series model");
    auto* simulate = app.add_subcommand("simulate", "particle-based Brownian dynamics ensemble");
    auto* validate = app.add_subcommand("validate", "compare analytic and simulated arrival probability");
    auto* reproduce = app.add_subcommand("reproduce-table2", "run the six reference examples");
    for (auto* cmd : {analytic, simulate, validate, reproduce}) add_common_options(cmd, o);
    validate->add_flag("--self-check", o.self_check, "compare the analytic curve with itself");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitUsage;
    }

    try {
        if (*analytic) return cmd_analytic(o);
        if (*simulate) return cmd_simulate(o);
        if (*validate) return cmd_validate(o);
        if (*reproduce) return cmd_reproduce(o);
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const tc::NumericalError& e) {
        std::cerr << "numerical error: " << e.what() << '\n';
        return kExitNumerical;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitNumerical;
    }
    return kExitUsage;
}
