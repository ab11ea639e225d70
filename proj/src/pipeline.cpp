#include "tubechannel/pipeline.hpp"

#include <cmath>
#include <sstream>

namespace tubechannel {

AnalyticRun run_analytic(const RunConfig& cfg, bool with_rate) {
    AnalyticRun out;
    out.regime = validate_regime(cfg.scenario, cfg.pe_threshold);
    const SeriesModel model(cfg.scenario, cfg.trunc);
    const auto grid = uniform_grid(cfg.sim.horizon, cfg.grid_step);
    out.probability = arrival_probability(model, grid, cfg.quad_tol);
    if (with_rate) out.rate = arrival_rate(model, grid, cfg.quad_tol);
    return out;
}

ValidationRun run_validation(const RunConfig& cfg, const std::string& example_id) {
    ValidationRun out;
    out.analytic = run_analytic(cfg, false);
    out.simulation = run_ensemble(cfg.scenario, cfg.sim);
    out.pair = align(out.analytic.probability, out.simulation, cfg.grid_step);
    out.metrics = evaluate(out.pair, example_id, cfg.sim.seed);
    return out;
}

MetricReport run_self_validation(const RunConfig& cfg, const std::string& example_id) {
    const auto analytic = run_analytic(cfg, false);
    const auto pair = align(analytic.probability, analytic.probability, cfg.grid_step);
    return evaluate(pair, example_id, cfg.sim.seed);
}

bool reynolds_matches(double computed, double reference) {
    return std::round(computed * 100.0) == std::round(reference * 100.0);
}

std::vector<Table2Row> reproduce_table2(const RunConfig& base, const std::function<void(const Table2Row&)>& on_row) {
    std::vector<Table2Row> rows;
    for (const auto& ex : reference_examples()) {
        Table2Row row;
        row.id = ex.id;
        row.reference = ex;
        RunConfig cfg = base;
        cfg.scenario = ex.scenario;
        row.reynolds = reynolds(cfg.scenario);
        row.peclet = peclet(cfg.scenario);
        try {
            const auto run = run_validation(cfg, "ex" + std::to_string(ex.id));
            row.metrics = run.metrics;
            row.simulated_final = run.simulation.final_fraction();
            row.analytic_final = run.analytic.probability.values.back();
            std::ostringstream why;
            if (!reynolds_matches(row.reynolds, ex.reynolds)) why << "Re mismatch; ";
            if (std::fabs(row.peclet - ex.peclet) > kPecletTolerance) why << "Pe mismatch; ";
            if (std::fabs(row.metrics.nrmse - ex.nrmse) > kNrmseBand) why << "NRMSE outside band; ";
            row.message = why.str();
            row.ok = row.message.empty();
        } catch (const std::exception& e) {
            row.ok = false;
            row.message = e.what();
        }
        if (on_row) on_row(row);
        rows.push_back(std::move(row));
    }
    return rows;
}

}  // namespace tubechannel
