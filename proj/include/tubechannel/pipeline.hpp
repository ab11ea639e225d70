#ifndef TUBECHANNEL_PIPELINE_HPP
#define TUBECHANNEL_PIPELINE_HPP

#include <functional>
#include <string>
#include <vector>

#include "tubechannel/analytic.hpp"
#include "tubechannel/config.hpp"
#include "tubechannel/mcsim.hpp"
#include "tubechannel/metrics.hpp"
#include "tubechannel/scenario.hpp"

namespace tubechannel {

struct AnalyticRun {
    RegimeReport regime;
    ResponseCurve probability;
    ResponseCurve rate;
};

/// R(t) and r(t) on {k * grid_step} over [0, sim.horizon].
AnalyticRun run_analytic(const RunConfig& cfg, bool with_rate = true);

struct ValidationRun {
    AnalyticRun analytic;
    EnsembleResult simulation;
    CurvePair pair;
    MetricReport metrics;
};

/// Analytic and simulated arrival probability on the same grid, compared
/// with RMSE / NMSE / NRMSE.
ValidationRun run_validation(const RunConfig& cfg, const std::string& example_id);

/// Analytic curve compared against itself; NRMSE is 1 by construction.
MetricReport run_self_validation(const RunConfig& cfg, const std::string& example_id);

inline constexpr double kNrmseBand = 0.05;
inline constexpr double kPecletTolerance = 1e-4;

struct Table2Row {
    int id = 0;
    double reynolds = 0.0;
    double peclet = 0.0;
    MetricReport metrics;
    double simulated_final = 0.0;  ///< absorbed fraction at the horizon
    double analytic_final = 0.0;   ///< R(horizon)
    ReferenceExample reference{};
    bool ok = false;
    std::string message;
};

/// Runs the six reference examples with the sim/trunc/grid settings of
/// `base`. A row fails on a computation error, a Re/Pe mismatch with the
/// reference row, or an NRMSE outside +-kNrmseBand of the reference value.
std::vector<Table2Row> reproduce_table2(const RunConfig& base,
                                        const std::function<void(const Table2Row&)>& on_row = {});

/// Re equals the two-decimal reference value after rounding.
bool reynolds_matches(double computed, double reference);

}  // namespace tubechannel

#endif  // TUBECHANNEL_PIPELINE_HPP
