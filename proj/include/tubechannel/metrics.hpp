#ifndef TUBECHANNEL_METRICS_HPP
#define TUBECHANNEL_METRICS_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "tubechannel/analytic.hpp"
#include "tubechannel/mcsim.hpp"

namespace tubechannel {

/// Theory (test, x_i) and simulation (reference, y_i) sampled on one grid.
struct CurvePair {
    std::vector<double> times;
    std::vector<double> test;
    std::vector<double> reference;

    /// Checks equal lengths >= 2 and a strictly increasing grid.
    static CurvePair make(std::vector<double> times, std::vector<double> test, std::vector<double> reference);
    std::size_t size() const { return times.size(); }
};

/// Raised when NMSE/NRMSE are undefined (constant reference curve).
class UndefinedMetricError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

double rmse(const CurvePair& p);
double nmse(const CurvePair& p);
double nrmse(const CurvePair& p);

/// Samples theory (linear interpolation) and the simulated CDF
/// (right-continuous step lookup) on {k * grid_step} over the theory
/// curve's span.
CurvePair align(const ResponseCurve& theory, const EnsembleResult& sim, double grid_step);

/// Same, for two analytic curves.
CurvePair align(const ResponseCurve& theory, const ResponseCurve& reference, double grid_step);

struct MetricReport {
    std::string example_id;
    double rmse = 0.0;
    double nmse = 0.0;
    double nrmse = 0.0;
    std::size_t n_samples = 0;
    std::uint64_t seed = 0;
};

MetricReport evaluate(const CurvePair& pair, std::string example_id, std::uint64_t seed);

}  // namespace tubechannel

#endif  // TUBECHANNEL_METRICS_HPP
