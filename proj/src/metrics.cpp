#include "tubechannel/metrics.hpp"

#include <cmath>
#include <stdexcept>

namespace tubechannel {

namespace {

double squared_error(const CurvePair& p) {
    double sse = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        const double d = p.test[i] - p.reference[i];
        sse += d * d;
    }
    return sse;
}

// Sum of squared error over the centred sum of squares of the reference.
double error_ratio(const CurvePair& p) {
    double mean = 0.0;
    for (double y : p.reference) mean += y;
    mean /= static_cast<double>(p.size());
    double sst = 0.0;
    for (double y : p.reference) sst += (y - mean) * (y - mean);
    if (!(sst > 0.0)) {
        throw UndefinedMetricError("reference curve is constant; NMSE/NRMSE undefined");
    }
    return squared_error(p) / sst;
}

std::vector<double> sample_grid(double start, double end, double step) {
    if (!(step > 0.0)) throw std::invalid_argument("grid_step must be positive");
    const auto count = static_cast<std::size_t>(std::floor((end - start) / step + 1e-9));
    std::vector<double> grid(count + 1);
    for (std::size_t k = 0; k <= count; ++k) grid[k] = start + static_cast<double>(k) * step;
    return grid;
}

}  // namespace

CurvePair CurvePair::make(std::vector<double> times, std::vector<double> test, std::vector<double> reference) {
    if (times.size() < 2 || test.size() != times.size() || reference.size() != times.size()) {
        throw std::invalid_argument("curve pair needs equal lengths >= 2");
    }
    for (std::size_t i = 1; i < times.size(); ++i) {
        if (!(times[i] > times[i - 1])) throw std::invalid_argument("curve pair grid must be strictly increasing");
    }
    return CurvePair{std::move(times), std::move(test), std::move(reference)};
}

double rmse(const CurvePair& p) { return std::sqrt(squared_error(p) / static_cast<double>(p.size())); }

double nmse(const CurvePair& p) { return 1.0 - error_ratio(p); }

double nrmse(const CurvePair& p) { return 1.0 - std::sqrt(error_ratio(p)); }

CurvePair align(const ResponseCurve& theory, const EnsembleResult& sim, double grid_step) {
    if (theory.times.empty() || sim.empirical_cdf.times.empty()) {
        throw std::invalid_argument("align: empty curve");
    }
    auto grid = sample_grid(theory.times.front(), theory.times.back(), grid_step);
    if (grid.back() > sim.empirical_cdf.times.back() * (1.0 + 1e-12)) {
        throw std::out_of_range("align: grid exceeds the simulated horizon");
    }
    std::vector<double> x(grid.size()), y(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        x[i] = theory.interpolate(std::min(grid[i], theory.times.back()));
        y[i] = sim.absorbed_fraction(grid[i] + 1e-9 * grid_step);
    }
    return CurvePair::make(std::move(grid), std::move(x), std::move(y));
}

CurvePair align(const ResponseCurve& theory, const ResponseCurve& reference, double grid_step) {
    if (theory.times.empty() || reference.times.empty()) throw std::invalid_argument("align: empty curve");
    auto grid = sample_grid(theory.times.front(), theory.times.back(), grid_step);
    if (grid.front() < reference.times.front() || grid.back() > reference.times.back() * (1.0 + 1e-12)) {
        throw std::out_of_range("align: grid exceeds the reference curve's domain");
    }
    std::vector<double> x(grid.size()), y(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        x[i] = theory.interpolate(std::min(grid[i], theory.times.back()));
        y[i] = reference.interpolate(std::min(grid[i], reference.times.back()));
    }
    return CurvePair::make(std::move(grid), std::move(x), std::move(y));
}

MetricReport evaluate(const CurvePair& pair, std::string example_id, std::uint64_t seed) {
    MetricReport r;
    r.example_id = std::move(example_id);
    r.rmse = rmse(pair);
    r.nmse = nmse(pair);
    r.nrmse = nrmse(pair);
    r.n_samples = pair.size();
    r.seed = seed;
    return r;
}

}  // namespace tubechannel
