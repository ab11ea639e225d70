#include "tubechannel/analytic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "parallel.hpp"
#include "tubechannel/quadrature.hpp"

namespace tubechannel {

namespace {

using specfun::bessel_j;
using specfun::InverseGaussianParams;

constexpr double kWindowSigmas = 12.0;
constexpr double kNegligibleTail = 1e-14;

void check_index(int value, int lo, int hi, const char* what) {
    if (value < lo || value > hi) {
        throw std::out_of_range(std::string(what) + " index " + std::to_string(value) + " outside [" +
                                std::to_string(lo) + ", " + std::to_string(hi) + "]");
    }
}

// Smallest mean + k * sd (k = 1, 2, ...) whose IG tail is below `level`.
double tail_cutoff(const InverseGaussianParams& law, double level) {
    const double sd = law.stddev();
    double x = law.mu;
    for (int k = 1; k < 100000; ++k) {
        x = law.mu + k * sd;
        if (specfun::ig_tail(law, x) <= level) return x;
    }
    return x;
}

// Laplace transform of the Delta law at s, i.e. E[exp(-s Delta)].
double delta_laplace(const InverseGaussianParams& law, double s) {
    return specfun::ig_tilted_partial(law, s, std::numeric_limits<double>::infinity());
}

}  // namespace

Truncation Truncation::make(int m_max, int n_max, int l_max) {
    if (l_max < 0) l_max = n_max;
    if (m_max < 1 || n_max < 0) {
        throw std::invalid_argument("truncation requires m_max >= 1 and n_max >= 0");
    }
    return Truncation{m_max, n_max, l_max};
}

CrossingTimes CrossingTimes::make(double t1, double t2) {
    if (!(t1 > 0.0 && t2 > t1 && std::isfinite(t2))) {
        throw std::invalid_argument("crossing times require 0 < t1 < t2");
    }
    return CrossingTimes{t1, t2};
}

CrossingTimes nominal_crossing_times(const Scenario& s) { return CrossingTimes::make(s.d1 / s.v, s.d2 / s.v); }

std::string to_string(CurveKind kind) {
    switch (kind) {
        case CurveKind::arrival_probability: return "arrival_probability";
        case CurveKind::arrival_rate: return "arrival_rate";
        case CurveKind::survival: return "survival";
    }
    return "unknown";
}

CurveKind curve_kind_from_string(const std::string& name) {
    if (name == "arrival_probability") return CurveKind::arrival_probability;
    if (name == "arrival_rate") return CurveKind::arrival_rate;
    if (name == "survival") return CurveKind::survival;
    throw std::invalid_argument("unknown curve kind '" + name + "'");
}

double ResponseCurve::interpolate(double t) const {
    if (times.empty() || t < times.front() || t > times.back()) {
        throw std::out_of_range("interpolation time outside curve domain");
    }
    auto it = std::upper_bound(times.begin(), times.end(), t);
    if (it == times.end()) return values.back();
    const auto hi = static_cast<std::size_t>(it - times.begin());
    const std::size_t lo = hi - 1;
    const double w = (t - times[lo]) / (times[hi] - times[lo]);
    return values[lo] + w * (values[hi] - values[lo]);
}

SeriesModel::SeriesModel(const Scenario& scenario, const Truncation& trunc)
    : scenario_(scenario), trunc_(Truncation::make(trunc.m_max, trunc.n_max, trunc.l_max)) {
    validate(scenario_);
    const auto m_count = static_cast<std::size_t>(trunc_.m_max);
    const auto n_count = static_cast<std::size_t>(std::max(trunc_.n_max, trunc_.l_max) + 1);
    j0_ = specfun::bessel_root_sequence(0, m_count);
    j1_ = specfun::bessel_root_sequence(1, n_count);

    const double rho2 = scenario_.rho * scenario_.rho;
    const double area = std::numbers::pi * rho2;
    rate0_.reserve(m_count);
    j1_at_j0_.reserve(m_count);
    for (double j : j0_) {
        rate0_.push_back(scenario_.d_coef * j * j / rho2);
        j1_at_j0_.push_back(bessel_j(1, j));
    }
    rate1_.reserve(n_count);
    j0_at_j1_.reserve(n_count);
    alpha_.reserve(n_count);
    for (double j : j1_) {
        rate1_.push_back(scenario_.d_coef * j * j / rho2);
        const double j0v = (j == 0.0) ? 1.0 : bessel_j(0, j);
        j0_at_j1_.push_back(j0v);
        alpha_.push_back(1.0 / (area * j0v * j0v));
    }

    const auto cols = static_cast<std::size_t>(trunc_.n_max + 1);
    c_.resize(m_count * cols);
    for (std::size_t m = 0; m < m_count; ++m) {
        for (std::size_t n = 0; n < cols; ++n) {
            const double gap = j0_[m] * j0_[m] - j1_[n] * j1_[n];
            if (gap == 0.0) {
                throw std::logic_error("coincident Bessel zeros in c_mn denominator");
            }
            c_[m * cols + n] = 4.0 / (gap * j0_at_j1_[n]);
        }
    }

    t1_law_ = specfun::first_passage_params(scenario_.d1, scenario_.v, scenario_.d_coef);
    delta_law_ = specfun::first_passage_params(scenario_.receiver_length(), scenario_.v, scenario_.d_coef);
}

void SeriesModel::weighted_c(double t1, std::span<double> out) const {
    const auto cols = static_cast<std::size_t>(trunc_.n_max + 1);
    std::vector<double> decay(cols);
    std::size_t used = 0;
    for (std::size_t n = 0; n < cols; ++n) {
        decay[n] = std::exp(-rate1_[n] * t1);
        if (decay[n] == 0.0) break;
        used = n + 1;
    }
    for (std::size_t m = 0; m < out.size(); ++m) {
        const double* row = &c_[m * cols];
        double acc = 0.0;
        for (std::size_t n = 0; n < used; ++n) acc += row[n] * decay[n];
        out[m] = acc;
    }
}

double alpha_coeff(const SeriesModel& model, int n) {
    check_index(n, 0, model.truncation().n_max, "alpha");
    return model.alpha(n);
}

double beta_coeff(const SeriesModel& model, int m, double t1) {
    check_index(m, 1, model.truncation().m_max, "beta");
    if (!(t1 > 0.0)) throw std::invalid_argument("beta_coeff requires t1 > 0");
    const double rho2 = model.scenario().rho * model.scenario().rho;
    const double j0m = model.j0_root(m);
    double sum = 0.0;
    for (int n = 0; n <= model.truncation().n_max; ++n) {
        const double j1n = model.j1_root(n);
        sum += std::exp(-model.rate1(n) * t1) / (model.j0_at_j1(n) * (j0m * j0m - j1n * j1n));
    }
    return 2.0 / (std::numbers::pi * rho2) * (j0m / model.j1_at_j0(m)) * sum;
}

double gamma_coeff(const SeriesModel& model, int l, const CrossingTimes& ct) {
    const auto& tr = model.truncation();
    check_index(l, 0, tr.l_max, "gamma");
    const double rho2 = model.scenario().rho * model.scenario().rho;
    const double j1l = model.j1_root(l);
    const double span = ct.t2 - ct.t1;
    double sum = 0.0;
    for (int m = 1; m <= tr.m_max; ++m) {
        const double j0m = model.j0_root(m);
        const double outer = j0m * j0m * std::exp(-model.rate0(m) * span) / (j0m * j0m - j1l * j1l);
        double inner = 0.0;
        for (int n = 0; n <= tr.n_max; ++n) {
            const double j1n = model.j1_root(n);
            inner += std::exp(-model.rate1(n) * ct.t1) / (model.j0_at_j1(n) * (j0m * j0m - j1n * j1n));
        }
        sum += outer * inner;
    }
    return 4.0 / (std::numbers::pi * rho2) / model.j0_at_j1(l) * sum;
}

double c_mn(const SeriesModel& model, int m, int n) {
    check_index(m, 1, model.truncation().m_max, "c_mn row");
    check_index(n, 0, model.truncation().n_max, "c_mn column");
    return model.c(m, n);
}

double radial_concentration(const SeriesModel& model, double r, double t, const CrossingTimes& ct) {
    const double rho = model.scenario().rho;
    if (!(r >= 0.0 && r <= rho)) throw std::domain_error("radial_concentration: r outside [0, rho]");
    if (!(t >= 0.0)) throw std::domain_error("radial_concentration: t must be >= 0");
    const auto& tr = model.truncation();
    const double x = r / rho;
    double sum = 0.0;
    if (t < ct.t1) {
        for (int n = 0; n <= tr.n_max; ++n) {
            sum += model.alpha(n) * bessel_j(0, model.j1_root(n) * x) * std::exp(-model.rate1(n) * t);
        }
    } else if (t < ct.t2) {
        for (int m = 1; m <= tr.m_max; ++m) {
            sum += beta_coeff(model, m, ct.t1) * bessel_j(0, model.j0_root(m) * x) *
                   std::exp(-model.rate0(m) * (t - ct.t1));
        }
    } else {
        for (int l = 0; l <= tr.l_max; ++l) {
            sum += gamma_coeff(model, l, ct) * bessel_j(0, model.j1_root(l) * x) *
                   std::exp(-model.rate1(l) * (t - ct.t2));
        }
    }
    return sum;
}

double axial_concentration(const Scenario& s, double z, double t) {
    if (!(t > 0.0)) throw std::domain_error("axial_concentration: t must be > 0");
    const double spread = 4.0 * s.d_coef * t;
    const double dz = z - s.v * t;
    return std::exp(-dz * dz / spread) / std::sqrt(std::numbers::pi * spread);
}

double concentration(const SeriesModel& model, double r, double theta, double z, double t,
                     const CrossingTimes& ct) {
    if (!std::isfinite(theta)) throw std::domain_error("concentration: theta must be finite");
    return static_cast<double>(model.scenario().n_emit) * radial_concentration(model, r, t, ct) *
           axial_concentration(model.scenario(), z, t);
}

double conditional_survival(const SeriesModel& model, double t, const CrossingTimes& ct) {
    if (!(t >= 0.0)) throw std::domain_error("conditional_survival: t must be >= 0");
    const double occupation = std::clamp(t - ct.t1, 0.0, ct.t2 - ct.t1);
    const auto& tr = model.truncation();
    double sum = 0.0;
    for (int m = 1; m <= tr.m_max; ++m) {
        for (int n = 0; n <= tr.n_max; ++n) {
            sum += model.c(m, n) * std::exp(-(model.rate1(n) * ct.t1 + model.rate0(m) * occupation));
        }
    }
    return sum;
}

std::vector<double> uniform_grid(double horizon, double step) {
    if (!(step > 0.0) || !(horizon >= 0.0)) throw std::invalid_argument("uniform_grid: need step > 0, horizon >= 0");
    const auto count = static_cast<std::size_t>(std::llround(horizon / step));
    std::vector<double> grid(count + 1);
    for (std::size_t k = 0; k <= count; ++k) grid[k] = static_cast<double>(k) * step;
    return grid;
}

CrossingWindow t1_window(const SeriesModel& model) {
    const auto& law = model.t1_law();
    CrossingWindow w;
    w.lo = std::max(0.0, law.mu - kWindowSigmas * law.stddev());
    w.hi = tail_cutoff(law, kNegligibleTail);
    return w;
}

namespace {

void check_grid(std::span<const double> times, double quad_tol) {
    if (!(quad_tol > 0.0)) throw std::invalid_argument("quad_tol must be positive");
    for (std::size_t i = 0; i < times.size(); ++i) {
        if (!(times[i] >= 0.0) || (i > 0 && !(times[i] > times[i - 1]))) {
            throw std::invalid_argument("time grid must be non-negative and strictly increasing");
        }
    }
}

std::vector<double> survival_values(const SeriesModel& model, std::span<const double> times, double quad_tol) {
    check_grid(times, quad_tol);
    const auto window = t1_window(model);
    const auto& t1_law = model.t1_law();
    const auto& delta_law = model.delta_law();
    const int m_max = model.truncation().m_max;
    std::vector<double> laplace(static_cast<std::size_t>(m_max));
    for (int m = 1; m <= m_max; ++m) laplace[static_cast<std::size_t>(m - 1)] = delta_laplace(delta_law, model.rate0(m));

    std::vector<double> out(times.size());
    detail::parallel_for(times.size(), [&](std::size_t i) {
        const double t = times[i];
        const double upper = std::min(t, window.hi);
        double integral = 0.0;
        if (upper > window.lo) {
            std::vector<double> weights(static_cast<std::size_t>(m_max));
            auto integrand = [&](double t1) {
                const double density = specfun::ig_pdf(t1_law, t1);
                if (density == 0.0) return 0.0;
                model.weighted_c(t1, weights);
                const double u = t - t1;
                const double tail = specfun::ig_tail(delta_law, u);
                double acc = 0.0;
                for (int m = 1; m <= m_max; ++m) {
                    const auto k = static_cast<std::size_t>(m - 1);
                    const double rate = model.rate0(m);
                    // E[exp(-rate * min(Delta, u))], split at Delta = u.
                    if (laplace[k] < 1e-18 && rate * u > 41.0) break;
                    const double inside = specfun::ig_tilted_partial(delta_law, rate, u);
                    acc += weights[k] * (inside + std::exp(-rate * u) * tail);
                }
                return density * acc;
            };
            integral = adaptive_quadrature(integrand, window.lo, upper, quad_tol).value;
        }
        out[i] = specfun::ig_tail(t1_law, t) + integral;
    });
    return out;
}

}  // namespace

ResponseCurve survival_curve(const SeriesModel& model, std::span<const double> times, double quad_tol) {
    ResponseCurve curve;
    curve.kind = CurveKind::survival;
    curve.times.assign(times.begin(), times.end());
    curve.values = survival_values(model, times, quad_tol);
    return curve;
}

ResponseCurve arrival_probability(const SeriesModel& model, std::span<const double> times, double quad_tol) {
    ResponseCurve curve;
    curve.kind = CurveKind::arrival_probability;
    curve.times.assign(times.begin(), times.end());
    curve.values = survival_values(model, times, quad_tol);
    for (double& v : curve.values) v = 1.0 - v;
    return curve;
}

ResponseCurve arrival_rate(const SeriesModel& model, std::span<const double> times, double quad_tol) {
    check_grid(times, quad_tol);
    const auto window = t1_window(model);
    const auto& t1_law = model.t1_law();
    const auto& delta_law = model.delta_law();
    const double delta_hi = tail_cutoff(delta_law, 1e-16);
    const int m_max = model.truncation().m_max;

    ResponseCurve curve;
    curve.kind = CurveKind::arrival_rate;
    curve.times.assign(times.begin(), times.end());
    curve.values.assign(times.size(), 0.0);
    detail::parallel_for(times.size(), [&](std::size_t i) {
        const double t = times[i];
        const double lower = std::max(window.lo, t - delta_hi);
        const double upper = std::min(t, window.hi);
        if (!(upper > lower)) return;
        std::vector<double> weights(static_cast<std::size_t>(m_max));
        auto integrand = [&](double t1) {
            const double density = specfun::ig_pdf(t1_law, t1);
            if (density == 0.0) return 0.0;
            const double u = t - t1;
            const double tail = specfun::ig_tail(delta_law, u);
            if (tail == 0.0) return 0.0;
            model.weighted_c(t1, weights);
            double acc = 0.0;
            for (int m = 1; m <= m_max; ++m) {
                const double rate = model.rate0(m);
                const double exponent = rate * u;
                if (exponent > 60.0) break;
                acc += rate * std::exp(-exponent) * weights[static_cast<std::size_t>(m - 1)];
            }
            return density * tail * acc;
        };
        curve.values[i] = adaptive_quadrature(integrand, lower, upper, quad_tol).value;
    });
    return curve;
}

}  // namespace tubechannel
