#include "tubechannel/specfun.hpp"

#include <gsl/gsl_errno.h>
#include <gsl/gsl_sf_erf.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

namespace tubechannel::specfun {

namespace {

constexpr double kSeriesLimit = 12.0;

void check_order(int order) {
    if (order != 0 && order != 1) {
        throw std::domain_error("bessel order must be 0 or 1, got " + std::to_string(order));
    }
}

// Ascending power series, accumulated in long double to keep the
// alternating cancellation below 1e-15 up to |x| = 12.
double bessel_series(int order, double x) {
    const long double q = -0.25L * static_cast<long double>(x) * x;
    long double term = (order == 0) ? 1.0L : 0.5L * x;
    long double sum = term;
    for (int k = 1; k < 200; ++k) {
        term *= q / (static_cast<long double>(k) * (k + order));
        sum += term;
        if (std::fabs(term) < 1e-22L * std::fabs(sum) && k > std::fabs(x)) break;
    }
    return static_cast<double>(sum);
}

// Hankel expansion J_nu(x) ~ sqrt(2/(pi x)) (P cos chi - Q sin chi),
// truncated at the smallest term.
double bessel_asymptotic(int order, double x) {
    const double mu = 4.0 * order * order;
    const double eightx = 8.0 * x;
    double p = 1.0;
    double q = 0.0;
    double a = 1.0;
    double prev = 1.0;
    for (int k = 1; k < 200; ++k) {
        const double odd = 2.0 * k - 1.0;
        a *= (mu - odd * odd) / (k * eightx);
        const double mag = std::fabs(a);
        if (mag > prev || mag < 1e-18) break;
        prev = mag;
        switch (k % 4) {
            case 1: q += a; break;
            case 2: p -= a; break;
            case 3: q -= a; break;
            case 0: p += a; break;
        }
    }
    const double chi = x - (0.5 * order + 0.25) * std::numbers::pi;
    return std::sqrt(2.0 / (std::numbers::pi * x)) * (p * std::cos(chi) - q * std::sin(chi));
}

double bessel_j_derivative(int order, double x) {
    if (order == 0) return -bessel_j(1, x);
    return bessel_j(0, x) - bessel_j(1, x) / x;
}

double mcmahon_guess(int order, int k) {
    const double mu = 4.0 * order * order;
    const double beta = (k + 0.5 * order - 0.25) * std::numbers::pi;
    const double b8 = 8.0 * beta;
    return beta - (mu - 1.0) / b8 - 4.0 * (mu - 1.0) * (7.0 * mu - 31.0) / (3.0 * std::pow(b8, 3)) -
           32.0 * (mu - 1.0) * (83.0 * mu * mu - 982.0 * mu + 3779.0) / (15.0 * std::pow(b8, 5));
}

// Newton from the McMahon guess, kept inside a sign-change bracket that
// is narrower than half the root spacing (> pi/2), so the k-th root is
// never skipped.
double find_root(int order, int k) {
    const double guess = mcmahon_guess(order, k);
    double lo = guess - 0.25;
    double hi = guess + 0.25;
    double flo = bessel_j(order, lo);
    double fhi = bessel_j(order, hi);
    for (int widen = 0; flo * fhi > 0.0; ++widen) {
        if (widen > 8) {
            throw std::runtime_error("bessel_root: no sign change near McMahon guess for k=" +
                                     std::to_string(k));
        }
        lo -= 0.125;
        hi += 0.125;
        flo = bessel_j(order, lo);
        fhi = bessel_j(order, hi);
    }
    double x = guess;
    for (int it = 0; it < 100; ++it) {
        const double f = bessel_j(order, x);
        if (f == 0.0) return x;
        if ((f < 0.0) == (flo < 0.0)) {
            lo = x;
            flo = f;
        } else {
            hi = x;
        }
        const double df = bessel_j_derivative(order, x);
        double next = x - f / df;
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        const double step = std::fabs(next - x);
        x = next;
        if (step <= 4.0 * std::numeric_limits<double>::epsilon() * x) break;
    }
    return x;
}

BesselRootTable build_table(int order) {
    BesselRootTable table;
    table.order = order;
    table.roots.reserve(kRootTableSize);
    if (order == 1) table.roots.push_back(0.0);
    for (int k = 1; table.roots.size() < kRootTableSize; ++k) {
        const double r = find_root(order, k);
        if (!table.roots.empty() && !(r > table.roots.back() + 2.0)) {
            throw std::logic_error("bessel root table not strictly separated at k=" + std::to_string(k));
        }
        table.roots.push_back(r);
    }
    return table;
}

// log(erfc(x)) without underflow; GSL switches to an asymptotic form for
// large arguments.
double log_erfc(double x) {
    gsl_sf_result result;
    const int status = gsl_sf_log_erfc_e(x, &result);
    if (status != GSL_SUCCESS) {
        throw std::domain_error("log_erfc failed for x=" + std::to_string(x));
    }
    return result.val;
}

struct GslHandlerGuard {
    GslHandlerGuard() { gsl_set_error_handler_off(); }
};
const GslHandlerGuard gsl_guard;

// log of the standard normal CDF.
double log_phi(double x) { return log_q_function(-x); }

}  // namespace

double BesselRootTable::at(int k) const {
    const long idx = (order == 0) ? static_cast<long>(k) - 1 : static_cast<long>(k);
    if (idx < 0 || static_cast<std::size_t>(idx) >= roots.size()) {
        throw std::out_of_range("root index " + std::to_string(k) + " outside table");
    }
    return roots[static_cast<std::size_t>(idx)];
}

double bessel_j(int order, double x) {
    check_order(order);
    if (!std::isfinite(x)) {
        throw std::domain_error("bessel_j: argument must be finite");
    }
    const double ax = std::fabs(x);
    const double value = (ax <= kSeriesLimit) ? bessel_series(order, ax) : bessel_asymptotic(order, ax);
    return (order == 1 && x < 0.0) ? -value : value;
}

double bessel_root(int order, int k) {
    check_order(order);
    if (k < 0 || (order == 0 && k == 0)) {
        throw std::domain_error("bessel_root: index " + std::to_string(k) + " undefined for order " +
                                std::to_string(order));
    }
    if (order == 1 && k == 0) return 0.0;
    const auto& table = bessel_roots(order);
    const std::size_t idx = static_cast<std::size_t>(order == 0 ? k - 1 : k);
    if (idx < table.count()) return table.roots[idx];
    return find_root(order, k);
}

const BesselRootTable& bessel_roots(int order) {
    check_order(order);
    // Function-local statics: initialisation is thread-safe and runs once.
    if (order == 0) {
        static const BesselRootTable zero = build_table(0);
        return zero;
    }
    static const BesselRootTable one = build_table(1);
    return one;
}

std::vector<double> bessel_root_sequence(int order, std::size_t count) {
    const auto& table = bessel_roots(order);
    std::vector<double> out(table.roots.begin(),
                            table.roots.begin() + static_cast<long>(std::min(count, table.count())));
    const int first = (order == 0) ? 1 : 0;
    for (std::size_t i = out.size(); i < count; ++i) {
        out.push_back(find_root(order, static_cast<int>(i) + first));
    }
    return out;
}

double q_function(double x) {
    if (!std::isfinite(x)) {
        throw std::domain_error("q_function: argument must be finite");
    }
    return 0.5 * std::erfc(x / std::numbers::sqrt2);
}

double log_q_function(double x) {
    if (!std::isfinite(x)) {
        throw std::domain_error("log_q_function: argument must be finite");
    }
    return log_erfc(x / std::numbers::sqrt2) - std::numbers::ln2;
}

InverseGaussianParams InverseGaussianParams::make(double mu, double lambda) {
    if (!(std::isfinite(mu) && mu > 0.0 && std::isfinite(lambda) && lambda > 0.0)) {
        throw std::invalid_argument("inverse Gaussian parameters must be finite and positive (mu=" +
                                    std::to_string(mu) + ", lambda=" + std::to_string(lambda) + ")");
    }
    return InverseGaussianParams{mu, lambda};
}

double InverseGaussianParams::stddev() const { return std::sqrt(mu * mu * mu / lambda); }

InverseGaussianParams first_passage_params(double distance, double velocity, double diffusion) {
    return InverseGaussianParams::make(distance / velocity, distance * distance / (2.0 * diffusion));
}

double ig_pdf(const InverseGaussianParams& p, double x) {
    if (!(x > 0.0)) return 0.0;
    if (std::isinf(x)) return 0.0;
    const double dev = x - p.mu;
    const double log_density = 0.5 * std::log(p.lambda / (2.0 * std::numbers::pi * x * x * x)) -
                               p.lambda * dev * dev / (2.0 * p.mu * p.mu * x);
    return std::exp(log_density);
}

double ig_cdf(const InverseGaussianParams& p, double x) {
    if (!(x > 0.0)) return 0.0;
    if (std::isinf(x)) return 1.0;
    const double root = std::sqrt(p.lambda / x);
    const double a = root * (x / p.mu - 1.0);
    const double b = root * (x / p.mu + 1.0);
    const double value = std::exp(log_phi(a)) + std::exp(2.0 * p.lambda / p.mu + log_phi(-b));
    return std::min(1.0, value);
}

double ig_tail(const InverseGaussianParams& p, double x) {
    if (x < 0.0 || std::isnan(x)) {
        throw std::domain_error("ig_tail: x must be non-negative");
    }
    if (x == 0.0) return 1.0;
    if (std::isinf(x)) return 0.0;
    const double root = std::sqrt(p.lambda / x);
    const double a = root * (x / p.mu - 1.0);
    const double b = root * (x / p.mu + 1.0);
    const double value = q_function(a) - std::exp(2.0 * p.lambda / p.mu + log_q_function(b));
    return std::clamp(value, 0.0, 1.0);
}

double ig_tilted_partial(const InverseGaussianParams& p, double s, double x) {
    if (s < 0.0 || x < 0.0 || std::isnan(s) || std::isnan(x)) {
        throw std::domain_error("ig_tilted_partial: s and x must be non-negative");
    }
    if (x == 0.0) return 0.0;
    const double mu_s = p.mu / std::sqrt(1.0 + 2.0 * s * p.mu * p.mu / p.lambda);
    const double shift = p.lambda / p.mu - p.lambda / mu_s;
    if (std::isinf(x)) return std::exp(shift);
    const double root = std::sqrt(p.lambda / x);
    const double a = root * (x / mu_s - 1.0);
    const double b = root * (x / mu_s + 1.0);
    return std::exp(shift + log_phi(a)) + std::exp(p.lambda / p.mu + p.lambda / mu_s + log_phi(-b));
}

}  // namespace tubechannel::specfun
