#ifndef TUBECHANNEL_ANALYTIC_HPP
#define TUBECHANNEL_ANALYTIC_HPP

/**
 * @file analytic.hpp
 * @brief Approximate channel response of a tube with an absorbing ring.
 *
 * Model: advection-diffusion with uniform axial velocity v inside a tube of
 * radius rho. The wall reflects everywhere except on the ring
 * z in [d1, d2), where it absorbs. In the flow-dominated regime the
 * concentration separates into a cross-sectional factor and an axial
 * Gaussian. The cross-section sees three periods:
 *
 *   [0, t1)   reflecting wall:  sum_n alpha_n J0(j1n r/rho) e^{-D j1n^2 t/rho^2}
 *   [t1, t2)  absorbing wall:   sum_m beta_m  J0(j0m r/rho) e^{-D j0m^2 (t-t1)/rho^2}
 *   [t2, inf) reflecting wall:  sum_l gamma_l J0(j1l r/rho) e^{-D j1l^2 (t-t2)/rho^2}
 *
 * with continuity imposed at t1 and t2. The radial operator is the standard
 * cylindrical Laplacian (d^2/dr^2 + (1/r) d/dr) restricted to axisymmetric
 * profiles, which is what the J0 modes solve.
 *
 * Integrating the concentration over the tube gives the survival
 * probability conditional on the plane-crossing times, and averaging over
 * the inverse-Gaussian laws of T1 (crossing z = d1) and Delta = T2 - T1
 * gives the arrival probability R(t) = 1 - S(t) and arrival rate r(t).
 *
 * All sums over modes run in fixed index order, so results are
 * deterministic for a given model.
 */

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "tubechannel/scenario.hpp"
#include "tubechannel/specfun.hpp"

namespace tubechannel {

/// Mode counts: m = 1..m_max over J0 zeros, n = 0..n_max over J1 zeros,
/// l = 0..l_max for the period-3 coefficients.
struct Truncation {
    int m_max = 10;
    int n_max = 10;
    int l_max = 10;

    static Truncation make(int m_max, int n_max, int l_max = -1);
    Truncation doubled() const { return make(2 * m_max, 2 * n_max, 2 * l_max); }
};

struct CrossingTimes {
    double t1 = 0.0;
    double t2 = 0.0;

    static CrossingTimes make(double t1, double t2);
};

/// Deterministic crossing times d1/v and d2/v used for concentration queries.
CrossingTimes nominal_crossing_times(const Scenario& s);

enum class CurveKind { arrival_probability, arrival_rate, survival };

std::string to_string(CurveKind kind);
CurveKind curve_kind_from_string(const std::string& name);

struct ResponseCurve {
    std::vector<double> times;
    std::vector<double> values;
    CurveKind kind = CurveKind::arrival_probability;

    /// Linear interpolation inside [times.front(), times.back()].
    double interpolate(double t) const;
};

/// Slack for truncated-series artefacts (small negative rates, sub-1e-3
/// dips in R) at the default truncation. Clamping to [0, 1] happens only
/// in reporting code.
inline constexpr double kTruncationEpsilon = 1e-3;

/// Scenario plus truncation with the Bessel data and the (m, n)
/// coefficient matrix cached. Immutable after construction.
class SeriesModel {
public:
    SeriesModel(const Scenario& scenario, const Truncation& trunc);

    const Scenario& scenario() const { return scenario_; }
    const Truncation& truncation() const { return trunc_; }

    /// j_{0,m}, m = 1..m_max
    double j0_root(int m) const { return j0_[static_cast<std::size_t>(m - 1)]; }
    /// j_{1,n}, n = 0..max(n_max, l_max)
    double j1_root(int n) const { return j1_[static_cast<std::size_t>(n)]; }
    /// D j_{0,m}^2 / rho^2 [1/s]
    double rate0(int m) const { return rate0_[static_cast<std::size_t>(m - 1)]; }
    /// D j_{1,n}^2 / rho^2 [1/s]
    double rate1(int n) const { return rate1_[static_cast<std::size_t>(n)]; }
    double j0_at_j1(int n) const { return j0_at_j1_[static_cast<std::size_t>(n)]; }
    double j1_at_j0(int m) const { return j1_at_j0_[static_cast<std::size_t>(m - 1)]; }

    double alpha(int n) const { return alpha_[static_cast<std::size_t>(n)]; }
    double c(int m, int n) const {
        return c_[static_cast<std::size_t>(m - 1) * static_cast<std::size_t>(trunc_.n_max + 1) +
                  static_cast<std::size_t>(n)];
    }

    /// sum_n c_{m,n} exp(-rate1(n) t1) for m = 1..m_max, into `out`.
    void weighted_c(double t1, std::span<double> out) const;

    const specfun::InverseGaussianParams& t1_law() const { return t1_law_; }
    const specfun::InverseGaussianParams& delta_law() const { return delta_law_; }

private:
    Scenario scenario_;
    Truncation trunc_;
    std::vector<double> j0_, j1_;
    std::vector<double> rate0_, rate1_;
    std::vector<double> j0_at_j1_, j1_at_j0_;
    std::vector<double> alpha_;
    std::vector<double> c_;
    specfun::InverseGaussianParams t1_law_;
    specfun::InverseGaussianParams delta_law_;
};

double alpha_coeff(const SeriesModel& model, int n);
double beta_coeff(const SeriesModel& model, int m, double t1);
double gamma_coeff(const SeriesModel& model, int l, const CrossingTimes& ct);
double c_mn(const SeriesModel& model, int m, int n);

/// Cross-sectional density [1/um^2] at radius r, piecewise over the three
/// periods defined by ct.
double radial_concentration(const SeriesModel& model, double r, double t, const CrossingTimes& ct);

/// Axial Gaussian (4 pi D t)^{-1/2} exp(-(z - v t)^2 / (4 D t)) [1/um].
double axial_concentration(const Scenario& s, double z, double t);

/// N_e * radial * axial [1/um^3]; theta only enters through the
/// axisymmetry of the model.
double concentration(const SeriesModel& model, double r, double theta, double z, double t,
                     const CrossingTimes& ct);

/// S(t | t1, t2) = sum_{m,n} c_{m,n} exp(-D (j'1n^2 t1 + j'0m^2 w(t))), with
/// w(t) = clamp(t - t1, 0, t2 - t1) the time spent inside [t1, t2].
double conditional_survival(const SeriesModel& model, double t, const CrossingTimes& ct);

inline constexpr double kDefaultQuadTol = 1e-8;

/// R(t) = 1 - S(t), averaging the conditional survival over
/// T1 ~ IG[d1/v, d1^2/(2D)] and Delta ~ IG[(d2-d1)/v, (d2-d1)^2/(2D)].
/// The inner Delta integral is closed-form (exponential tilting); the outer
/// T1 integral is adaptive quadrature. Throws NumericalError on
/// non-convergence.
ResponseCurve arrival_probability(const SeriesModel& model, std::span<const double> times,
                                  double quad_tol = kDefaultQuadTol);

/// Survival curve S(t) on the same footing as arrival_probability.
ResponseCurve survival_curve(const SeriesModel& model, std::span<const double> times,
                             double quad_tol = kDefaultQuadTol);

/// r(t) = D sum_m j'0m^2 e^{-D j'0m^2 t} sum_n c_{m,n}
///        int_0^t f_T1(t1) P{Delta > t - t1} e^{-D (j'1n^2 - j'0m^2) t1} dt1,
/// evaluated as one quadrature per grid time of the summed integrand, with
/// the exponential pair combined as e^{-D j'0m^2 (t - t1)}.
ResponseCurve arrival_rate(const SeriesModel& model, std::span<const double> times,
                           double quad_tol = kDefaultQuadTol);

/// Uniform grid {k * step : k = 0..round(horizon/step)}.
std::vector<double> uniform_grid(double horizon, double step);

/// Integration window [lo, hi] for T1: lo = max(0, mean - 12 sd), hi the
/// point where the IG tail drops below 1e-14.
struct CrossingWindow {
    double lo = 0.0;
    double hi = 0.0;
};
CrossingWindow t1_window(const SeriesModel& model);

}  // namespace tubechannel

#endif  // TUBECHANNEL_ANALYTIC_HPP
