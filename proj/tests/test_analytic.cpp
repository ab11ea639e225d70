#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "oracles.hpp"
#include "tubechannel/analytic.hpp"
#include "tubechannel/scenario.hpp"

using namespace tubechannel;
using specfun::bessel_j;
using specfun::bessel_root;

namespace {

const Scenario& ex(int id) { return reference_example(id).scenario; }

// 2 pi int_0^a f(r) r dr
double disk_integral(const std::function<double(double)>& f, double a, int pieces = 64) {
    return 2.0 * std::numbers::pi *
           oracle::integrate([&](long double r) { return static_cast<long double>(f(static_cast<double>(r))) * r; }, 0.0,
                             a, 1e-13, pieces);
}

}  // namespace

TEST_CASE("truncation and crossing-time validation") {
    CHECK_THROWS_AS(Truncation::make(0, 10), std::invalid_argument);
    CHECK_THROWS_AS(Truncation::make(10, -1), std::invalid_argument);
    CHECK(Truncation::make(5, 7).l_max == 7);
    const auto d = Truncation::make(10, 10).doubled();
    CHECK(d.m_max == 20);
    CHECK(d.n_max == 20);
    CHECK_THROWS_AS(CrossingTimes::make(1.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(CrossingTimes::make(0.0, 1.0), std::invalid_argument);
    const auto ct = nominal_crossing_times(ex(2));
    CHECK(ct.t1 == doctest::Approx(1.0));
    CHECK(ct.t2 == doctest::Approx(1.01));
}

TEST_CASE("curve kind names round trip") {
    for (auto k : {CurveKind::arrival_probability, CurveKind::arrival_rate, CurveKind::survival}) {
        CHECK(curve_kind_from_string(to_string(k)) == k);
    }
    CHECK_THROWS_AS(curve_kind_from_string("nope"), std::invalid_argument);
}

TEST_CASE("alpha_coeff") {
    Scenario s = ex(2);
    const SeriesModel m10(s, Truncation{});
    CHECK(alpha_coeff(m10, 0) == doctest::Approx(1.0 / (100.0 * std::numbers::pi)).epsilon(1e-14));
    const double j0 = static_cast<double>(oracle::bessel_series(0, 3.831705970207512L));
    CHECK(j0 == doctest::Approx(-0.4027594).epsilon(1e-6));
    CHECK(alpha_coeff(m10, 1) == doctest::Approx(1.0 / (100.0 * std::numbers::pi * j0 * j0)).epsilon(1e-12));
    CHECK(alpha_coeff(m10, 1) == doctest::Approx(1.9623e-2).epsilon(1e-4));
    s.rho = 20;
    const SeriesModel m20(s, Truncation{});
    for (int n = 0; n <= 10; ++n) CHECK(alpha_coeff(m20, n) == doctest::Approx(alpha_coeff(m10, n) / 4.0).epsilon(1e-14));
    CHECK_THROWS_AS(alpha_coeff(m10, 11), std::out_of_range);
    CHECK_THROWS_AS(alpha_coeff(m10, -1), std::out_of_range);
}

TEST_CASE("beta_coeff") {
    const SeriesModel model(ex(2), Truncation{});
    const double rho = 10.0;
    // Independent recomputation for m = 1, t1 = 1.
    {
        const long double j0m = oracle::bessel_zero(0, 1);
        long double sum = 0.0L;
        for (int n = 0; n <= 10; ++n) {
            const long double j1n = (n == 0) ? 0.0L : oracle::bessel_zero(1, n);
            const long double j0_at = oracle::bessel_integral(0, j1n);
            sum += std::exp(-400.0L * j1n * j1n / (rho * rho) * 1.0L) / (j0_at * (j0m * j0m - j1n * j1n));
        }
        const long double ref =
            2.0L / (std::numbers::pi_v<long double> * rho * rho) * j0m / oracle::bessel_integral(1, j0m) * sum;
        CHECK(beta_coeff(model, 1, 1.0) == doctest::Approx(static_cast<double>(ref)).epsilon(1e-12));
    }
    // Large t1: only n = 0 survives.
    for (int m = 1; m <= 10; ++m) {
        const double j = bessel_root(0, m);
        const double limit = 2.0 / (std::numbers::pi * rho * rho) * j / (bessel_j(1, j) * j * j);
        CHECK(beta_coeff(model, m, 100.0) == doctest::Approx(limit).epsilon(1e-14));
    }
    CHECK_THROWS_AS(beta_coeff(model, 0, 1.0), std::out_of_range);
    CHECK_THROWS_AS(beta_coeff(model, 1, 0.0), std::invalid_argument);
}

TEST_CASE("beta reconstruction is the L2 projection of the period-1 profile") {
    // Small D so the period-1 profile at t1 still carries several modes.
    Scenario s = ex(2);
    s.d_coef = 5.0;
    const double t1 = 0.5;
    for (int m_max : {10, 40}) {
        const SeriesModel model(s, Truncation::make(m_max, 10));
        auto f = [&](double x) {
            double v = 0.0;
            for (int n = 0; n <= 10; ++n) v += model.alpha(n) * bessel_j(0, model.j1_root(n) * x) * std::exp(-model.rate1(n) * t1);
            return v;
        };
        std::vector<double> beta(static_cast<std::size_t>(m_max));
        for (int m = 1; m <= m_max; ++m) beta[static_cast<std::size_t>(m - 1)] = beta_coeff(model, m, t1);
        auto g = [&](double x) {
            double v = 0.0;
            for (int m = 1; m <= m_max; ++m) v += beta[static_cast<std::size_t>(m - 1)] * bessel_j(0, model.j0_root(m) * x);
            return v;
        };
        auto sq = [](double v) { return v * v; };
        const double err2 =
            oracle::integrate([&](long double x) { return sq(f(static_cast<double>(x)) - g(static_cast<double>(x))) * x; }, 0, 1, 1e-16, 256);
        const double norm2 = oracle::integrate([&](long double x) { return sq(f(static_cast<double>(x))) * x; }, 0, 1, 1e-16, 64);
        // Parseval: ||f - Pf||^2 = ||f||^2 - sum beta_m^2 J1(j0m)^2 / 2.
        double kept = 0.0;
        for (int m = 1; m <= m_max; ++m) kept += sq(beta[static_cast<std::size_t>(m - 1)] * model.j1_at_j0(m)) / 2.0;
        INFO("m_max=" << m_max);
        CHECK(err2 == doctest::Approx(norm2 - kept).epsilon(1e-6));
        // Dirichlet expansion of a profile that is nonzero at the wall.
        CHECK(err2 / norm2 < 4.0 / (std::numbers::pi * std::numbers::pi * m_max));
    }
}

TEST_CASE("gamma_coeff") {
    const SeriesModel model(ex(2), Truncation::make(10, 10, 30));
    const CrossingTimes ct = nominal_crossing_times(ex(2));
    // Mass link with the c_mn form.
    double mass = 0.0;
    for (int m = 1; m <= 10; ++m) {
        for (int n = 0; n <= 10; ++n) {
            mass += c_mn(model, m, n) * std::exp(-(model.rate1(n) * ct.t1 + model.rate0(m) * (ct.t2 - ct.t1)));
        }
    }
    CHECK(gamma_coeff(model, 0, ct) * std::numbers::pi * 100.0 == doctest::Approx(mass).epsilon(1e-12));
    for (int l = 0; l <= 30; ++l) CHECK(std::isfinite(gamma_coeff(model, l, ct)));
    CHECK_THROWS_AS(gamma_coeff(model, 31, ct), std::out_of_range);
}

TEST_CASE("gamma reconstruction approaches the period-2 profile as t2 -> t1") {
    Scenario s = ex(2);
    s.d_coef = 5.0;
    const double t1 = 0.5;
    double prev = INFINITY;
    for (int l_max : {10, 20, 40}) {
        const SeriesModel model(s, Truncation::make(10, 10, l_max));
        const auto ct = CrossingTimes::make(t1, t1 + 1e-9);
        std::vector<double> beta(10);
        for (int m = 1; m <= 10; ++m) beta[static_cast<std::size_t>(m - 1)] = beta_coeff(model, m, t1);
        std::vector<double> gam(static_cast<std::size_t>(l_max + 1));
        for (int l = 0; l <= l_max; ++l) gam[static_cast<std::size_t>(l)] = gamma_coeff(model, l, ct);
        auto g = [&](double x) {
            double v = 0.0;
            for (int m = 1; m <= 10; ++m) v += beta[static_cast<std::size_t>(m - 1)] * bessel_j(0, model.j0_root(m) * x);
            return v;
        };
        auto h = [&](double x) {
            double v = 0.0;
            for (int l = 0; l <= l_max; ++l) v += gam[static_cast<std::size_t>(l)] * bessel_j(0, model.j1_root(l) * x);
            return v;
        };
        const double err2 = oracle::integrate(
            [&](long double x) {
                const double d = g(static_cast<double>(x)) - h(static_cast<double>(x));
                return d * d * x;
            },
            0, 1, 1e-16, 256);
        const double norm2 = oracle::integrate(
            [&](long double x) {
                const double v = g(static_cast<double>(x));
                return v * v * x;
            },
            0, 1, 1e-16, 64);
        INFO("l_max=" << l_max);
        CHECK(err2 / norm2 < 1e-2);
        CHECK(err2 < prev);
        prev = err2;
    }
}

TEST_CASE("c_mn") {
    const SeriesModel model(ex(2), Truncation{});
    CHECK(c_mn(model, 1, 0) == doctest::Approx(4.0 / (2.404825557695773 * 2.404825557695773)).epsilon(1e-14));
    CHECK(c_mn(model, 1, 0) == doctest::Approx(0.691660).epsilon(1e-6));
    CHECK_THROWS_AS(c_mn(model, 0, 0), std::out_of_range);
    CHECK_THROWS_AS(c_mn(model, 1, 11), std::out_of_range);
}

TEST_CASE("column sums of c_mn over 500 rows") {
    const SeriesModel model(ex(2), Truncation::make(500, 5));
    const int M = 500;
    for (int n = 0; n <= 5; ++n) {
        double sum = 0.0;
        for (int m = M; m >= 1; --m) sum += c_mn(model, m, n);
        const double target = (n == 0) ? 1.0 : 0.0;
        // Rows beyond M contribute about 4 / (pi^2 (M + 1/4) J0(j1n)); with that
        // tail restored the identity holds far more tightly.
        const double tail = 4.0 / (std::numbers::pi * std::numbers::pi * (M + 0.25) * model.j0_at_j1(n));
        INFO("n=" << n << " sum=" << sum);
        CHECK(std::fabs(sum + tail - target) <= 1e-5);
        if (n == 0) CHECK(std::fabs(sum - 1.0) <= 2e-3);
    }
}

TEST_CASE("conditional survival plateaus") {
    const SeriesModel model(ex(2), Truncation::make(500, 10));
    const auto ct = nominal_crossing_times(ex(2));
    const double before = conditional_survival(model, 0.3, ct);
    CHECK(before >= 0.998);
    CHECK(before <= 1.002);
    CHECK(conditional_survival(model, 0.0, ct) == before);
    CHECK(conditional_survival(model, ct.t1, ct) == before);
    const double after = conditional_survival(model, ct.t2, ct);
    CHECK(conditional_survival(model, ct.t2 + 0.5, ct) == after);
    CHECK(conditional_survival(model, 10.0, ct) == after);
    const double w = ct.t2 - ct.t1;
    CHECK(conditional_survival(model, ct.t1 + 0.6 * w, ct) <= conditional_survival(model, ct.t1 + 0.3 * w, ct));
    CHECK(after < before);
    CHECK_THROWS_AS(conditional_survival(model, -1.0, ct), std::domain_error);
}

TEST_CASE("period-1 disk integral is one") {
    for (int id : {1, 2, 4, 6}) {
        const SeriesModel model(ex(id), Truncation{});
        const auto ct = nominal_crossing_times(ex(id));
        const double rho = ex(id).rho;
        for (double frac : {0.01, 0.2, 0.9}) {
            const double t = frac * ct.t1;
            const double mass = disk_integral([&](double r) { return radial_concentration(model, r, t, ct); }, rho);
            INFO("example " << id << " t=" << t);
            CHECK(std::fabs(mass - 1.0) <= 1e-10);
        }
    }
}

TEST_CASE("period-2 profile vanishes at the wall") {
    const SeriesModel model(ex(2), Truncation{});
    const auto ct = nominal_crossing_times(ex(2));
    for (double t : {ct.t1, ct.t1 + 0.003, ct.t2 - 1e-6}) CHECK(std::fabs(radial_concentration(model, 10.0, t, ct)) <= 1e-15);
    CHECK(radial_concentration(model, 0.0, ct.t1, ct) > 0.0);
    CHECK_THROWS_AS(radial_concentration(model, 10.5, 0.1, ct), std::domain_error);
    CHECK_THROWS_AS(radial_concentration(model, 1.0, -0.1, ct), std::domain_error);
}

TEST_CASE("early profile concentrates near the axis") {
    // Enough modes to resolve a spot of width ~0.3 um in a 10 um tube.
    const SeriesModel model(ex(2), Truncation::make(1, 400, 0));
    const auto ct = nominal_crossing_times(ex(2));
    double prev = 0.0;
    for (double t : {2e-3, 5e-4, 5e-5}) {
        const double inner = disk_integral([&](double r) { return radial_concentration(model, r, t, ct); }, 1.0, 256);
        INFO("t=" << t << " inner=" << inner);
        CHECK(inner > prev);
        prev = inner;
    }
    CHECK(prev > 0.999);
}

TEST_CASE("axial concentration") {
    const Scenario& s = ex(2);
    const double t = 1.0;
    const double sd = std::sqrt(2.0 * s.d_coef * t);
    CHECK(sd == doctest::Approx(28.2843).epsilon(1e-5));
    const double total = oracle::integrate([&](long double z) { return axial_concentration(s, static_cast<double>(z), t); },
                                           s.v * t - 40 * sd, s.v * t + 40 * sd);
    CHECK(std::fabs(total - 1.0) <= 1e-10);
    CHECK(axial_concentration(s, 2000.0, t) > axial_concentration(s, 2000.0 + 1e-3, t));
    CHECK(axial_concentration(s, 2000.0, t) > axial_concentration(s, 2000.0 - 1e-3, t));
    CHECK_THROWS_AS(axial_concentration(s, 0.0, 0.0), std::domain_error);
}

TEST_CASE("full concentration: mass, axisymmetry, linearity") {
    Scenario s = ex(2);
    const SeriesModel model(s, Truncation{});
    const auto ct = nominal_crossing_times(s);
    const double t = 0.5;
    const double sd = std::sqrt(2.0 * s.d_coef * t);
    // Separable: integrate r at the peak z, then z at r = 0, then combine.
    const double disk = disk_integral([&](double r) { return concentration(model, r, 0.0, s.v * t, t, ct); }, s.rho);
    const double line = oracle::integrate(
        [&](long double z) { return concentration(model, 0.0, 0.0, static_cast<double>(z), t, ct); }, s.v * t - 40 * sd,
        s.v * t + 40 * sd);
    const double peak = concentration(model, 0.0, 0.0, s.v * t, t, ct);
    const double mass = disk * line / peak;
    CHECK(std::fabs(mass - static_cast<double>(s.n_emit)) <= 1e-6 * static_cast<double>(s.n_emit));

    for (double r : {0.0, 3.0, 9.9}) {
        CHECK(concentration(model, r, 0.0, 1000.0, t, ct) == concentration(model, r, std::numbers::pi, 1000.0, t, ct));
    }
    Scenario doubled = s;
    doubled.n_emit *= 2;
    const SeriesModel model2(doubled, Truncation{});
    CHECK(concentration(model2, 2.0, 0.0, 990.0, t, ct) == doctest::Approx(2.0 * concentration(model, 2.0, 0.0, 990.0, t, ct)).epsilon(1e-15));
}

TEST_CASE("uniform grid") {
    const auto g = uniform_grid(3.5, 0.01);
    REQUIRE(g.size() == 351);
    CHECK(g.front() == 0.0);
    CHECK(g.back() == doctest::Approx(3.5));
    CHECK_THROWS_AS(uniform_grid(1.0, 0.0), std::invalid_argument);
}

TEST_CASE("arrival probability basic properties") {
    for (const auto& row : reference_examples()) {
        const SeriesModel model(row.scenario, Truncation{});
        const auto grid = uniform_grid(3.5, 0.05);
        const auto R = arrival_probability(model, grid);
        INFO("example " << row.id);
        CHECK(R.values.front() == 0.0);
        CHECK(R.values.back() < 1.0);
        CHECK(R.values.back() > 0.05);
        for (std::size_t i = 1; i < R.values.size(); ++i) CHECK(R.values[i] >= R.values[i - 1] - kTruncationEpsilon);
        const auto S = survival_curve(model, grid);
        for (std::size_t i = 0; i < grid.size(); ++i) CHECK(S.values[i] + R.values[i] == doctest::Approx(1.0).epsilon(1e-15));
    }
}

TEST_CASE("arrival probability rejects bad grids") {
    const SeriesModel model(ex(2), Truncation{});
    const std::vector<double> bad{0.0, 0.2, 0.1};
    CHECK_THROWS_AS(arrival_probability(model, bad), std::invalid_argument);
    const std::vector<double> ok{0.0, 0.1};
    CHECK_THROWS_AS(arrival_probability(model, ok, 0.0), std::invalid_argument);
}

TEST_CASE("arrival probability against brute-force double integral") {
    // Oracle: average S(t | t1, t1 + delta) over both IG laws by nested quadrature.
    const Scenario& s = ex(2);
    const SeriesModel model(s, Truncation{});
    const auto t1law = model.t1_law();
    const auto dlaw = model.delta_law();
    const double t = 1.005;
    auto inner = [&](double t1) {
        return oracle::integrate(
            [&](long double d) {
                const double dd = static_cast<double>(d);
                const auto ct = CrossingTimes::make(t1, t1 + std::max(dd, 1e-12));
                return oracle::ig_density(dlaw.mu, dlaw.lambda, d) * conditional_survival(model, t, ct);
            },
            0.0, 0.2, 1e-11, 32);
    };
    const double lo = 0.9, hi = 1.1;
    const double mass_before = oracle::integrate([&](long double x) { return oracle::ig_density(t1law.mu, t1law.lambda, x); }, 0, lo, 1e-13, 16);
    const double after = oracle::integrate([&](long double x) { return oracle::ig_density(t1law.mu, t1law.lambda, x); }, std::min(t, hi), 5.0, 1e-13, 16);
    const double mid = oracle::integrate(
        [&](long double x) { return oracle::ig_density(t1law.mu, t1law.lambda, x) * inner(static_cast<double>(x)); }, lo, t, 1e-9,
        16);
    // t1 < lo: fully inside the ring-less regime only if t1 + delta < t, which
    // carries negligible mass here, so those paths contribute S(t | .) at
    // saturation; t1 in (lo, t) is integrated exactly.
    REQUIRE(mass_before < 1e-9);
    const double survival = after + mid;
    const std::vector<double> grid{0.0, t};
    const auto R = arrival_probability(model, grid);
    CHECK(std::fabs((1.0 - survival) - R.values[1]) <= 1e-6);
}

TEST_CASE("arrival rate basic properties") {
    const SeriesModel model(ex(3), Truncation{});
    const auto grid = uniform_grid(3.5, 0.005);
    const auto r = arrival_rate(model, grid);
    CHECK(r.values.front() == 0.0);
    for (double v : r.values) CHECK(v >= -kTruncationEpsilon);
    const auto peak = std::max_element(r.values.begin(), r.values.end()) - r.values.begin();
    const double t_peak = grid[static_cast<std::size_t>(peak)];
    CHECK(t_peak >= 0.6);
    CHECK(t_peak <= 0.75);
}

TEST_CASE("rate integrates to the probability at fine truncation") {
    // The truncated survival route treats dropped fast modes as absorbed on
    // arrival; the gap shrinks like 4 / (pi^2 m_max).
    const SeriesModel model(ex(2), Truncation::make(400, 10));
    const auto grid = uniform_grid(1.2, 0.001);
    const auto R = arrival_probability(model, grid);
    const auto r = arrival_rate(model, grid);
    double integral = 0.0, worst = 0.0;
    for (std::size_t i = 1; i < grid.size(); ++i) {
        integral += 0.5 * (r.values[i] + r.values[i - 1]) * (grid[i] - grid[i - 1]);
        worst = std::max(worst, std::fabs(R.values[i] - integral));
    }
    CHECK(worst <= 4e-3);
}

TEST_CASE("doubling the truncation moves R less each time") {
    // Slow radial decay, so modes beyond the tenth still matter.
    const Scenario& s = ex(6);
    const std::vector<double> grid{0.0, 1.0, 1.2, 3.5};
    const auto r10 = arrival_probability(SeriesModel(s, Truncation::make(10, 10)), grid);
    const auto r20 = arrival_probability(SeriesModel(s, Truncation::make(20, 20)), grid);
    const auto r40 = arrival_probability(SeriesModel(s, Truncation::make(40, 40)), grid);
    for (std::size_t i = 1; i < grid.size(); ++i) {
        CHECK(std::fabs(r40.values[i] - r20.values[i]) < std::fabs(r20.values[i] - r10.values[i]));
    }
}

TEST_CASE("response curve interpolation") {
    ResponseCurve c;
    c.times = {0.0, 1.0, 2.0};
    c.values = {0.0, 1.0, 3.0};
    CHECK(c.interpolate(0.5) == doctest::Approx(0.5));
    CHECK(c.interpolate(1.5) == doctest::Approx(2.0));
    CHECK(c.interpolate(2.0) == 3.0);
    CHECK_THROWS_AS(c.interpolate(2.1), std::out_of_range);
}
