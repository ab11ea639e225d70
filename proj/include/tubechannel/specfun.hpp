#ifndef TUBECHANNEL_SPECFUN_HPP
#define TUBECHANNEL_SPECFUN_HPP

/**
 * @file specfun.hpp
 * @brief Special-function kernel for the tube channel model.
 *
 * Bessel functions J0 and J1 with their positive zeros, the Gaussian tail
 * Q-function, and inverse-Gaussian (first-passage) distribution primitives.
 * Everything here is a pure function once the root tables are built; the
 * tables themselves are built on first use and shared read-only.
 */

#include <cstddef>
#include <vector>

namespace tubechannel::specfun {

/// Positive zeros of J0 or J1 in ascending order. For order 1 the first
/// entry is the conventional zero j_{1,0} = 0.
struct BesselRootTable {
    int order = 0;
    std::vector<double> roots;

    std::size_t count() const { return roots.size(); }
    /// Root with the same indexing as bessel_root (order 0 starts at k = 1).
    double at(int k) const;
};

/// J_order(x) for order in {0, 1}. Power series for |x| <= 12, Hankel
/// asymptotic expansion beyond.
double bessel_j(int order, double x);

/// k-th positive zero of J_order. (order 1, k 0) is defined as 0;
/// (order 0, k 0) is a domain error.
double bessel_root(int order, int k);

inline constexpr std::size_t kRootTableSize = 2048;

/// Process-wide table of the first kRootTableSize zeros of J_order (for
/// order 1 that includes the leading 0). Built once on first use.
const BesselRootTable& bessel_roots(int order);

/// First `count` zeros of J_order with table indexing, served from the
/// shared table and extended by direct root finding past its end.
std::vector<double> bessel_root_sequence(int order, std::size_t count);

/// Gaussian upper-tail probability Q(x) = P{N(0,1) > x}.
double q_function(double x);

/// log Q(x), finite for any finite x.
double log_q_function(double x);

struct InverseGaussianParams {
    double mu = 1.0;      ///< mean [s]
    double lambda = 1.0;  ///< shape [s]

    /// Throws std::invalid_argument unless both are finite and positive.
    static InverseGaussianParams make(double mu, double lambda);

    double mean() const { return mu; }
    double stddev() const;
};

/// First passage time through a plane at distance `distance` for a drifted
/// Brownian motion with velocity `velocity` and diffusion `diffusion`:
/// IG[distance / velocity, distance^2 / (2 diffusion)].
InverseGaussianParams first_passage_params(double distance, double velocity,
                                           double diffusion);

double ig_pdf(const InverseGaussianParams& p, double x);
double ig_cdf(const InverseGaussianParams& p, double x);

/// P{X > x} from the two-Q-function closed form, with the exponential
/// prefactor folded into log space.
double ig_tail(const InverseGaussianParams& p, double x);

/// Integral over [0, x] of exp(-s * delta) * ig_pdf(delta), evaluated by
/// exponential tilting of the IG law.
double ig_tilted_partial(const InverseGaussianParams& p, double s, double x);

}  // namespace tubechannel::specfun

#endif  // TUBECHANNEL_SPECFUN_HPP
