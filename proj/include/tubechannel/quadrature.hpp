#ifndef TUBECHANNEL_QUADRATURE_HPP
#define TUBECHANNEL_QUADRATURE_HPP

#include <cstddef>
#include <functional>
#include <stdexcept>
#include <string>

namespace tubechannel {

/// Raised when a numerical routine cannot reach its requested accuracy.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct QuadratureResult {
    double value = 0.0;
    double abs_error = 0.0;
    std::size_t intervals = 0;
};

inline constexpr std::size_t kDefaultSubdivisionCap = 2000;

/// Globally adaptive Gauss-Kronrod (21-point) integration of f over [a, b].
/// Converged when the error estimate is below max(tol, tol * |I|). Throws
/// NumericalError, with the last estimate in the message, once the
/// subdivision cap is reached without convergence.
QuadratureResult adaptive_quadrature(const std::function<double(double)>& f, double a, double b,
                                     double tol, std::size_t max_intervals = kDefaultSubdivisionCap);

}  // namespace tubechannel

#endif  // TUBECHANNEL_QUADRATURE_HPP
