#include "tubechannel/quadrature.hpp"

#include <gsl/gsl_errno.h>
#include <gsl/gsl_integration.h>

#include <cmath>
#include <exception>
#include <memory>
#include <sstream>

namespace tubechannel {

namespace {

struct WorkspaceDeleter {
    void operator()(gsl_integration_workspace* w) const { gsl_integration_workspace_free(w); }
};

struct Trampoline {
    const std::function<double(double)>* f;
    std::exception_ptr error;
};

double call(double x, void* params) {
    auto* t = static_cast<Trampoline*>(params);
    if (t->error) return 0.0;
    try {
        return (*t->f)(x);
    } catch (...) {
        t->error = std::current_exception();
        return 0.0;
    }
}

}  // namespace

QuadratureResult adaptive_quadrature(const std::function<double(double)>& f, double a, double b,
                                     double tol, std::size_t max_intervals) {
    if (!(a <= b)) throw std::invalid_argument("adaptive_quadrature: requires a <= b");
    if (!(tol > 0.0)) throw std::invalid_argument("adaptive_quadrature: tol must be positive");
    if (a == b) return {0.0, 0.0, 0};

    gsl_set_error_handler_off();
    std::unique_ptr<gsl_integration_workspace, WorkspaceDeleter> ws(
        gsl_integration_workspace_alloc(max_intervals));
    Trampoline tramp{&f, nullptr};
    gsl_function gf{&call, &tramp};

    QuadratureResult out;
    const int status = gsl_integration_qag(&gf, a, b, tol, tol, max_intervals, GSL_INTEG_GAUSS21, ws.get(),
                                           &out.value, &out.abs_error);
    if (tramp.error) std::rethrow_exception(tramp.error);
    out.intervals = ws->size;
    if (status != GSL_SUCCESS || !std::isfinite(out.value)) {
        std::ostringstream msg;
        msg << "adaptive_quadrature did not converge on [" << a << ", " << b << "]: " << gsl_strerror(status)
            << "; estimate " << out.value << " +- " << out.abs_error << " after " << out.intervals
            << " intervals (tol " << tol << ")";
        throw NumericalError(msg.str());
    }
    return out;
}

}  // namespace tubechannel
