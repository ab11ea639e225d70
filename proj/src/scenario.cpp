#include "tubechannel/scenario.hpp"

#include <cmath>
#include <sstream>

namespace tubechannel {

namespace {

bool positive(double x) { return std::isfinite(x) && x > 0.0; }

void common_checks(const Scenario& s, std::vector<std::string>& out) {
    if (!positive(s.rho)) out.push_back("rho must be > 0");
    if (!positive(s.v)) out.push_back("v must be > 0");
    if (!positive(s.d1)) out.push_back("d1 must be > 0");
    if (!std::isfinite(s.d2)) out.push_back("d2 must be finite");
    if (s.n_emit < 1) out.push_back("n_emit must be >= 1");
    if (!positive(s.kin_visc)) out.push_back("kin_visc must be > 0");
}

}  // namespace

std::vector<std::string> scenario_violations(const Scenario& s) {
    std::vector<std::string> out;
    common_checks(s, out);
    if (!positive(s.d_coef)) out.push_back("d_coef must be > 0");
    if (!(s.d2 > s.d1)) out.push_back("d2 must exceed d1");
    return out;
}

std::vector<std::string> simulation_violations(const Scenario& s) {
    std::vector<std::string> out;
    common_checks(s, out);
    if (!(std::isfinite(s.d_coef) && s.d_coef >= 0.0)) out.push_back("d_coef must be >= 0");
    if (!(s.d2 >= s.d1)) out.push_back("d2 must not precede d1");
    return out;
}

void validate(const Scenario& s) {
    auto violations = scenario_violations(s);
    if (violations.empty()) return;
    std::ostringstream msg;
    msg << "invalid scenario:";
    for (const auto& v : violations) msg << ' ' << v << ';';
    throw ScenarioError(msg.str(), std::move(violations));
}

double reynolds(const Scenario& s) { return s.rho * s.v / s.kin_visc; }

double peclet(const Scenario& s) { return s.rho * s.v / s.d_coef; }

RegimeReport validate_regime(const Scenario& s, double pe_threshold) {
    if (!(pe_threshold > 0.0)) throw std::invalid_argument("pe_threshold must be > 0");
    validate(s);
    RegimeReport r;
    r.reynolds = reynolds(s);
    r.peclet = peclet(s);
    r.laminar = r.reynolds < kLaminarReynoldsLimit;
    r.flow_dominated = r.peclet >= pe_threshold;
    return r;
}

std::vector<std::string> regime_warnings(const RegimeReport& report) {
    std::vector<std::string> out;
    if (!report.laminar) {
        std::ostringstream m;
        m << "Re = " << report.reynolds << " is not below " << kLaminarReynoldsLimit
          << "; the flow may not be laminar";
        out.push_back(m.str());
    }
    if (!report.flow_dominated) {
        std::ostringstream m;
        m << "Pe = " << report.peclet << " is below the flow-dominated threshold; the approximation degrades";
        out.push_back(m.str());
    }
    return out;
}

const std::vector<ReferenceExample>& reference_examples() {
    static const std::vector<ReferenceExample> table = [] {
        auto make = [](double rho, double v, double d, double d1) {
            Scenario s;
            s.rho = rho;
            s.v = v;
            s.d_coef = d;
            s.d1 = d1;
            s.d2 = d1 + 20.0;
            s.n_emit = 1000;
            return s;
        };
        return std::vector<ReferenceExample>{
            {1, make(10, 1000, 700, 2000), 0.01, 14.2857, 0.9824},
            {2, make(10, 2000, 400, 2000), 0.02, 50.0, 0.9610},
            {3, make(10, 3000, 100, 2000), 0.03, 300.0, 0.9848},
            {4, make(20, 1000, 700, 3000), 0.02, 28.5714, 0.9488},
            {5, make(20, 2000, 400, 3000), 0.04, 100.0, 0.9518},
            {6, make(20, 3000, 100, 3000), 0.06, 600.0, 0.9600},
        };
    }();
    return table;
}

const ReferenceExample& reference_example(int id) {
    for (const auto& ex : reference_examples()) {
        if (ex.id == id) return ex;
    }
    throw std::out_of_range("no reference example with id " + std::to_string(id));
}

}  // namespace tubechannel
