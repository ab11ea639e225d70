#ifndef TUBECHANNEL_SCENARIO_HPP
#define TUBECHANNEL_SCENARIO_HPP

#include <stdexcept>
#include <string>
#include <vector>

namespace tubechannel {

/// Physical description of the tube link. Units: micrometres and seconds.
struct Scenario {
    double rho = 10.0;       ///< tube radius [um]
    double v = 1000.0;       ///< axial flow velocity [um/s]
    double d_coef = 400.0;   ///< diffusion coefficient D [um^2/s]
    double d1 = 2000.0;      ///< Tx to receiver start [um]
    double d2 = 2020.0;      ///< receiver end coordinate [um]
    long n_emit = 1000;      ///< emitted molecules N_e
    double kin_visc = 1e6;   ///< kinematic viscosity nu [um^2/s], water

    double receiver_length() const { return d2 - d1; }
};

/// Raised when a Scenario violates its invariants.
class ScenarioError : public std::invalid_argument {
public:
    ScenarioError(const std::string& what, std::vector<std::string> violations)
        : std::invalid_argument(what), violations_(std::move(violations)) {}
    const std::vector<std::string>& violations() const { return violations_; }

private:
    std::vector<std::string> violations_;
};

/// Every invariant the analytic model needs (strict positivity, d1 < d2).
std::vector<std::string> scenario_violations(const Scenario& s);

/// Relaxed check used by the particle simulator, which also accepts the
/// degenerate cases D = 0 and d2 = d1.
std::vector<std::string> simulation_violations(const Scenario& s);

/// Throws ScenarioError listing every strict-invariant violation.
void validate(const Scenario& s);

double reynolds(const Scenario& s);
double peclet(const Scenario& s);

inline constexpr double kLaminarReynoldsLimit = 2000.0;
inline constexpr double kDefaultPecletThreshold = 10.0;

struct RegimeReport {
    double reynolds = 0.0;
    double peclet = 0.0;
    bool laminar = false;         ///< Re < 2000
    bool flow_dominated = false;  ///< Pe >= threshold (inclusive)
};

/// Classifies the flow regime. Non-laminar or diffusion-dominated
/// scenarios are reported, not rejected; an invalid Scenario throws.
RegimeReport validate_regime(const Scenario& s, double pe_threshold = kDefaultPecletThreshold);

/// Warnings for a regime report, empty when both flags hold.
std::vector<std::string> regime_warnings(const RegimeReport& report);

/// The six parameter sets of the reference comparison table; receiver
/// length 20 um, 1000 molecules.
struct ReferenceExample {
    int id;
    Scenario scenario;
    double reynolds;
    double peclet;
    double nrmse;
};
const std::vector<ReferenceExample>& reference_examples();
const ReferenceExample& reference_example(int id);

}  // namespace tubechannel

#endif  // TUBECHANNEL_SCENARIO_HPP
