#ifndef TUBECHANNEL_CONFIG_HPP
#define TUBECHANNEL_CONFIG_HPP

#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>

#include "tubechannel/analytic.hpp"
#include "tubechannel/mcsim.hpp"
#include "tubechannel/scenario.hpp"

namespace tubechannel {

/// Everything one CLI invocation needs.
struct RunConfig {
    Scenario scenario;
    SimConfig sim;
    Truncation trunc;
    double grid_step = 0.01;   ///< comparison / output grid [s]
    double pe_threshold = kDefaultPecletThreshold;
    double quad_tol = kDefaultQuadTol;
    std::filesystem::path output_dir = ".";
};

class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// INI-style text:
///
///   [scenario]   rho v d_coef d1 d2 n_emit kin_visc
///   [sim]        dt horizon n_molecules replications seed bin_width
///                tube_length early_exit_sigma
///   [trunc]      m_max n_max l_max
///   [run]        grid_step pe_threshold quad_tol output_dir
///
/// one `key = value` per line, `;` starts a comment. Missing keys keep
/// their defaults; unknown sections or keys are rejected.
RunConfig parse_run_config(std::istream& is);
RunConfig load_run_config(const std::filesystem::path& path);
void write_run_config(std::ostream& os, const RunConfig& cfg);

}  // namespace tubechannel

#endif  // TUBECHANNEL_CONFIG_HPP
