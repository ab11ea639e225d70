#ifndef TUBECHANNEL_MCSIM_HPP
#define TUBECHANNEL_MCSIM_HPP

/**
 * @file mcsim.hpp
 * @brief Particle-based Brownian dynamics for the ring-receiver tube.
 *
 * Molecules start on the axis at z = 0 and take Euler-Maruyama steps:
 * Cartesian (x, y) diffusion plus axial drift and diffusion. A molecule
 * whose end-of-step position lies outside the wall is absorbed if its z is
 * in [d1, d2); otherwise it is reflected specularly in the radial
 * direction. Every molecule draws from its own generator keyed by
 * (seed, replication, particle), so results are bit-identical for a given
 * seed regardless of how replications are scheduled.
 */

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <boost/random/normal_distribution.hpp>

#include "tubechannel/analytic.hpp"
#include "tubechannel/scenario.hpp"

namespace tubechannel {

struct SimConfig {
    double dt = 1e-5;               ///< time step [s]
    double horizon = 3.5;           ///< simulated time [s]
    long n_molecules = 1000;        ///< molecules per replication
    int replications = 100;
    std::uint64_t seed = 1;
    double bin_width = 0.01;        ///< rate histogram bin [s]
    double tube_length = 3500.0;    ///< molecules beyond z = L are removed [um]
    double early_exit_sigma = 10.0; ///< downstream removal margin; 0 disables

    long step_count() const;
};

std::vector<std::string> config_violations(const SimConfig& cfg);
void validate(const SimConfig& cfg);

enum class ParticleStatus : std::uint8_t { alive, absorbed, exited };

struct ParticleState {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;
    ParticleStatus status = ParticleStatus::alive;
    double event_time = 0.0;  ///< absorption or exit time when not alive
};

struct SimDiagnostics {
    long overshoot_clamps = 0;  ///< reflections with r > 2 rho, clamped to the wall
};

/// xoshiro256++ (Blackman and Vigna); Boost 1.74 has no equivalent.
class Xoshiro256pp {
public:
    using result_type = std::uint64_t;
    explicit Xoshiro256pp(std::uint64_t key);
    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return ~result_type{0}; }
    result_type operator()() {
        const result_type out = rotl(s_[0] + s_[3], 23) + s_[0];
        const result_type t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return out;
    }

private:
    static result_type rotl(result_type x, int k) { return (x << k) | (x >> (64 - k)); }
    result_type s_[4];
};

/// Per-particle generator. Streams are derived from (seed, replication,
/// particle) through a SplitMix64 mix.
class ParticleRng {
public:
    ParticleRng(std::uint64_t seed, std::uint64_t replication, std::uint64_t particle);
    double normal() { return normal_(engine_); }

    static std::uint64_t stream_key(std::uint64_t seed, std::uint64_t replication, std::uint64_t particle);

private:
    Xoshiro256pp engine_;
    boost::random::normal_distribution<double> normal_;
};

/// Wall handling for an end-of-step position at time t_end: absorb on the
/// ring, otherwise reflect r -> 2 rho - r keeping the angle.
void apply_boundary(ParticleState& p, const Scenario& s, double t_end, SimDiagnostics* diag = nullptr);

/// One Euler-Maruyama step of length dt ending at t_end, followed by
/// apply_boundary. Requires p alive.
ParticleState step(ParticleState p, const Scenario& s, double dt, double t_end, ParticleRng& rng,
                   SimDiagnostics* diag = nullptr);

struct ReplicationRecord {
    int replication = 0;
    long molecules = 0;
    std::vector<double> absorption_times;  ///< ascending
    std::vector<double> exit_times;        ///< ascending
    SimDiagnostics diagnostics;

    long absorbed() const { return static_cast<long>(absorption_times.size()); }
    long exited() const { return static_cast<long>(exit_times.size()); }
    long alive() const { return molecules - absorbed() - exited(); }
};

ReplicationRecord run_replication(const Scenario& s, const SimConfig& cfg, int rep_index);

struct StatusCounts {
    long absorbed = 0;
    long exited = 0;
    long alive = 0;
};

struct EnsembleResult {
    long total_molecules = 0;
    std::vector<double> absorption_times;  ///< all replications, ascending
    std::vector<double> exit_times;        ///< all replications, ascending
    std::vector<long> absorbed_per_replication;
    std::vector<long> exited_per_replication;
    ResponseCurve empirical_cdf;           ///< fraction absorbed by t on {k * bin_width}
    std::vector<double> bin_starts;
    std::vector<double> rate_histogram;    ///< absorbed per bin / total molecules
    SimDiagnostics diagnostics;

    /// Right-continuous empirical CDF: fraction absorbed at or before t.
    double absorbed_fraction(double t) const;
    double final_fraction() const;
    StatusCounts counts_at(double t) const;
    /// Final absorbed fraction of each replication.
    std::vector<double> replication_fractions(long molecules_per_replication) const;
};

EnsembleResult run_ensemble(const Scenario& s, const SimConfig& cfg);

/// Merges replication records in index order; used by run_ensemble.
EnsembleResult aggregate(std::span<const ReplicationRecord> records, const SimConfig& cfg);

/// First-passage times of the axial coordinate through z = level, using the
/// same axial update as step() and ignoring the wall. Paths that have not
/// crossed by cfg.horizon report +infinity.
std::vector<double> axial_first_passage_times(const Scenario& s, const SimConfig& cfg, double level,
                                              std::size_t count);

}  // namespace tubechannel

#endif  // TUBECHANNEL_MCSIM_HPP
