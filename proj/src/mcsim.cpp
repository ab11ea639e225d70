#include "tubechannel/mcsim.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "parallel.hpp"

namespace tubechannel {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Time on the bin grid compares with a small slack so that absorption
// times that are exact multiples of bin_width land in the right bin.
constexpr double kGridSlack = 1e-9;

}  // namespace

long SimConfig::step_count() const { return std::llround(horizon / dt); }

std::vector<std::string> config_violations(const SimConfig& cfg) {
    std::vector<std::string> out;
    if (!(std::isfinite(cfg.dt) && cfg.dt > 0.0)) out.push_back("dt must be > 0");
    if (!(std::isfinite(cfg.horizon) && cfg.horizon >= cfg.dt)) out.push_back("horizon must be >= dt");
    if (cfg.n_molecules < 1) out.push_back("n_molecules must be >= 1");
    if (cfg.replications < 1) out.push_back("replications must be >= 1");
    if (!(std::isfinite(cfg.bin_width) && cfg.bin_width >= cfg.dt)) out.push_back("bin_width must be >= dt");
    if (!(cfg.tube_length > 0.0)) out.push_back("tube_length must be > 0");
    if (!(cfg.early_exit_sigma >= 0.0)) out.push_back("early_exit_sigma must be >= 0");
    return out;
}

void validate(const SimConfig& cfg) {
    const auto v = config_violations(cfg);
    if (v.empty()) return;
    std::ostringstream msg;
    msg << "invalid simulation config:";
    for (const auto& item : v) msg << ' ' << item << ';';
    throw std::invalid_argument(msg.str());
}

Xoshiro256pp::Xoshiro256pp(std::uint64_t key) {
    // State filled from a SplitMix64 sequence, never all zero.
    std::uint64_t x = key;
    for (auto& word : s_) {
        x += 0x9e3779b97f4a7c15ULL;
        word = splitmix64(x);
    }
}

std::uint64_t ParticleRng::stream_key(std::uint64_t seed, std::uint64_t replication, std::uint64_t particle) {
    return splitmix64(splitmix64(splitmix64(seed) ^ replication) ^ particle);
}

ParticleRng::ParticleRng(std::uint64_t seed, std::uint64_t replication, std::uint64_t particle)
    : engine_(stream_key(seed, replication, particle)) {}

void apply_boundary(ParticleState& p, const Scenario& s, double t_end, SimDiagnostics* diag) {
    const double r2 = p.x * p.x + p.y * p.y;
    const double rho = s.rho;
    if (r2 <= rho * rho) return;
    if (p.z >= s.d1 && p.z < s.d2) {
        p.status = ParticleStatus::absorbed;
        p.event_time = t_end;
        return;
    }
    const double r = std::sqrt(r2);
    double scale;
    if (r > 2.0 * rho) {
        scale = rho / r;
        if (diag) ++diag->overshoot_clamps;
    } else {
        scale = (2.0 * rho - r) / r;
    }
    p.x *= scale;
    p.y *= scale;
}

ParticleState step(ParticleState p, const Scenario& s, double dt, double t_end, ParticleRng& rng,
                   SimDiagnostics* diag) {
    if (p.status != ParticleStatus::alive) {
        throw std::logic_error("step: particle is not alive");
    }
    const double sigma = std::sqrt(2.0 * s.d_coef * dt);
    p.x += sigma * rng.normal();
    p.y += sigma * rng.normal();
    p.z += s.v * dt + sigma * rng.normal();
    apply_boundary(p, s, t_end, diag);
    return p;
}

namespace {

void check_inputs(const Scenario& s, const SimConfig& cfg) {
    validate(cfg);
    const auto v = simulation_violations(s);
    if (!v.empty()) {
        std::ostringstream msg;
        msg << "invalid scenario for simulation:";
        for (const auto& item : v) msg << ' ' << item << ';';
        throw ScenarioError(msg.str(), v);
    }
}

// Downstream removal threshold per step: the tube end, tightened by the
// early-exit margin d2 + k sqrt(2 D (horizon - t)) when enabled.
std::vector<double> exit_thresholds(const Scenario& s, const SimConfig& cfg, long steps) {
    std::vector<double> out(static_cast<std::size_t>(steps));
    for (long k = 0; k < steps; ++k) {
        const double t_end = static_cast<double>(k + 1) * cfg.dt;
        double limit = cfg.tube_length;
        if (cfg.early_exit_sigma > 0.0) {
            const double remaining = std::max(0.0, cfg.horizon - t_end);
            limit = std::min(limit, s.d2 + cfg.early_exit_sigma * std::sqrt(2.0 * s.d_coef * remaining));
        }
        out[static_cast<std::size_t>(k)] = limit;
    }
    return out;
}

}  // namespace

ReplicationRecord run_replication(const Scenario& s, const SimConfig& cfg, int rep_index) {
    check_inputs(s, cfg);
    const long steps = cfg.step_count();
    const auto thresholds = exit_thresholds(s, cfg, steps);
    const double sigma = std::sqrt(2.0 * s.d_coef * cfg.dt);
    const double drift = s.v * cfg.dt;

    ReplicationRecord record;
    record.replication = rep_index;
    record.molecules = cfg.n_molecules;
    for (long i = 0; i < cfg.n_molecules; ++i) {
        ParticleRng rng(cfg.seed, static_cast<std::uint64_t>(rep_index), static_cast<std::uint64_t>(i));
        ParticleState p;
        for (long k = 0; k < steps; ++k) {
            const double t_end = static_cast<double>(k + 1) * cfg.dt;
            // Inlined step(): same update and boundary rule.
            p.x += sigma * rng.normal();
            p.y += sigma * rng.normal();
            p.z += drift + sigma * rng.normal();
            apply_boundary(p, s, t_end, &record.diagnostics);
            if (p.status == ParticleStatus::absorbed) {
                record.absorption_times.push_back(t_end);
                break;
            }
            if (p.z > thresholds[static_cast<std::size_t>(k)]) {
                p.status = ParticleStatus::exited;
                record.exit_times.push_back(t_end);
                break;
            }
        }
    }
    std::sort(record.absorption_times.begin(), record.absorption_times.end());
    std::sort(record.exit_times.begin(), record.exit_times.end());
    return record;
}

double EnsembleResult::absorbed_fraction(double t) const {
    if (total_molecules == 0) return 0.0;
    const auto n = std::upper_bound(absorption_times.begin(), absorption_times.end(), t) - absorption_times.begin();
    return static_cast<double>(n) / static_cast<double>(total_molecules);
}

double EnsembleResult::final_fraction() const {
    if (total_molecules == 0) return 0.0;
    return static_cast<double>(absorption_times.size()) / static_cast<double>(total_molecules);
}

StatusCounts EnsembleResult::counts_at(double t) const {
    StatusCounts c;
    c.absorbed = std::upper_bound(absorption_times.begin(), absorption_times.end(), t) - absorption_times.begin();
    c.exited = std::upper_bound(exit_times.begin(), exit_times.end(), t) - exit_times.begin();
    c.alive = total_molecules - c.absorbed - c.exited;
    return c;
}

std::vector<double> EnsembleResult::replication_fractions(long molecules_per_replication) const {
    std::vector<double> out;
    out.reserve(absorbed_per_replication.size());
    for (long n : absorbed_per_replication) {
        out.push_back(static_cast<double>(n) / static_cast<double>(molecules_per_replication));
    }
    return out;
}

EnsembleResult aggregate(std::span<const ReplicationRecord> records, const SimConfig& cfg) {
    EnsembleResult out;
    for (const auto& rec : records) {
        out.total_molecules += rec.molecules;
        out.absorption_times.insert(out.absorption_times.end(), rec.absorption_times.begin(),
                                    rec.absorption_times.end());
        out.exit_times.insert(out.exit_times.end(), rec.exit_times.begin(), rec.exit_times.end());
        out.absorbed_per_replication.push_back(rec.absorbed());
        out.exited_per_replication.push_back(rec.exited());
        out.diagnostics.overshoot_clamps += rec.diagnostics.overshoot_clamps;
    }
    std::sort(out.absorption_times.begin(), out.absorption_times.end());
    std::sort(out.exit_times.begin(), out.exit_times.end());

    const auto bins = static_cast<std::size_t>(std::ceil(cfg.horizon / cfg.bin_width - kGridSlack));
    std::vector<long> cumulative(bins + 1);
    for (std::size_t k = 0; k <= bins; ++k) {
        const double edge = static_cast<double>(k) * cfg.bin_width + kGridSlack * cfg.bin_width;
        cumulative[k] = std::upper_bound(out.absorption_times.begin(), out.absorption_times.end(), edge) -
                        out.absorption_times.begin();
    }
    const double total = static_cast<double>(std::max<long>(out.total_molecules, 1));
    out.empirical_cdf.kind = CurveKind::arrival_probability;
    out.empirical_cdf.times.resize(bins + 1);
    out.empirical_cdf.values.resize(bins + 1);
    for (std::size_t k = 0; k <= bins; ++k) {
        out.empirical_cdf.times[k] = static_cast<double>(k) * cfg.bin_width;
        out.empirical_cdf.values[k] = static_cast<double>(cumulative[k]) / total;
    }
    out.bin_starts.resize(bins);
    out.rate_histogram.resize(bins);
    for (std::size_t k = 0; k < bins; ++k) {
        out.bin_starts[k] = static_cast<double>(k) * cfg.bin_width;
        out.rate_histogram[k] = static_cast<double>(cumulative[k + 1] - cumulative[k]) / total;
    }
    return out;
}

EnsembleResult run_ensemble(const Scenario& s, const SimConfig& cfg) {
    check_inputs(s, cfg);
    std::vector<ReplicationRecord> records(static_cast<std::size_t>(cfg.replications));
    detail::parallel_for(records.size(), [&](std::size_t i) {
        records[i] = run_replication(s, cfg, static_cast<int>(i));
    });
    return aggregate(records, cfg);
}

std::vector<double> axial_first_passage_times(const Scenario& s, const SimConfig& cfg, double level,
                                              std::size_t count) {
    check_inputs(s, cfg);
    const long steps = cfg.step_count();
    const double sigma = std::sqrt(2.0 * s.d_coef * cfg.dt);
    const double drift = s.v * cfg.dt;
    std::vector<double> out(count, std::numeric_limits<double>::infinity());
    detail::parallel_for(count, [&](std::size_t i) {
        // Replication index -1 keeps these streams apart from ensemble runs.
        ParticleRng rng(cfg.seed, ~std::uint64_t{0}, static_cast<std::uint64_t>(i));
        double z = 0.0;
        for (long k = 0; k < steps; ++k) {
            z += drift + sigma * rng.normal();
            if (z >= level) {
                out[i] = static_cast<double>(k + 1) * cfg.dt;
                break;
            }
        }
    });
    return out;
}

}  // namespace tubechannel
