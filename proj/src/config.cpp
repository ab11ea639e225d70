#include "tubechannel/config.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <fstream>
#include <map>
#include <ostream>
#include <set>

#include "tubechannel/csv_io.hpp"

namespace tubechannel {

namespace pt = boost::property_tree;

namespace {

const std::map<std::string, std::set<std::string>>& known_keys() {
    static const std::map<std::string, std::set<std::string>> keys{
        {"scenario", {"rho", "v", "d_coef", "d1", "d2", "n_emit", "kin_visc"}},
        {"sim",
         {"dt", "horizon", "n_molecules", "replications", "seed", "bin_width", "tube_length", "early_exit_sigma"}},
        {"trunc", {"m_max", "n_max", "l_max"}},
        {"run", {"grid_step", "pe_threshold", "quad_tol", "output_dir"}},
    };
    return keys;
}

template <class T>
void read(const pt::ptree& tree, const std::string& path, T& target) {
    const auto node = tree.get_optional<std::string>(path);
    if (!node) return;
    try {
        target = tree.get<T>(path);
    } catch (const pt::ptree_error&) {
        throw ConfigError("config: cannot parse '" + path + "' = '" + *node + "'");
    }
}

}  // namespace

RunConfig parse_run_config(std::istream& is) {
    pt::ptree tree;
    try {
        pt::read_ini(is, tree);
    } catch (const pt::ini_parser_error& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
    for (const auto& [section, body] : tree) {
        const auto it = known_keys().find(section);
        if (it == known_keys().end() || body.empty()) {
            throw ConfigError("config: unknown section or top-level key '" + section + "'");
        }
        for (const auto& [key, value] : body) {
            if (!it->second.contains(key)) throw ConfigError("config: unknown key '" + section + "." + key + "'");
        }
    }

    RunConfig cfg;
    read(tree, "scenario.rho", cfg.scenario.rho);
    read(tree, "scenario.v", cfg.scenario.v);
    read(tree, "scenario.d_coef", cfg.scenario.d_coef);
    read(tree, "scenario.d1", cfg.scenario.d1);
    read(tree, "scenario.d2", cfg.scenario.d2);
    read(tree, "scenario.n_emit", cfg.scenario.n_emit);
    read(tree, "scenario.kin_visc", cfg.scenario.kin_visc);
    read(tree, "sim.dt", cfg.sim.dt);
    read(tree, "sim.horizon", cfg.sim.horizon);
    read(tree, "sim.n_molecules", cfg.sim.n_molecules);
    read(tree, "sim.replications", cfg.sim.replications);
    read(tree, "sim.seed", cfg.sim.seed);
    read(tree, "sim.bin_width", cfg.sim.bin_width);
    read(tree, "sim.tube_length", cfg.sim.tube_length);
    read(tree, "sim.early_exit_sigma", cfg.sim.early_exit_sigma);
    int l_max = -1;
    read(tree, "trunc.m_max", cfg.trunc.m_max);
    read(tree, "trunc.n_max", cfg.trunc.n_max);
    read(tree, "trunc.l_max", l_max);
    try {
        cfg.trunc = Truncation::make(cfg.trunc.m_max, cfg.trunc.n_max, l_max);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
    read(tree, "run.grid_step", cfg.grid_step);
    read(tree, "run.pe_threshold", cfg.pe_threshold);
    read(tree, "run.quad_tol", cfg.quad_tol);
    std::string out_dir = cfg.output_dir.string();
    read(tree, "run.output_dir", out_dir);
    cfg.output_dir = out_dir;
    return cfg;
}

RunConfig load_run_config(const std::filesystem::path& path) {
    std::ifstream is(path);
    if (!is) throw ConfigError("config: cannot open " + path.string());
    return parse_run_config(is);
}

void write_run_config(std::ostream& os, const RunConfig& cfg) {
    using csv::format_value;
    const auto& s = cfg.scenario;
    const auto& m = cfg.sim;
    os << "[scenario]\n"
       << "rho = " << format_value(s.rho) << "\nv = " << format_value(s.v) << "\nd_coef = " << format_value(s.d_coef)
       << "\nd1 = " << format_value(s.d1) << "\nd2 = " << format_value(s.d2) << "\nn_emit = " << s.n_emit
       << "\nkin_visc = " << format_value(s.kin_visc) << "\n\n[sim]\n"
       << "dt = " << format_value(m.dt) << "\nhorizon = " << format_value(m.horizon)
       << "\nn_molecules = " << m.n_molecules << "\nreplications = " << m.replications << "\nseed = " << m.seed
       << "\nbin_width = " << format_value(m.bin_width) << "\ntube_length = " << format_value(m.tube_length)
       << "\nearly_exit_sigma = " << format_value(m.early_exit_sigma) << "\n\n[trunc]\n"
       << "m_max = " << cfg.trunc.m_max << "\nn_max = " << cfg.trunc.n_max << "\nl_max = " << cfg.trunc.l_max
       << "\n\n[run]\n"
       << "grid_step = " << format_value(cfg.grid_step) << "\npe_threshold = " << format_value(cfg.pe_threshold)
       << "\nquad_tol = " << format_value(cfg.quad_tol) << "\noutput_dir = " << cfg.output_dir.string() << "\n";
}

}  // namespace tubechannel
