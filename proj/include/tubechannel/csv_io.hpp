#ifndef TUBECHANNEL_CSV_IO_HPP
#define TUBECHANNEL_CSV_IO_HPP

// CSV readers and writers for every file the tools emit. Plain '.'
// decimals, '\n' line ends, no quoting.

#include <filesystem>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "tubechannel/analytic.hpp"
#include "tubechannel/mcsim.hpp"
#include "tubechannel/metrics.hpp"

namespace tubechannel::csv {

/// `t,value,kind`; times with 9 significant digits, values round-trip exact.
void write_response_curve(std::ostream& os, const ResponseCurve& curve);
ResponseCurve read_response_curve(std::istream& is);

/// `t,absorbed_fraction` on the bin grid.
void write_empirical_cdf(std::ostream& os, const EnsembleResult& result);
/// `t_bin_start,absorbed_count_per_molecule`.
void write_rate_histogram(std::ostream& os, const EnsembleResult& result);

/// Two numeric columns under an exact header line.
std::pair<std::vector<double>, std::vector<double>> read_columns(std::istream& is, const std::string& header);

/// `example_id,rmse,nmse,nrmse,n_samples,seed`.
void write_metrics(std::ostream& os, const std::vector<MetricReport>& rows);
std::vector<MetricReport> read_metrics(std::istream& is);

/// Opens `path` for writing (creating parent directories) and hands the
/// stream to `body`; throws std::runtime_error when the file cannot be written.
template <class Body>
void write_file(const std::filesystem::path& path, Body&& body);

std::string format_time(double t);
std::string format_value(double v);

}  // namespace tubechannel::csv

#include <fstream>
#include <stdexcept>

template <class Body>
void tubechannel::csv::write_file(const std::filesystem::path& path, Body&& body) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot open " + path.string() + " for writing");
    body(os);
    os.flush();
    if (!os) throw std::runtime_error("failed writing " + path.string());
}

#endif  // TUBECHANNEL_CSV_IO_HPP
