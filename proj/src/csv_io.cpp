#include "tubechannel/csv_io.hpp"

#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace tubechannel::csv {

namespace {

std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> out;
    std::string field;
    std::istringstream ss(line);
    while (std::getline(ss, field, ',')) out.push_back(field);
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

double to_double(const std::string& s, std::size_t line_no) {
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(s, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used != s.size() || s.empty()) {
        throw std::runtime_error("csv line " + std::to_string(line_no) + ": bad number '" + s + "'");
    }
    return v;
}

void expect_header(std::istream& is, const std::string& header) {
    std::string line;
    if (!std::getline(is, line) || line != header) {
        throw std::runtime_error("csv: expected header '" + header + "', got '" + line + "'");
    }
}

}  // namespace

std::string format_time(double t) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.9g", t);
    return buf;
}

std::string format_value(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_response_curve(std::ostream& os, const ResponseCurve& curve) {
    const std::string kind = to_string(curve.kind);
    os << "t,value,kind\n";
    for (std::size_t i = 0; i < curve.times.size(); ++i) {
        os << format_time(curve.times[i]) << ',' << format_value(curve.values[i]) << ',' << kind << '\n';
    }
}

ResponseCurve read_response_curve(std::istream& is) {
    expect_header(is, "t,value,kind");
    ResponseCurve curve;
    std::string line;
    std::size_t line_no = 1;
    bool first = true;
    while (std::getline(is, line)) {
        ++line_no;
        if (line.empty()) continue;
        const auto f = split(line);
        if (f.size() != 3) throw std::runtime_error("csv line " + std::to_string(line_no) + ": expected 3 fields");
        const CurveKind kind = curve_kind_from_string(f[2]);
        if (first) {
            curve.kind = kind;
            first = false;
        } else if (kind != curve.kind) {
            throw std::runtime_error("csv line " + std::to_string(line_no) + ": mixed curve kinds");
        }
        curve.times.push_back(to_double(f[0], line_no));
        curve.values.push_back(to_double(f[1], line_no));
    }
    return curve;
}

void write_empirical_cdf(std::ostream& os, const EnsembleResult& result) {
    os << "t,absorbed_fraction\n";
    const auto& cdf = result.empirical_cdf;
    for (std::size_t i = 0; i < cdf.times.size(); ++i) {
        os << format_time(cdf.times[i]) << ',' << format_value(cdf.values[i]) << '\n';
    }
}

void write_rate_histogram(std::ostream& os, const EnsembleResult& result) {
    os << "t_bin_start,absorbed_count_per_molecule\n";
    for (std::size_t i = 0; i < result.bin_starts.size(); ++i) {
        os << format_time(result.bin_starts[i]) << ',' << format_value(result.rate_histogram[i]) << '\n';
    }
}

std::pair<std::vector<double>, std::vector<double>> read_columns(std::istream& is, const std::string& header) {
    expect_header(is, header);
    std::pair<std::vector<double>, std::vector<double>> out;
    std::string line;
    std::size_t line_no = 1;
    while (std::getline(is, line)) {
        ++line_no;
        if (line.empty()) continue;
        const auto f = split(line);
        if (f.size() != 2) throw std::runtime_error("csv line " + std::to_string(line_no) + ": expected 2 fields");
        out.first.push_back(to_double(f[0], line_no));
        out.second.push_back(to_double(f[1], line_no));
    }
    return out;
}

void write_metrics(std::ostream& os, const std::vector<MetricReport>& rows) {
    os << "example_id,rmse,nmse,nrmse,n_samples,seed\n";
    for (const auto& r : rows) {
        os << r.example_id << ',' << format_value(r.rmse) << ',' << format_value(r.nmse) << ','
           << format_value(r.nrmse) << ',' << r.n_samples << ',' << r.seed << '\n';
    }
}

std::vector<MetricReport> read_metrics(std::istream& is) {
    expect_header(is, "example_id,rmse,nmse,nrmse,n_samples,seed");
    std::vector<MetricReport> rows;
    std::string line;
    std::size_t line_no = 1;
    while (std::getline(is, line)) {
        ++line_no;
        if (line.empty()) continue;
        const auto f = split(line);
        if (f.size() != 6) throw std::runtime_error("csv line " + std::to_string(line_no) + ": expected 6 fields");
        MetricReport r;
        r.example_id = f[0];
        r.rmse = to_double(f[1], line_no);
        r.nmse = to_double(f[2], line_no);
        r.nrmse = to_double(f[3], line_no);
        r.n_samples = static_cast<std::size_t>(std::stoull(f[4]));
        r.seed = std::stoull(f[5]);
        rows.push_back(std::move(r));
    }
    return rows;
}

}  // namespace tubechannel::csv
