#pragma once

#include <charconv>
#include <cmath>
#include <fstream>
#include <string>
#include <system_error>
#include <vector>

#include "spinforge/core.hpp"
#include "spinforge/errors.hpp"
#include "spinforge/field.hpp"
#include "spinforge/integrate.hpp"

namespace spinforge {

inline constexpr const char* trajectory_csv_header = "t,n1,n2,n3,b1,b2,b3";

// Shortest decimal representation that round-trips the exact double, so
// emitted files are byte-stable and re-ingestion is lossless.
inline std::string format_double(double x) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof(buf), x);
    return std::string(buf, res.ptr);
}

namespace detail {

inline double parse_double(std::string_view token, const std::string& where) {
    double value = 0.0;
    const char* first = token.data();
    const char* last = token.data() + token.size();
    const auto res = std::from_chars(first, last, value);
    if (res.ec != std::errc() || res.ptr != last)
        throw IoError("malformed number '" + std::string(token) + "' in " + where);
    return value;
}

inline std::vector<std::string_view> split_row(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const std::size_t comma = line.find(',', start);
        if (comma == std::string_view::npos) {
            out.push_back(line.substr(start));
            return out;
        }
        out.push_back(line.substr(start, comma - start));
        start = comma + 1;
    }
}

inline std::ofstream open_for_write(const std::string& path) {
    if (path.empty()) throw IoError("output path is empty");
    std::ofstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot open '" + path + "' for writing");
    return f;
}

}  // namespace detail

// One row per grid node: the trajectory and the field that drives it.
inline void write_trajectory_csv(const std::string& path, const BlochTrajectory& traj,
                                 const FieldProgram& field) {
    std::ofstream f = detail::open_for_write(path);
    std::string out = trajectory_csv_header;
    out += '\n';
    for (std::size_t k = 0; k < traj.samples.size(); ++k) {
        const double t = traj.grid.node(static_cast<int>(k));
        const BlochVector& n = traj.samples[k];
        const Vec3 b = field.value(t);
        out += format_double(t);
        out += ',';
        out += format_double(n.n1);
        out += ',';
        out += format_double(n.n2);
        out += ',';
        out += format_double(n.n3);
        out += ',';
        out += format_double(b.x);
        out += ',';
        out += format_double(b.y);
        out += ',';
        out += format_double(b.z);
        out += '\n';
    }
    f << out;
    if (!f) throw IoError("failed writing '" + path + "'");
}

inline void write_probability_csv(const std::string& path, const std::vector<double>& times,
                                  const std::vector<double>& probabilities) {
    if (times.size() != probabilities.size())
        throw ConfigError("probability table needs matching time/value arrays");
    std::ofstream f = detail::open_for_write(path);
    std::string out = "t,p\n";
    for (std::size_t k = 0; k < times.size(); ++k) {
        out += format_double(times[k]);
        out += ',';
        out += format_double(probabilities[k]);
        out += '\n';
    }
    f << out;
    if (!f) throw IoError("failed writing '" + path + "'");
}

struct TrajectoryFile {
    std::vector<double> times;
    std::vector<Vec3> n;
    std::vector<Vec3> b;
};

inline TrajectoryFile read_trajectory_csv(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot open '" + path + "' for reading");

    std::string line;
    if (!std::getline(f, line) || line != trajectory_csv_header)
        throw IoError("'" + path + "' does not start with the trajectory CSV header");

    TrajectoryFile out;
    std::size_t row = 1;
    while (std::getline(f, line)) {
        ++row;
        if (line.empty()) continue;
        const auto cols = detail::split_row(line);
        if (cols.size() != 7)
            throw IoError("row " + std::to_string(row) + " of '" + path + "' has " +
                          std::to_string(cols.size()) + " columns, expected 7");
        const std::string where = "'" + path + "' row " + std::to_string(row);
        out.times.push_back(detail::parse_double(cols[0], where));
        out.n.push_back({detail::parse_double(cols[1], where),
                         detail::parse_double(cols[2], where),
                         detail::parse_double(cols[3], where)});
        out.b.push_back({detail::parse_double(cols[4], where),
                         detail::parse_double(cols[5], where),
                         detail::parse_double(cols[6], where)});
    }
    if (out.times.size() < 2) throw IoError("'" + path + "' holds fewer than two data rows");
    return out;
}

// Re-ingest the field columns as an interpolating FieldProgram.
inline FieldProgram sampled_field_from_csv(const std::string& path) {
    TrajectoryFile data = read_trajectory_csv(path);
    return FieldProgram::sampled(std::move(data.times), std::move(data.b));
}

// Re-ingest the trajectory columns. Requires the uniform grid the writer
// produced; times must start at 0 and be evenly spaced.
inline BlochTrajectory bloch_trajectory_from_csv(const std::string& path) {
    const TrajectoryFile data = read_trajectory_csv(path);
    const std::size_t rows = data.times.size();
    const double tau = data.times.back();
    if (!(tau > 0.0) || std::abs(data.times.front()) > 1e-12 * std::max(1.0, tau))
        throw IoError("'" + path + "' trajectory must run on [0, tau]");
    const TimeGrid grid(tau, static_cast<int>(rows - 1));
    for (std::size_t k = 0; k < rows; ++k) {
        if (std::abs(data.times[k] - grid.node(static_cast<int>(k))) > 1e-9 * std::max(1.0, tau))
            throw IoError("'" + path + "' trajectory times are not uniformly spaced");
    }
    std::vector<BlochVector> samples;
    samples.reserve(rows);
    for (const Vec3& v : data.n) samples.emplace_back(v);
    return {grid, std::move(samples), 0.0};
}

}  // namespace spinforge
