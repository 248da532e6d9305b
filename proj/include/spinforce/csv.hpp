#pragma once

// Flat-file interchange: exclusion curves and readout scans as CSV
// (UTF-8, LF line endings, scientific notation).

#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "spinforce/limits.hpp"
#include "spinforce/readout.hpp"

namespace spinforce {

inline constexpr const char* kCurveHeader = "lambda_m,alp_mass_ev,g_bound";
inline constexpr const char* kReadoutHeader = "phi_mw_rad,mean_counts,std_error";

// Malformed input file; the message names the offending line.
class CsvError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

namespace csv_detail {

inline std::string sci(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12e", v);
    return buf;
}

}  // namespace csv_detail

// Rows are written in grid order; non-finite bounds never reach the file.
inline void write_curve_csv(std::ostream& os, const ExclusionCurve& curve) {
    using csv_detail::sci;
    os << kCurveHeader << '\n';
    for (const auto& p : curve.points) {
        if (!std::isfinite(p.g_bound) || !std::isfinite(p.alp_mass)) continue;
        os << sci(p.lambda) << ',' << sci(p.alp_mass) << ',' << sci(p.g_bound) << '\n';
    }
}

inline void write_readout_csv(std::ostream& os, const SimulatedReadout& r) {
    using csv_detail::sci;
    os << kReadoutHeader << '\n';
    for (const auto& p : r.points) os << sci(p.phi_mw) << ',' << sci(p.mean_counts) << ',' << sci(p.std_error) << '\n';
}

// Reads `phi_mw_rad,mean_counts[,std_error]`. Measured data without errors
// may omit the third column (std_error is then 0 and the fit is unweighted).
inline SimulatedReadout read_readout_csv(std::istream& in, const std::string& name = "input") {
    SimulatedReadout r;
    std::string line;
    int lineno = 0;
    bool header_seen = false;
    std::size_t columns = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const std::string where = name + ":" + std::to_string(lineno);
        if (!header_seen) {
            if (line == kReadoutHeader) columns = 3;
            else if (line == "phi_mw_rad,mean_counts") columns = 2;
            else throw CsvError(where + ": expected header '" + std::string(kReadoutHeader) + "'");
            header_seen = true;
            continue;
        }
        std::vector<double> fields;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) {
            std::size_t used = 0;
            double v = 0.0;
            try {
                v = std::stod(cell, &used);
            } catch (const std::exception&) {
                throw CsvError(where + ": '" + cell + "' is not a number");
            }
            if (cell.find_first_not_of(" \t", used) != std::string::npos || !std::isfinite(v))
                throw CsvError(where + ": '" + cell + "' is not a finite number");
            fields.push_back(v);
        }
        if (fields.size() != columns)
            throw CsvError(where + ": expected " + std::to_string(columns) + " columns, found " +
                           std::to_string(fields.size()));
        r.points.push_back({fields[0], fields[1], columns == 3 ? fields[2] : 0.0});
    }
    if (!header_seen) throw CsvError(name + ": empty file");
    return r;
}

}  // namespace spinforce
