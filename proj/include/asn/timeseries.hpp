#ifndef ASN_TIMESERIES_HPP
#define ASN_TIMESERIES_HPP

#include <array>
#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

#include "asn/ordered_sample.hpp"

// Monthly flux ingestion and summaries. Two CSV layouts:
//   long: station,year,month,flux        (one record per row)
//   wide: station,year,<12 month cells>  (one station-year per row)
// The cells "", "NA" and "na" denote a missing value. Malformed rows are
// collected with their line numbers instead of aborting the load; duplicate
// (station, year, month) keys are always an error.

namespace asn {

enum class Layout { long_format, wide_format };

inline Layout parse_layout(const std::string& s) {
    if (s == "long") return Layout::long_format;
    if (s == "wide") return Layout::wide_format;
    throw std::invalid_argument("unknown layout: " + s + " (expected long|wide)");
}

struct MonthlyRecord {
    int year;
    int month;                   // 1..12
    std::optional<double> flux;  // >= 0 when present
};

struct MonthlySeries {
    std::string station_id;
    std::vector<MonthlyRecord> rows;
};

struct ParseIssue {
    int line;  // 1-based line number in the file
    std::string message;
};

struct LoadResult {
    std::vector<MonthlySeries> series;
    std::vector<ParseIssue> issues;
};

namespace detail {

inline std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

inline std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> out;
    std::string cell;
    std::istringstream in(line);
    while (std::getline(in, cell, ','))
        out.push_back(trim(cell));
    if (!line.empty() && line.back() == ',')
        out.emplace_back();
    return out;
}

inline bool is_missing_cell(const std::string& s) {
    return s.empty() || s == "NA" || s == "na";
}

inline bool parse_double(const std::string& s, double& out) {
    try {
        std::size_t pos = 0;
        out = std::stod(s, &pos);
        return pos == s.size() && std::isfinite(out);
    } catch (const std::exception&) {
        return false;
    }
}

inline bool parse_int(const std::string& s, int& out) {
    try {
        std::size_t pos = 0;
        out = std::stoi(s, &pos);
        return pos == s.size();
    } catch (const std::exception&) {
        return false;
    }
}

inline MonthlySeries& station_slot(std::vector<MonthlySeries>& all, const std::string& id) {
    for (auto& s : all)
        if (s.station_id == id)
            return s;
    all.push_back(MonthlySeries{id, {}});
    return all.back();
}

}  // namespace detail

inline LoadResult load_csv(const std::string& path, Layout layout, bool strict = false) {
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot open file: " + path);

    LoadResult result;
    std::set<std::tuple<std::string, int, int>> seen;
    std::string line;
    int lineno = 0;
    int data_rows = 0;

    auto add_record = [&](const std::string& station, int year, int month,
                          const std::string& cell, int at_line) -> bool {
        if (month < 1 || month > 12) {
            result.issues.push_back({at_line, "month out of range: " + std::to_string(month)});
            return false;
        }
        std::optional<double> flux;
        if (!detail::is_missing_cell(cell)) {
            double v;
            if (!detail::parse_double(cell, v)) {
                result.issues.push_back({at_line, "bad flux value: '" + cell + "'"});
                return false;
            }
            if (v < 0.0) {
                result.issues.push_back({at_line, "negative flux: " + cell});
                return false;
            }
            flux = v;
        }
        if (!seen.insert({station, year, month}).second)
            throw std::runtime_error("duplicate record for (" + station + ", " +
                                     std::to_string(year) + ", " + std::to_string(month) + ")");
        detail::station_slot(result.series, station).rows.push_back({year, month, flux});
        return true;
    };

    bool header_done = false;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        if (detail::trim(line).empty())
            continue;
        const auto cells = detail::split_csv(line);
        if (!header_done) {
            header_done = true;  // first non-empty row is the header
            continue;
        }
        ++data_rows;
        if (layout == Layout::long_format) {
            if (cells.size() != 4) {
                result.issues.push_back({lineno, "expected 4 columns, got " +
                                                     std::to_string(cells.size())});
                continue;
            }
            int year, month;
            if (cells[0].empty() || !detail::parse_int(cells[1], year) ||
                !detail::parse_int(cells[2], month)) {
                result.issues.push_back({lineno, "bad station/year/month"});
                continue;
            }
            add_record(cells[0], year, month, cells[3], lineno);
        } else {
            if (cells.size() != 14) {
                result.issues.push_back({lineno, "expected 14 columns, got " +
                                                     std::to_string(cells.size())});
                continue;
            }
            int year;
            if (cells[0].empty() || !detail::parse_int(cells[1], year)) {
                result.issues.push_back({lineno, "bad station/year"});
                continue;
            }
            for (int m = 1; m <= 12; ++m)
                add_record(cells[0], year, m, cells[1 + m], lineno);
        }
    }

    if (strict && data_rows > 0 &&
        result.issues.size() * 2 > static_cast<std::size_t>(data_rows))
        throw std::runtime_error("strict mode: " + std::to_string(result.issues.size()) +
                                 " of " + std::to_string(data_rows) + " rows malformed");
    return result;
}

inline void write_csv(const std::vector<MonthlySeries>& all, Layout layout,
                      std::ostream& os) {
    char buf[64];
    auto fmt = [&](const std::optional<double>& v) -> std::string {
        if (!v)
            return "NA";
        std::snprintf(buf, sizeof buf, "%.17g", *v);
        return buf;
    };
    if (layout == Layout::long_format) {
        os << "station,year,month,flux\n";
        for (const auto& s : all)
            for (const auto& r : s.rows)
                os << s.station_id << ',' << r.year << ',' << r.month << ','
                   << fmt(r.flux) << '\n';
    } else {
        static const char* kMonth[12] = {"jan", "feb", "mar", "apr", "may", "jun",
                                         "jul", "aug", "sep", "oct", "nov", "dec"};
        os << "station,year";
        for (const char* m : kMonth)
            os << ',' << m;
        os << '\n';
        for (const auto& s : all) {
            // collect the distinct years in first-appearance order
            std::vector<int> years;
            for (const auto& r : s.rows)
                if (std::find(years.begin(), years.end(), r.year) == years.end())
                    years.push_back(r.year);
            for (int y : years) {
                std::array<std::optional<double>, 12> cells{};
                for (const auto& r : s.rows)
                    if (r.year == y)
                        cells[r.month - 1] = r.flux;
                os << s.station_id << ',' << y;
                for (const auto& c : cells)
                    os << ',' << fmt(c);
                os << '\n';
            }
        }
    }
}

// ---------------------------------------------------------------------------
// Log transform: pools the natural log of every strictly positive flux
// across stations and months. Zeros, negatives and missing cells are
// excluded and counted.

struct LogTransformResult {
    OrderedSample sample;
    int missing_count;
    int nonpositive_count;
};

inline LogTransformResult log_transform(const std::vector<MonthlySeries>& all) {
    std::vector<double> logs;
    int missing = 0, nonpositive = 0;
    for (const auto& s : all) {
        for (const auto& r : s.rows) {
            if (!r.flux) {
                ++missing;
            } else if (*r.flux <= 0.0) {
                ++nonpositive;
            } else {
                logs.push_back(std::log(*r.flux));
            }
        }
    }
    if (logs.size() < 4)
        throw std::domain_error("log_transform: fewer than 4 strictly positive flux values");
    return LogTransformResult{OrderedSample::from_data(std::move(logs)), missing, nonpositive};
}

// Raw pooling (no transform); same exclusion accounting for missing cells.
inline OrderedSample pool_flux(const std::vector<MonthlySeries>& all) {
    std::vector<double> vals;
    for (const auto& s : all)
        for (const auto& r : s.rows)
            if (r.flux)
                vals.push_back(*r.flux);
    if (vals.empty())
        throw std::domain_error("pool_flux: no observed flux values");
    return OrderedSample::from_data(std::move(vals));
}

// ---------------------------------------------------------------------------
// Per-month summary, Table-2 style.

struct SummaryRow {
    int month;     // 1..12
    int count;     // observed values
    int na_count;  // missing cells
    std::optional<double> min, q1, median, mean, q3, max;
};

namespace detail {

// Linear interpolation with plotting position p(k) = (k-1)/(n-1); the
// default quantile convention of most statistical environments.
inline double quantile_type7(const std::vector<double>& sorted, double p) {
    const std::size_t n = sorted.size();
    if (n == 1)
        return sorted[0];
    const double h = (n - 1) * p;
    const std::size_t lo = static_cast<std::size_t>(h);
    const std::size_t hi = std::min(lo + 1, n - 1);
    return sorted[lo] + (h - lo) * (sorted[hi] - sorted[lo]);
}

}  // namespace detail

inline std::array<SummaryRow, 12> summarize(const std::vector<MonthlySeries>& all) {
    std::array<std::vector<double>, 12> per_month;
    std::array<int, 12> nas{};
    for (const auto& s : all) {
        for (const auto& r : s.rows) {
            if (r.flux)
                per_month[r.month - 1].push_back(*r.flux);
            else
                ++nas[r.month - 1];
        }
    }
    std::array<SummaryRow, 12> out;
    for (int m = 0; m < 12; ++m) {
        auto& vals = per_month[m];
        SummaryRow row{m + 1, static_cast<int>(vals.size()), nas[m],
                       {}, {}, {}, {}, {}, {}};
        if (!vals.empty()) {
            std::sort(vals.begin(), vals.end());
            double sum = 0.0;
            for (double v : vals)
                sum += v;
            row.min = vals.front();
            row.q1 = detail::quantile_type7(vals, 0.25);
            row.median = detail::quantile_type7(vals, 0.5);
            row.mean = sum / vals.size();
            row.q3 = detail::quantile_type7(vals, 0.75);
            row.max = vals.back();
        }
        out[m] = row;
    }
    return out;
}

inline const char* month_label(int month) {
    static const char* kLabel[12] = {"JAN", "FEB", "MAR", "APR", "MAY", "JUN",
                                     "JUL", "AUG", "SEP", "OCT", "NOV", "DEC"};
    return kLabel[month - 1];
}

}  // namespace asn

#endif  // ASN_TIMESERIES_HPP
