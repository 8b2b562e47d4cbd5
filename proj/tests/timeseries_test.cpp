#include <catch2/catch.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>

#include "asn/timeseries.hpp"

using asn::Layout;
using asn::MonthlySeries;

namespace {

// writes content to a fresh temp file and returns its path
std::string temp_file(const std::string& content) {
    static int counter = 0;
    const auto path = std::filesystem::temp_directory_path() /
                      ("asn_ts_test_" + std::to_string(++counter) + ".csv");
    std::ofstream out(path);
    out << content;
    return path.string();
}

bool same_series(const std::vector<MonthlySeries>& a,
                 const std::vector<MonthlySeries>& b) {
    if (a.size() != b.size())
        return false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i].station_id != b[i].station_id || a[i].rows.size() != b[i].rows.size())
            return false;
        for (std::size_t r = 0; r < a[i].rows.size(); ++r) {
            const auto& x = a[i].rows[r];
            const auto& y = b[i].rows[r];
            if (x.year != y.year || x.month != y.month || x.flux.has_value() != y.flux.has_value())
                return false;
            if (x.flux && *x.flux != *y.flux)
                return false;
        }
    }
    return true;
}

}  // namespace

TEST_CASE("long layout: values and missing cells", "[timeseries]") {
    const auto path = temp_file("station,year,month,flux\n"
                                "S1,2011,1,0.02\n"
                                "S1,2011,2,NA\n"
                                "S1,2011,3,na\n"
                                "S1,2011,4,\n");
    const auto res = asn::load_csv(path, Layout::long_format);
    CHECK(res.issues.empty());
    REQUIRE(res.series.size() == 1);
    REQUIRE(res.series[0].rows.size() == 4);
    CHECK(res.series[0].rows[0].flux == 0.02);
    CHECK_FALSE(res.series[0].rows[1].flux.has_value());
    CHECK_FALSE(res.series[0].rows[2].flux.has_value());
    CHECK_FALSE(res.series[0].rows[3].flux.has_value());
}

TEST_CASE("duplicate keys are a validation error naming the key", "[timeseries]") {
    const auto path = temp_file("station,year,month,flux\n"
                                "S1,2011,1,0.02\n"
                                "S1,2011,1,0.03\n");
    try {
        asn::load_csv(path, Layout::long_format);
        FAIL("expected duplicate-key error");
    } catch (const std::runtime_error& e) {
        const std::string msg = e.what();
        CHECK(msg.find("S1") != std::string::npos);
        CHECK(msg.find("2011") != std::string::npos);
        CHECK(msg.find("1") != std::string::npos);
    }
}

TEST_CASE("wide rows pivot to twelve long records", "[timeseries]") {
    const auto wide = temp_file(
        "station,year,jan,feb,mar,apr,may,jun,jul,aug,sep,oct,nov,dec\n"
        "S1,2011,0.1,0.2,NA,0.4,0.5,0.6,0.7,0.8,0.9,1.0,1.1,1.2\n");
    std::ostringstream long_text;
    long_text << "station,year,month,flux\n";
    const char* cells[12] = {"0.1", "0.2", "NA", "0.4", "0.5", "0.6",
                             "0.7", "0.8", "0.9", "1.0", "1.1", "1.2"};
    for (int m = 1; m <= 12; ++m)
        long_text << "S1,2011," << m << ',' << cells[m - 1] << '\n';
    const auto narrow = temp_file(long_text.str());

    const auto a = asn::load_csv(wide, Layout::wide_format);
    const auto b = asn::load_csv(narrow, Layout::long_format);
    CHECK(a.issues.empty());
    REQUIRE(a.series.size() == 1);
    CHECK(a.series[0].rows.size() == 12);
    CHECK(same_series(a.series, b.series));
}

TEST_CASE("malformed rows are collected with line numbers", "[timeseries]") {
    const auto path = temp_file("station,year,month,flux\n"
                                "S1,2011,1,0.02\n"
                                "S1,2011,13,0.05\n"      // bad month
                                "S1,2011,2,zebra\n"      // bad number
                                "S1,2011,3,-4\n"         // negative flux
                                "S1,2011\n");            // wrong column count
    const auto res = asn::load_csv(path, Layout::long_format);
    REQUIRE(res.issues.size() == 4);
    CHECK(res.issues[0].line == 3);
    CHECK(res.issues[1].line == 4);
    CHECK(res.issues[2].line == 5);
    CHECK(res.issues[3].line == 6);
    REQUIRE(res.series.size() == 1);
    CHECK(res.series[0].rows.size() == 1);  // only the good row survives

    CHECK_THROWS_AS(asn::load_csv(path, Layout::long_format, /*strict=*/true),
                    std::runtime_error);
    CHECK_THROWS_AS(asn::load_csv("/nonexistent/file.csv", Layout::long_format),
                    std::runtime_error);
}

TEST_CASE("round trip through write_csv for both layouts", "[timeseries]") {
    std::vector<MonthlySeries> data;
    std::mt19937_64 gen(42);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    for (int s = 0; s < 3; ++s) {
        MonthlySeries series;
        series.station_id = "ST" + std::to_string(s);
        for (int y = 2011; y <= 2013; ++y)
            for (int m = 1; m <= 12; ++m) {
                std::optional<double> flux;
                if (unif(gen) > 0.3)
                    flux = unif(gen) * 19.47;
                series.rows.push_back({y, m, flux});
            }
        data.push_back(series);
    }
    for (Layout layout : {Layout::long_format, Layout::wide_format}) {
        std::ostringstream os;
        asn::write_csv(data, layout, os);
        const auto path = temp_file(os.str());
        const auto back = asn::load_csv(path, layout);
        CHECK(back.issues.empty());
        CHECK(same_series(back.series, data));
    }
}

TEST_CASE("log transform pools positive fluxes", "[timeseries]") {
    MonthlySeries s;
    s.station_id = "S1";
    s.rows = {{2011, 1, 1.0},
              {2011, 2, std::exp(1.0)},
              {2011, 3, std::exp(2.0)},
              {2011, 4, std::exp(3.0)},
              {2011, 5, 0.0},           // excluded, counted
              {2011, 6, std::nullopt}}; // missing, counted
    const auto res = asn::log_transform({s});
    CHECK(res.missing_count == 1);
    CHECK(res.nonpositive_count == 1);
    REQUIRE(res.sample.size() == 4);
    for (std::size_t i = 0; i < 4; ++i)
        CHECK(res.sample[i] == Approx(static_cast<double>(i)).margin(1e-15));

    MonthlySeries tiny;
    tiny.station_id = "S2";
    tiny.rows = {{2011, 1, 1.0}, {2011, 2, 2.0}, {2011, 3, 3.0}};
    CHECK_THROWS_AS(asn::log_transform({tiny}), std::domain_error);
}

TEST_CASE("summarize computes Table-2 style rows", "[timeseries]") {
    MonthlySeries s;
    s.station_id = "S1";
    // month 1: {1,2,3,4}; month 2: {5}; month 3: all missing
    s.rows = {{2011, 1, 1.0}, {2012, 1, 2.0}, {2013, 1, 3.0}, {2014, 1, 4.0},
              {2011, 2, 5.0},
              {2011, 3, std::nullopt}, {2012, 3, std::nullopt}};
    const auto rows = asn::summarize({s});

    const auto& jan = rows[0];
    CHECK(jan.count == 4);
    CHECK(jan.na_count == 0);
    CHECK(*jan.min == 1.0);
    CHECK(*jan.q1 == Approx(1.75).epsilon(1e-12));
    CHECK(*jan.median == Approx(2.5).epsilon(1e-12));
    CHECK(*jan.mean == Approx(2.5).epsilon(1e-12));
    CHECK(*jan.q3 == Approx(3.25).epsilon(1e-12));
    CHECK(*jan.max == 4.0);

    const auto& feb = rows[1];
    CHECK(feb.count == 1);
    CHECK(*feb.min == 5.0);
    CHECK(*feb.q1 == 5.0);
    CHECK(*feb.median == 5.0);
    CHECK(*feb.q3 == 5.0);
    CHECK(*feb.max == 5.0);

    const auto& mar = rows[2];
    CHECK(mar.count == 0);
    CHECK(mar.na_count == 2);
    CHECK_FALSE(mar.min.has_value());
    CHECK_FALSE(mar.mean.has_value());

    CHECK(std::string(asn::month_label(1)) == "JAN");
    CHECK(std::string(asn::month_label(12)) == "DEC");
}

TEST_CASE("summary rows are internally ordered", "[timeseries]") {
    std::mt19937_64 gen(7);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    MonthlySeries s;
    s.station_id = "S";
    for (int y = 2000; y < 2020; ++y)
        for (int m = 1; m <= 12; ++m)
            s.rows.push_back({y, m, unif(gen) * 10.0});
    for (const auto& row : asn::summarize({s})) {
        REQUIRE(row.min.has_value());
        CHECK(*row.min <= *row.q1);
        CHECK(*row.q1 <= *row.median);
        CHECK(*row.median <= *row.q3);
        CHECK(*row.q3 <= *row.max);
        CHECK(*row.mean >= *row.min);
        CHECK(*row.mean <= *row.max);
    }
}

TEST_CASE("layout parsing", "[timeseries]") {
    CHECK(asn::parse_layout("long") == Layout::long_format);
    CHECK(asn::parse_layout("wide") == Layout::wide_format);
    CHECK_THROWS_AS(asn::parse_layout("diagonal"), std::invalid_argument);
}
