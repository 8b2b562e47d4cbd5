#include <catch2/catch.hpp>

#include <cmath>
#include <sstream>
#include <vector>

#include "asn/montecarlo.hpp"

using asn::AsnParams;
using asn::Method;

TEST_CASE("bias_mse ground truth", "[montecarlo]") {
    const AsnParams truth(2, 1, 1);

    const std::vector<AsnParams> exact(4, truth);
    const auto [b0, m0] = asn::bias_mse(exact, truth);
    for (int j = 0; j < 3; ++j) {
        CHECK(b0[j] == 0.0);
        CHECK(m0[j] == 0.0);
    }

    // +/- delta alternating in mu: bias cancels, mse = delta^2
    const double delta = 0.25;
    const std::vector<AsnParams> alt{AsnParams(2 + delta, 1, 1), AsnParams(2 - delta, 1, 1),
                                     AsnParams(2 + delta, 1, 1), AsnParams(2 - delta, 1, 1)};
    const auto [b1, m1] = asn::bias_mse(alt, truth);
    CHECK(b1[0] == Approx(0.0).margin(1e-15));
    CHECK(m1[0] == Approx(delta * delta).epsilon(1e-12));

    const std::vector<AsnParams> two{AsnParams(1, 1, 1), AsnParams(3, 1, 1)};
    const auto [b2, m2] = asn::bias_mse(two, truth);
    CHECK(b2[0] == Approx(0.0).margin(1e-15));
    CHECK(m2[0] == Approx(1.0).epsilon(1e-12));
    CHECK(b2[1] == 0.0);
    CHECK(m2[2] == 0.0);

    CHECK_THROWS_AS(asn::bias_mse({}, truth), std::domain_error);
}

TEST_CASE("run_study on a rigged perfect sampler", "[montecarlo]") {
    const AsnParams truth(0, 1, 2);
    asn::Sampler rigged = [](const AsnParams& p, int n, asn::RandomStream&) {
        std::vector<double> out;
        for (int i = 1; i <= n; ++i)
            out.push_back(asn::quantile(p, (i - 0.5) / n));
        return out;
    };
    asn::SimConfig cfg{truth, {200}, 1, {Method::mle}, 1ULL, asn::InitMode::data};
    const auto rep = asn::run_study(cfg, rigged, 1);
    REQUIRE(rep.cells.size() == 1);
    const auto& c = rep.cells[0];
    CHECK(c.failures == 0);
    CHECK(c.successes == 1);
    for (int j = 0; j < 3; ++j) {
        CHECK(std::abs(c.bias[j]) <= 0.02);
        CHECK(c.mse[j] <= 1e-3);
    }
}

TEST_CASE("run_study is a pure function of its config", "[montecarlo]") {
    asn::SimConfig cfg{AsnParams(0.5, 0.5, 3), {20, 40}, 12,
                       {Method::ade, Method::lsq}, 99ULL, asn::InitMode::data};
    const auto r1 = asn::run_study(cfg, {}, 1);
    const auto r2 = asn::run_study(cfg, {}, 3);  // different thread count
    REQUIRE(r1.cells.size() == r2.cells.size());
    for (std::size_t i = 0; i < r1.cells.size(); ++i) {
        CHECK(r1.cells[i].method == r2.cells[i].method);
        CHECK(r1.cells[i].n == r2.cells[i].n);
        CHECK(r1.cells[i].failures == r2.cells[i].failures);
        for (int j = 0; j < 3; ++j) {
            CHECK(r1.cells[i].bias[j] == r2.cells[i].bias[j]);
            CHECK(r1.cells[i].mse[j] == r2.cells[i].mse[j]);
        }
    }
}

TEST_CASE("paired design: a method's cells do not depend on the method set",
          "[montecarlo]") {
    const AsnParams truth(0.5, 0.5, 3);
    asn::SimConfig lone{truth, {30}, 8, {Method::lsq}, 7ULL, asn::InitMode::data};
    asn::SimConfig paired{truth, {30}, 8, {Method::lsq, Method::ade}, 7ULL,
                          asn::InitMode::data};
    const auto r1 = asn::run_study(lone, {}, 2);
    const auto r2 = asn::run_study(paired, {}, 2);
    const auto& solo = r1.cells[0];
    const auto& joint = r2.cells[0];  // LSQ listed first
    REQUIRE(joint.method == Method::lsq);
    for (int j = 0; j < 3; ++j) {
        CHECK(solo.bias[j] == joint.bias[j]);
        CHECK(solo.mse[j] == joint.mse[j]);
    }
}

TEST_CASE("mse dominates squared bias", "[montecarlo]") {
    asn::SimConfig cfg{AsnParams(0.5, 0.5, 3), {25}, 20,
                       {Method::ade, Method::cme}, 31ULL, asn::InitMode::data};
    const auto rep = asn::run_study(cfg, {}, 2);
    for (const auto& c : rep.cells) {
        CHECK(c.failures + c.successes == 20);
        for (int j = 0; j < 3; ++j)
            CHECK(c.mse[j] + 1e-12 >= c.bias[j] * c.bias[j]);
    }
}

TEST_CASE("degenerate samples are counted as failures", "[montecarlo]") {
    asn::Sampler constant = [](const AsnParams&, int n, asn::RandomStream&) {
        return std::vector<double>(static_cast<std::size_t>(n), 1.0);
    };
    asn::SimConfig cfg{AsnParams(0, 1, 0), {10}, 3, {Method::mle}, 5ULL,
                       asn::InitMode::data};
    const auto rep = asn::run_study(cfg, constant, 1);
    CHECK(rep.cells[0].failures == 3);
    CHECK(rep.cells[0].successes == 0);
}

TEST_CASE("truth-start protocol is available", "[montecarlo]") {
    const AsnParams truth(0.5, 0.5, 3);
    asn::SimConfig cfg{truth, {40}, 6, {Method::mps}, 17ULL, asn::InitMode::truth};
    const auto rep = asn::run_study(cfg, {}, 2);
    CHECK(rep.cells[0].successes + rep.cells[0].failures == 6);
    // starting at the truth, MPS stays in the generating basin
    CHECK(std::abs(rep.cells[0].bias[0]) < 0.5);
}

TEST_CASE("config validation", "[montecarlo]") {
    const AsnParams t(0, 1, 0);
    CHECK_THROWS_AS(asn::run_study({t, {20}, 0, {Method::mle}, 1ULL}, {}, 1),
                    std::invalid_argument);
    CHECK_THROWS_AS(asn::run_study({t, {}, 5, {Method::mle}, 1ULL}, {}, 1),
                    std::invalid_argument);
    CHECK_THROWS_AS(asn::run_study({t, {5}, 5, {Method::mle}, 1ULL}, {}, 1),
                    std::invalid_argument);
    CHECK_THROWS_AS(asn::run_study({t, {40, 40}, 5, {Method::mle}, 1ULL}, {}, 1),
                    std::invalid_argument);
    CHECK_THROWS_AS(asn::run_study({t, {40, 20}, 5, {Method::mle}, 1ULL}, {}, 1),
                    std::invalid_argument);
    CHECK_THROWS_AS(asn::run_study({t, {20}, 5, {}, 1ULL}, {}, 1),
                    std::invalid_argument);
}

TEST_CASE("report CSV layout", "[montecarlo]") {
    asn::SimConfig cfg{AsnParams(0.5, 0.5, 3), {20}, 4, {Method::ade}, 3ULL,
                       asn::InitMode::data};
    const auto rep = asn::run_study(cfg, {}, 1);
    std::ostringstream os;
    asn::write_report_csv(rep, os);
    const std::string text = os.str();
    CHECK(text.rfind("method,n,parameter,bias,mse,failures\n", 0) == 0);
    CHECK(text.find("ADE,20,mu,") != std::string::npos);
    CHECK(text.find("ADE,20,sigma,") != std::string::npos);
    CHECK(text.find("ADE,20,alpha,") != std::string::npos);
    // header + 3 parameter rows
    CHECK(std::count(text.begin(), text.end(), '\n') == 4);
}
