// asntool: command-line surface for the alpha-skew normal toolkit.
//
// Subcommands: fit, simulate, sample, quantile, gof, summarize, curve.
// Exit codes: 0 success, 2 usage error, 3 data error, 4 convergence failure.
// Every failure prints one machine-parsable line on stderr and emits no
// partial output on stdout.

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "asn/asn.hpp"

using json = nlohmann::ordered_json;

namespace {

struct CliError {
    int code;  // 2 usage, 3 data, 4 convergence
    std::string message;
};

const char* category_name(int code) {
    switch (code) {
        case 2: return "usage";
        case 3: return "data";
        case 4: return "convergence";
        default: return "error";
    }
}

std::string single_line(std::string s) {
    for (char& c : s)
        if (c == '\n' || c == '\r')
            c = ' ';
    return s;
}

std::string fmt_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

asn::AsnParams params_from_flags(double mu, double sigma, double alpha) {
    try {
        return asn::AsnParams(mu, sigma, alpha);
    } catch (const std::exception& e) {
        throw CliError{2, e.what()};
    }
}

std::vector<asn::MonthlySeries> load_series(const std::string& path,
                                            const std::string& layout, bool strict) {
    asn::Layout l;
    try {
        l = asn::parse_layout(layout);
    } catch (const std::exception& e) {
        throw CliError{2, e.what()};
    }
    try {
        auto res = asn::load_csv(path, l, strict);
        for (const auto& issue : res.issues)
            std::cerr << "warning: line " << issue.line << ": " << issue.message << "\n";
        return std::move(res.series);
    } catch (const std::exception& e) {
        throw CliError{3, e.what()};
    }
}

asn::OrderedSample build_sample(const std::vector<asn::MonthlySeries>& series,
                                bool log_scale) {
    try {
        if (log_scale) {
            auto res = asn::log_transform(series);
            if (res.missing_count || res.nonpositive_count)
                std::cerr << "note: excluded " << res.missing_count << " missing and "
                          << res.nonpositive_count << " non-positive flux values\n";
            return res.sample;
        }
        return asn::pool_flux(series);
    } catch (const std::exception& e) {
        throw CliError{3, e.what()};
    }
}

json fit_to_json(const asn::FitResult& fr, std::size_t n) {
    json j;
    j["method"] = asn::method_name(fr.method);
    j["mu"] = fr.params.mu();
    j["sigma"] = fr.params.sigma();
    j["alpha"] = fr.params.alpha();
    j["objective"] = fr.objective;
    j["converged"] = fr.converged;
    j["iterations"] = fr.iterations;
    j["n"] = n;
    j["init"] = {{"mu", fr.init.mu()}, {"sigma", fr.init.sigma()},
                 {"alpha", fr.init.alpha()}};
    if (fr.std_errors)
        j["stderr"] = {{"mu", (*fr.std_errors)[0]}, {"sigma", (*fr.std_errors)[1]},
                       {"alpha", (*fr.std_errors)[2]}};
    else
        j["stderr"] = nullptr;
    j["clamped_terms"] = fr.clamped_terms;
    return j;
}

struct FitArgs {
    std::string input;
    std::string layout = "long";
    std::string method;
    bool log_scale = false;
    bool all_methods = false;
    bool per_station = false;
    bool strict = false;
};

int run_fit(const FitArgs& a, std::ostream& out) {
    if (a.method.empty() && !a.all_methods)
        throw CliError{2, "fit: pass --method or --all-methods"};
    std::vector<asn::Method> methods;
    if (a.all_methods) {
        methods.assign(asn::all_methods.begin(), asn::all_methods.end());
    } else {
        try {
            methods.push_back(asn::parse_method(a.method));
        } catch (const std::exception& e) {
            throw CliError{2, e.what()};
        }
    }

    const auto series = load_series(a.input, a.layout, a.strict);

    auto fit_block = [&](const std::vector<asn::MonthlySeries>& block) -> json {
        const auto os = build_sample(block, a.log_scale);
        json results = json::array();
        for (asn::Method m : methods) {
            asn::FitResult fr = [&] {
                try {
                    return asn::fit(os, m);
                } catch (const std::exception& e) {
                    throw CliError{3, e.what()};
                }
            }();
            if (!a.all_methods && !fr.converged)
                throw CliError{4, std::string(asn::method_name(m)) +
                                      " fit did not converge"};
            results.push_back(fit_to_json(fr, os.size()));
        }
        return a.all_methods ? results : results[0];
    };

    json output;
    if (a.per_station) {
        output = json::object();
        for (const auto& s : series)
            output[s.station_id] = fit_block({s});
    } else {
        output = fit_block(series);
    }
    out << output.dump(2) << "\n";
    return 0;
}

struct SimulateArgs {
    double mu = 0, sigma = 1, alpha = 0;
    std::vector<int> n_grid;
    int reps = 0;
    std::string methods = "all";
    std::uint64_t seed = 0;
    std::string out_path;
    std::string init = "data";
    unsigned threads = 0;
};

int run_simulate(const SimulateArgs& a) {
    asn::SimConfig cfg{params_from_flags(a.mu, a.sigma, a.alpha), a.n_grid, a.reps,
                       {}, a.seed, asn::InitMode::data};
    if (a.init == "truth")
        cfg.init = asn::InitMode::truth;
    else if (a.init != "data")
        throw CliError{2, "simulate: --init must be data or truth"};
    if (a.methods == "all") {
        cfg.methods.assign(asn::all_methods.begin(), asn::all_methods.end());
    } else {
        std::istringstream in(a.methods);
        std::string name;
        while (std::getline(in, name, ',')) {
            try {
                cfg.methods.push_back(asn::parse_method(name));
            } catch (const std::exception& e) {
                throw CliError{2, e.what()};
            }
        }
    }

    asn::SimulationReport report = [&] {
        try {
            return asn::run_study(cfg, {}, a.threads);
        } catch (const std::invalid_argument& e) {
            throw CliError{2, e.what()};
        }
    }();

    std::ostringstream csv;
    asn::write_report_csv(report, csv);
    std::ofstream out(a.out_path);
    if (!out)
        throw CliError{3, "cannot write output file: " + a.out_path};
    out << csv.str();
    return 0;
}

int run_sample(double mu, double sigma, double alpha, int n, std::uint64_t seed,
               std::ostream& out) {
    if (n < 1)
        throw CliError{2, "sample: --n must be >= 1"};
    const auto p = params_from_flags(mu, sigma, alpha);
    asn::RandomStream rng(seed);
    for (double v : asn::sample(p, static_cast<std::size_t>(n), rng))
        out << fmt_double(v) << "\n";
    return 0;
}

int run_quantile(double mu, double sigma, double alpha, const std::vector<double>& ps,
                 bool exp_scale, std::ostream& out) {
    const auto p = params_from_flags(mu, sigma, alpha);
    out << "p,value\n";
    for (double prob : ps) {
        if (!(prob > 0.0 && prob < 1.0))
            throw CliError{2, "quantile: --p values must lie in (0, 1)"};
        const double q = asn::quantile(p, prob);
        out << fmt_double(prob) << ',' << fmt_double(exp_scale ? std::exp(q) : q)
            << "\n";
    }
    return 0;
}

struct GofArgs {
    std::string input;
    std::string layout = "long";
    std::string method;
    bool log_scale = false;
    bool strict = false;
};

int run_gof(const GofArgs& a, std::ostream& out) {
    asn::Method m;
    try {
        m = asn::parse_method(a.method);
    } catch (const std::exception& e) {
        throw CliError{2, e.what()};
    }
    const auto series = load_series(a.input, a.layout, a.strict);
    const auto os = build_sample(series, a.log_scale);
    asn::FitResult fr = [&] {
        try {
            return asn::fit(os, m);
        } catch (const std::exception& e) {
            throw CliError{3, e.what()};
        }
    }();
    if (!fr.converged)
        throw CliError{4, std::string(asn::method_name(m)) + " fit did not converge"};
    const auto rep = asn::ks_test(os, fr.params, m);

    json j;
    j["method"] = asn::method_name(m);
    j["D"] = rep.statistic;
    j["p_value"] = rep.p_value;
    j["n"] = rep.n;
    j["params"] = {{"mu", fr.params.mu()}, {"sigma", fr.params.sigma()},
                   {"alpha", fr.params.alpha()}};
    out << j.dump(2) << "\n";
    return 0;
}

int run_summarize(const std::string& input, const std::string& layout, bool strict,
                  std::ostream& out) {
    const auto series = load_series(input, layout, strict);
    out << "month,min,q1,median,mean,q3,max,na_count\n";
    auto cell = [&](const std::optional<double>& v) {
        return v ? fmt_double(*v) : std::string();
    };
    for (const auto& row : asn::summarize(series)) {
        out << asn::month_label(row.month) << ',' << cell(row.min) << ','
            << cell(row.q1) << ',' << cell(row.median) << ',' << cell(row.mean) << ','
            << cell(row.q3) << ',' << cell(row.max) << ',' << row.na_count << "\n";
    }
    return 0;
}

int run_curve(double mu, double sigma, double alpha, double from, double to, int points,
              std::ostream& out) {
    if (!(from < to) || points < 2)
        throw CliError{2, "curve: need --from < --to and --points >= 2"};
    const auto p = params_from_flags(mu, sigma, alpha);
    out << "t,pdf,cdf\n";
    for (int i = 0; i < points; ++i) {
        const double t = from + (to - from) * i / (points - 1);
        out << fmt_double(t) << ',' << fmt_double(asn::pdf(p, t)) << ','
            << fmt_double(asn::cdf(p, t)) << "\n";
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"alpha-skew normal distribution toolkit"};
    app.require_subcommand(1);

    // fit
    FitArgs fit_args;
    auto* fit_cmd = app.add_subcommand("fit", "fit the distribution to a flux CSV");
    fit_cmd->add_option("--input", fit_args.input, "CSV file")->required();
    fit_cmd->add_option("--layout", fit_args.layout, "long|wide");
    fit_cmd->add_option("--method", fit_args.method, "MLE|LSQ|WLQ|MPS|CME|ADE|RADE");
    fit_cmd->add_flag("--log", fit_args.log_scale, "fit the natural log of the flux");
    fit_cmd->add_flag("--all-methods", fit_args.all_methods, "compare all seven methods");
    fit_cmd->add_flag("--per-station", fit_args.per_station,
                      "fit each station separately instead of pooling");
    fit_cmd->add_flag("--strict", fit_args.strict, "reject files with >50% malformed rows");

    // simulate
    SimulateArgs sim_args;
    auto* sim_cmd = app.add_subcommand("simulate", "bias/MSE Monte Carlo study");
    sim_cmd->add_option("--mu", sim_args.mu)->required();
    sim_cmd->add_option("--sigma", sim_args.sigma)->required();
    sim_cmd->add_option("--alpha", sim_args.alpha)->required();
    sim_cmd->add_option("--n-grid", sim_args.n_grid, "sample sizes")
        ->required()->delimiter(',');
    sim_cmd->add_option("--reps", sim_args.reps, "replications per n")->required();
    sim_cmd->add_option("--methods", sim_args.methods, "comma list or 'all'");
    sim_cmd->add_option("--seed", sim_args.seed, "master seed")->required();
    sim_cmd->add_option("--out", sim_args.out_path, "output CSV")->required();
    sim_cmd->add_option("--init", sim_args.init, "start from 'data' or 'truth'");
    sim_cmd->add_option("--threads", sim_args.threads, "worker threads (0 = auto)");

    // sample
    double s_mu = 0, s_sigma = 1, s_alpha = 0;
    int s_n = 0;
    std::uint64_t s_seed = 0;
    auto* sample_cmd = app.add_subcommand("sample", "draw variates, one per line");
    sample_cmd->add_option("--mu", s_mu)->required();
    sample_cmd->add_option("--sigma", s_sigma)->required();
    sample_cmd->add_option("--alpha", s_alpha)->required();
    sample_cmd->add_option("--n", s_n)->required();
    sample_cmd->add_option("--seed", s_seed)->required();

    // quantile
    double q_mu = 0, q_sigma = 1, q_alpha = 0;
    std::vector<double> q_ps;
    bool q_exp = false;
    auto* q_cmd = app.add_subcommand("quantile", "inverse CDF table");
    q_cmd->add_option("--mu", q_mu)->required();
    q_cmd->add_option("--sigma", q_sigma)->required();
    q_cmd->add_option("--alpha", q_alpha)->required();
    q_cmd->add_option("--p", q_ps, "probabilities")->required()->delimiter(',');
    q_cmd->add_flag("--exp", q_exp, "exponentiate (flux-scale output for log fits)");

    // gof
    GofArgs gof_args;
    auto* gof_cmd = app.add_subcommand("gof", "Kolmogorov-Smirnov adequacy check");
    gof_cmd->add_option("--input", gof_args.input)->required();
    gof_cmd->add_option("--layout", gof_args.layout, "long|wide");
    gof_cmd->add_option("--method", gof_args.method)->required();
    gof_cmd->add_flag("--log", gof_args.log_scale);
    gof_cmd->add_flag("--strict", gof_args.strict);

    // summarize
    std::string sum_input, sum_layout = "long";
    bool sum_strict = false;
    auto* sum_cmd = app.add_subcommand("summarize", "per-month summary statistics");
    sum_cmd->add_option("--input", sum_input)->required();
    sum_cmd->add_option("--layout", sum_layout, "long|wide");
    sum_cmd->add_flag("--strict", sum_strict);

    // curve
    double c_mu = 0, c_sigma = 1, c_alpha = 0, c_from = 0, c_to = 0;
    int c_points = 0;
    auto* curve_cmd = app.add_subcommand("curve", "(t, pdf, cdf) table for plotting");
    curve_cmd->add_option("--mu", c_mu)->required();
    curve_cmd->add_option("--sigma", c_sigma)->required();
    curve_cmd->add_option("--alpha", c_alpha)->required();
    curve_cmd->add_option("--from", c_from)->required();
    curve_cmd->add_option("--to", c_to)->required();
    curve_cmd->add_option("--points", c_points)->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0)
            return app.exit(e);  // --help / --version
        std::cerr << "error: usage: " << single_line(e.what()) << "\n";
        return 2;
    }

    // Buffer stdout so a failing command never leaves partial output behind.
    try {
        std::ostringstream out;
        int rc = 0;
        if (fit_cmd->parsed())
            rc = run_fit(fit_args, out);
        else if (sim_cmd->parsed())
            rc = run_simulate(sim_args);
        else if (sample_cmd->parsed())
            rc = run_sample(s_mu, s_sigma, s_alpha, s_n, s_seed, out);
        else if (q_cmd->parsed())
            rc = run_quantile(q_mu, q_sigma, q_alpha, q_ps, q_exp, out);
        else if (gof_cmd->parsed())
            rc = run_gof(gof_args, out);
        else if (sum_cmd->parsed())
            rc = run_summarize(sum_input, sum_layout, sum_strict, out);
        else if (curve_cmd->parsed())
            rc = run_curve(c_mu, c_sigma, c_alpha, c_from, c_to, c_points, out);
        std::cout << out.str();
        return rc;
    } catch (const CliError& e) {
        std::cerr << "error: " << category_name(e.code) << ": "
                  << single_line(e.message) << "\n";
        return e.code;
    } catch (const std::exception& e) {
        std::cerr << "error: data: " << single_line(e.what()) << "\n";
        return 3;
    }
}
