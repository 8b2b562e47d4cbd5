#ifndef ASN_MONTECARLO_HPP
#define ASN_MONTECARLO_HPP

#include <atomic>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <thread>
#include <utility>
#include <vector>

#include "asn/estimators.hpp"
#include "asn/random.hpp"

// Replicated sampling + fitting across methods and sample sizes, reduced to
// per-parameter bias and MSE. Paired design: every method sees the same
// replicated sample. Replications run on independent substreams keyed on
// (master_seed, n, k), so the report is a pure function of the config no
// matter how many threads execute it.

namespace asn {

enum class InitMode { data, truth };

struct SimConfig {
    AsnParams truth;
    std::vector<int> n_grid;       // strictly increasing, each >= 10
    int replications = 0;          // N
    std::vector<Method> methods;
    std::uint64_t master_seed = 0;
    InitMode init = InitMode::data;
};

struct SimCell {
    Method method;
    int n;
    Vec3 bias{0.0, 0.0, 0.0};
    Vec3 mse{0.0, 0.0, 0.0};
    int failures = 0;   // non-converged replications, excluded from averages
    int successes = 0;
};

struct SimulationReport {
    SimConfig config;
    std::vector<SimCell> cells;  // ordered by (n, method) as configured
};

using Sampler = std::function<std::vector<double>(const AsnParams&, int, RandomStream&)>;

// bias_j = (1/N) sum (th_j^(k) - th_j),  mse_j = (1/N) sum (th_j^(k) - th_j)^2.
inline std::pair<Vec3, Vec3> bias_mse(const std::vector<AsnParams>& estimates,
                                      const AsnParams& truth) {
    if (estimates.empty())
        throw std::domain_error("bias_mse: empty estimate sequence");
    Vec3 bias{0.0, 0.0, 0.0}, mse{0.0, 0.0, 0.0};
    const Vec3 th{truth.mu(), truth.sigma(), truth.alpha()};
    for (const AsnParams& e : estimates) {
        const Vec3 est{e.mu(), e.sigma(), e.alpha()};
        for (int j = 0; j < 3; ++j) {
            const double d = est[j] - th[j];
            bias[j] += d;
            mse[j] += d * d;
        }
    }
    for (int j = 0; j < 3; ++j) {
        bias[j] /= static_cast<double>(estimates.size());
        mse[j] /= static_cast<double>(estimates.size());
    }
    return {bias, mse};
}

namespace detail {

inline void validate(const SimConfig& c) {
    if (c.replications < 1)
        throw std::invalid_argument("run_study: replications must be >= 1");
    if (c.n_grid.empty())
        throw std::invalid_argument("run_study: empty n grid");
    int prev = 9;
    for (int n : c.n_grid) {
        if (n < 10 || n <= prev)
            throw std::invalid_argument("run_study: n grid must be strictly increasing, >= 10");
        prev = n;
    }
    if (c.methods.empty())
        throw std::invalid_argument("run_study: no methods selected");
}

}  // namespace detail

inline SimulationReport run_study(const SimConfig& config,
                                  const Sampler& sampler = {},
                                  unsigned threads = 0) {
    detail::validate(config);
    const Sampler draw = sampler
        ? sampler
        : Sampler([](const AsnParams& p, int n, RandomStream& rng) {
              return sample(p, static_cast<std::size_t>(n), rng);
          });

    const std::size_t n_levels = config.n_grid.size();
    const std::size_t n_methods = config.methods.size();
    const std::size_t reps = static_cast<std::size_t>(config.replications);

    // estimates[n_idx][k * n_methods + m]: nullopt marks a failed fit.
    std::vector<std::vector<std::optional<AsnParams>>> estimates(n_levels);
    for (auto& v : estimates)
        v.assign(reps * n_methods, std::nullopt);

    auto run_one = [&](std::size_t n_idx, std::size_t k) {
        const int n = config.n_grid[n_idx];
        RandomStream rng = RandomStream::substream(
            config.master_seed, static_cast<std::uint64_t>(n), static_cast<std::uint64_t>(k));
        std::vector<double> data = draw(config.truth, n, rng);
        // All methods fit the same sample (paired comparison).
        try {
            const OrderedSample os = OrderedSample::from_data(std::move(data));
            for (std::size_t m = 0; m < n_methods; ++m) {
                try {
                    const FitResult fr = config.init == InitMode::truth
                                             ? fit(os, config.methods[m], config.truth)
                                             : fit(os, config.methods[m]);
                    if (fr.converged)
                        estimates[n_idx][k * n_methods + m] = fr.params;
                } catch (const std::exception&) {
                    // degenerate initialization etc.: counted as a failure
                }
            }
        } catch (const std::exception&) {
            // unusable sample: every method records a failure for this k
        }
    };

    const std::size_t total = n_levels * reps;
    unsigned n_threads = threads ? threads : std::thread::hardware_concurrency();
    if (n_threads < 1)
        n_threads = 1;
    if (n_threads > total)
        n_threads = static_cast<unsigned>(total);

    if (n_threads == 1) {
        for (std::size_t t = 0; t < total; ++t)
            run_one(t / reps, t % reps);
    } else {
        std::atomic<std::size_t> cursor{0};
        std::vector<std::thread> pool;
        pool.reserve(n_threads);
        for (unsigned w = 0; w < n_threads; ++w)
            pool.emplace_back([&] {
                for (std::size_t t = cursor.fetch_add(1); t < total; t = cursor.fetch_add(1))
                    run_one(t / reps, t % reps);
            });
        for (auto& th : pool)
            th.join();
    }

    // Fixed-order reduction, independent of which thread produced what.
    SimulationReport report{config, {}};
    for (std::size_t n_idx = 0; n_idx < n_levels; ++n_idx) {
        for (std::size_t m = 0; m < n_methods; ++m) {
            SimCell cell;
            cell.method = config.methods[m];
            cell.n = config.n_grid[n_idx];
            std::vector<AsnParams> ok;
            ok.reserve(reps);
            for (std::size_t k = 0; k < reps; ++k) {
                const auto& e = estimates[n_idx][k * n_methods + m];
                if (e)
                    ok.push_back(*e);
                else
                    ++cell.failures;
            }
            cell.successes = static_cast<int>(ok.size());
            if (!ok.empty()) {
                const auto [bias, mse] = bias_mse(ok, config.truth);
                cell.bias = bias;
                cell.mse = mse;
            }
            report.cells.push_back(cell);
        }
    }
    return report;
}

// Flat plot-ready table: one row per (method, n, parameter).
inline void write_report_csv(const SimulationReport& report, std::ostream& os) {
    static const char* kParam[3] = {"mu", "sigma", "alpha"};
    os << "method,n,parameter,bias,mse,failures\n";
    char buf[64];
    for (const SimCell& c : report.cells) {
        for (int j = 0; j < 3; ++j) {
            os << method_name(c.method) << ',' << c.n << ',' << kParam[j] << ',';
            std::snprintf(buf, sizeof buf, "%.17g", c.bias[j]);
            os << buf << ',';
            std::snprintf(buf, sizeof buf, "%.17g", c.mse[j]);
            os << buf << ',' << c.failures << '\n';
        }
    }
}

}  // namespace asn

#endif  // ASN_MONTECARLO_HPP
