#ifndef ASN_ORDERED_SAMPLE_HPP
#define ASN_ORDERED_SAMPLE_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <utility>
#include <vector>

namespace asn {

// A maximal run of exactly-equal consecutive order statistics.
struct TieRun {
    std::size_t start;   // 0-based index of the first element of the run
    std::size_t length;  // >= 2
};

// Validated ascending-sorted observations; the substrate of every
// order-statistic objective. Construction sorts, rejects non-finite values
// and records all tie runs.
class OrderedSample {
public:
    static OrderedSample from_data(std::vector<double> data) {
        if (data.empty())
            throw std::invalid_argument("OrderedSample: empty sample");
        for (double v : data)
            if (!std::isfinite(v))
                throw std::invalid_argument("OrderedSample: non-finite observation");
        std::sort(data.begin(), data.end());
        return OrderedSample(std::move(data));
    }

    const std::vector<double>& values() const { return values_; }
    std::size_t size() const { return values_.size(); }
    double operator[](std::size_t i) const { return values_[i]; }

    const std::vector<TieRun>& tie_runs() const { return tie_runs_; }
    bool has_ties() const { return !tie_runs_.empty(); }

    // True when values_[i] closes a tie (equals its left neighbour).
    bool tied_with_previous(std::size_t i) const {
        return i > 0 && values_[i] == values_[i - 1];
    }

private:
    explicit OrderedSample(std::vector<double> sorted) : values_(std::move(sorted)) {
        std::size_t run_start = 0;
        for (std::size_t i = 1; i <= values_.size(); ++i) {
            if (i == values_.size() || values_[i] != values_[run_start]) {
                if (i - run_start >= 2)
                    tie_runs_.push_back({run_start, i - run_start});
                run_start = i;
            }
        }
    }

    std::vector<double> values_;
    std::vector<TieRun> tie_runs_;
};

}  // namespace asn

#endif  // ASN_ORDERED_SAMPLE_HPP
