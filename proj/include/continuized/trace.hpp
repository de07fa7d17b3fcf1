#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace continuized {

struct TraceSample {
    double t = 0.0;
    std::uint64_t k = 0;  // events processed up to and including t
    std::vector<double> values;
};

/// Time-stamped metric samples of one run. `checkpoints` follows the requested grid;
/// `events` is filled only when event recording is enabled.
struct Trace {
    std::vector<std::string> metrics;
    std::vector<TraceSample> checkpoints;
    std::vector<TraceSample> events;

    std::size_t metric_index(std::string_view name) const;
    /// Checkpoint values of one metric.
    std::vector<double> series(std::string_view name) const;
    std::vector<double> checkpoint_times() const;
};

/// n log-spaced times in [first, last]. n == 1 gives {last}.
std::vector<double> log_spaced(double first, double last, std::size_t n);
std::vector<double> lin_spaced(double first, double last, std::size_t n);

}  // namespace continuized
