#include "continuized/trace.hpp"

#include "continuized/errors.hpp"

#include <algorithm>
#include <cmath>

namespace continuized {

std::size_t Trace::metric_index(std::string_view name) const {
    const auto it = std::find(metrics.begin(), metrics.end(), name);
    if (it == metrics.end()) throw InvalidArgument("trace has no metric '" + std::string(name) + "'");
    return static_cast<std::size_t>(it - metrics.begin());
}

std::vector<double> Trace::series(std::string_view name) const {
    const std::size_t idx = metric_index(name);
    std::vector<double> out;
    out.reserve(checkpoints.size());
    for (const auto& s : checkpoints) out.push_back(s.values[idx]);
    return out;
}

std::vector<double> Trace::checkpoint_times() const {
    std::vector<double> out;
    out.reserve(checkpoints.size());
    for (const auto& s : checkpoints) out.push_back(s.t);
    return out;
}

std::vector<double> log_spaced(double first, double last, std::size_t n) {
    if (n == 0) return {};
    if (n == 1) return {last};
    if (!(first > 0.0) || !(last > first)) throw InvalidArgument("log_spaced: need 0 < first < last");
    std::vector<double> out(n);
    const double lf = std::log(first);
    const double step = (std::log(last) - lf) / static_cast<double>(n - 1);
    for (std::size_t i = 0; i < n; ++i) out[i] = std::exp(lf + step * static_cast<double>(i));
    out.front() = first;
    out.back() = last;
    return out;
}

std::vector<double> lin_spaced(double first, double last, std::size_t n) {
    if (n == 0) return {};
    if (n == 1) return {last};
    if (!(last > first)) throw InvalidArgument("lin_spaced: need first < last");
    std::vector<double> out(n);
    const double step = (last - first) / static_cast<double>(n - 1);
    for (std::size_t i = 0; i < n; ++i) out[i] = first + step * static_cast<double>(i);
    out.back() = last;
    return out;
}

}  // namespace continuized
