#include "selfsim/grid.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "selfsim/error.hpp"

namespace selfsim {

std::string_view to_string(Diffusivity d) noexcept {
    switch (d) {
    case Diffusivity::Sub: return "sub";
    case Diffusivity::Regular: return "regular";
    case Diffusivity::Super: return "super";
    }
    return "unknown";
}

HurstExponent::HurstExponent(double h) : h_(h) {
    if (!(h > 0.0 && h < 1.0)) {
        throw DomainError("Hurst exponent must lie in (0,1)");
    }
}

Diffusivity HurstExponent::classification() const noexcept {
    if (h_ < 0.5) return Diffusivity::Sub;
    if (h_ > 0.5) return Diffusivity::Super;
    return Diffusivity::Regular;
}

namespace {

constexpr double kGridTolerance = 1e-9;

std::optional<double> detect_step(const std::vector<double>& t) {
    if (t.size() < 2) return std::nullopt;
    const double dt = t.back() / static_cast<double>(t.size() - 1);
    for (std::size_t i = 1; i < t.size(); ++i) {
        if (std::abs((t[i] - t[i - 1]) - dt) > kGridTolerance * dt) {
            return std::nullopt;
        }
    }
    return dt;
}

} // namespace

TimeGrid::TimeGrid(std::vector<double> times) {
    if (times.empty()) {
        throw DomainError("time grid must not be empty");
    }
    if (times.front() != 0.0) {
        throw DomainError("time grid must start at 0");
    }
    for (std::size_t i = 1; i < times.size(); ++i) {
        if (!(times[i] > times[i - 1]) || !std::isfinite(times[i])) {
            throw DomainError("time grid must be strictly increasing and finite (index " +
                              std::to_string(i) + ")");
        }
    }
    step_ = detect_step(times);
    times_ = std::make_shared<const std::vector<double>>(std::move(times));
}

TimeGrid TimeGrid::uniform(double t_max, std::size_t steps) {
    if (!(t_max > 0.0) || !std::isfinite(t_max)) {
        throw DomainError("t_max must be positive and finite");
    }
    if (steps == 0) {
        throw DomainError("a uniform grid needs at least one step");
    }
    std::vector<double> t(steps + 1);
    for (std::size_t k = 0; k <= steps; ++k) {
        t[k] = t_max * static_cast<double>(k) / static_cast<double>(steps);
    }
    return TimeGrid(std::move(t));
}

std::size_t TimeGrid::index_of(double t) const {
    const auto& v = *times_;
    const double scale = std::max(1.0, std::abs(t)) * kGridTolerance;
    auto it = std::lower_bound(v.begin(), v.end(), t - scale);
    if (it == v.end() || std::abs(*it - t) > scale) {
        throw DomainError("time " + std::to_string(t) + " is not a grid point");
    }
    return static_cast<std::size_t>(it - v.begin());
}

bool TimeGrid::same_as(const TimeGrid& other) const noexcept {
    return times_ == other.times_ || *times_ == *other.times_;
}

} // namespace selfsim
