#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace selfsim {

enum class Diffusivity { Sub, Regular, Super };

std::string_view to_string(Diffusivity d) noexcept;

/// Hurst exponent, validated to lie strictly inside (0, 1).
class HurstExponent {
public:
    /// Throws DomainError unless 0 < h < 1.
    explicit HurstExponent(double h);

    double value() const noexcept { return h_; }
    operator double() const noexcept { return h_; }

    /// SUB iff h < 1/2, REGULAR iff h == 1/2, SUPER iff h > 1/2.
    Diffusivity classification() const noexcept;

private:
    double h_;
};

/// Immutable, strictly increasing time points starting at exactly 0.
/// Copies share the underlying storage.
class TimeGrid {
public:
    /// Throws DomainError if `times` is empty, does not start at 0, or is not
    /// strictly increasing.
    explicit TimeGrid(std::vector<double> times);

    /// steps + 1 equally spaced points on [0, t_max]; the last point is t_max exactly.
    static TimeGrid uniform(double t_max, std::size_t steps);

    std::span<const double> times() const noexcept { return *times_; }
    std::size_t size() const noexcept { return times_->size(); }
    double operator[](std::size_t i) const noexcept { return (*times_)[i]; }
    double back() const noexcept { return times_->back(); }

    /// Step length if the grid is uniform (relative tolerance 1e-9), otherwise empty.
    std::optional<double> step() const noexcept { return step_; }
    bool is_uniform() const noexcept { return step_.has_value(); }

    /// Index of the grid point equal to t (relative tolerance 1e-9).
    /// Throws DomainError if t is not on the grid.
    std::size_t index_of(double t) const;

    bool same_as(const TimeGrid& other) const noexcept;

private:
    std::shared_ptr<const std::vector<double>> times_;
    std::optional<double> step_;
};

/// A sampled path. positions[0] == 0 for every generator in this library.
struct Trajectory {
    TimeGrid grid;
    std::vector<double> positions;
};

} // namespace selfsim
