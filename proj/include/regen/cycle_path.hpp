#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace regen {

using State = std::vector<double>;

/// Right-continuous piecewise-linear trajectory of one cycle on [0, length).
///
/// Segment k starts at `start(k)` with state `value(k)` and evolves with
/// constant per-component `slope(k)` until the next segment starts (or the
/// cycle ends). Jumps happen only at segment starts, so the path takes the
/// post-jump value there.
class CyclePath {
public:
    CyclePath() = default;
    explicit CyclePath(std::size_t dim) : dim_(dim) {}

    /// Drop segments but keep capacity; generators reuse paths across cycles.
    void reset(std::size_t dim) {
        dim_ = dim;
        length_ = 0.0;
        starts_.clear();
        values_.clear();
        slopes_.clear();
    }

    void add_segment(double start, std::span<const double> value, std::span<const double> slope);
    void add_segment(double start, double value, double slope) {
        add_segment(start, std::span<const double>(&value, 1), std::span<const double>(&slope, 1));
    }
    void set_length(double length) { length_ = length; }

    std::size_t dim() const noexcept { return dim_; }
    double length() const noexcept { return length_; }
    std::size_t segments() const noexcept { return starts_.size(); }
    double start(std::size_t k) const { return starts_[k]; }
    double end(std::size_t k) const { return k + 1 < starts_.size() ? starts_[k + 1] : length_; }
    std::span<const double> value(std::size_t k) const { return {values_.data() + k * dim_, dim_}; }
    std::span<const double> slope(std::size_t k) const { return {slopes_.data() + k * dim_, dim_}; }

    /// Segment containing in-cycle time s, clamped to the first/last.
    std::size_t segment_at(double s) const;
    void eval(double s, std::span<double> out) const;
    State eval(double s) const;

private:
    std::size_t dim_ = 1;
    double length_ = 0.0;
    std::vector<double> starts_;
    std::vector<double> values_;
    std::vector<double> slopes_;
};

}  // namespace regen
