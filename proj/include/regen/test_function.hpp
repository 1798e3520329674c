#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <variant>

#include "regen/cycle_path.hpp"

namespace regen {

struct ConstantFn {
    double value = 1.0;
    bool operator==(const ConstantFn&) const = default;
};

struct IdentityFn {
    std::size_t component = 0;
    bool operator==(const IdentityFn&) const = default;
};

/// 1{x[component] <= threshold}
struct IndicatorFn {
    std::size_t component = 0;
    double threshold = 0.0;
    bool operator==(const IndicatorFn&) const = default;
};

/// exp(-x[component])
struct ExponentialFn {
    std::size_t component = 0;
    bool operator==(const ExponentialFn&) const = default;
};

/// 1{x[age] > x[requirement]}; the status model's "updated" indicator.
struct UpdatedFn {
    std::size_t age = 0;
    std::size_t requirement = 1;
    bool operator==(const UpdatedFn&) const = default;
};

/// 1{x[component] == value}, for integer-valued states.
struct EqualsFn {
    std::size_t component = 0;
    double value = 0.0;
    bool operator==(const EqualsFn&) const = default;
};

/// The bank of test functions g / f_i. Each has an exact integral along a
/// linear segment, so cycle integrals carry no discretisation error.
using TestFunction = std::variant<ConstantFn, IdentityFn, IndicatorFn, ExponentialFn, UpdatedFn, EqualsFn>;

std::string function_name(const TestFunction& f);
bool is_constant(const TestFunction& f) noexcept;
/// Largest component index the function reads.
std::size_t max_component(const TestFunction& f) noexcept;

double evaluate(const TestFunction& f, std::span<const double> state);

/// Integral of f along the path over in-cycle times [from, to].
double integrate_path(const TestFunction& f, const CyclePath& path, double from, double to);
inline double integrate_path(const TestFunction& f, const CyclePath& path) {
    return integrate_path(f, path, 0.0, path.length());
}

}  // namespace regen
