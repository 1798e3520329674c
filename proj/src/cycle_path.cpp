#include "regen/cycle_path.hpp"

#include <algorithm>

#include "regen/error.hpp"

namespace regen {

void CyclePath::add_segment(double start, std::span<const double> value, std::span<const double> slope) {
    if (value.size() != dim_ || slope.size() != dim_) throw DomainError("segment dimension mismatch");
    if (!starts_.empty() && !(start >= starts_.back())) throw DomainError("segments must be ordered");
    starts_.push_back(start);
    values_.insert(values_.end(), value.begin(), value.end());
    slopes_.insert(slopes_.end(), slope.begin(), slope.end());
}

std::size_t CyclePath::segment_at(double s) const {
    if (starts_.empty()) throw DomainError("empty cycle path");
    const auto it = std::upper_bound(starts_.begin(), starts_.end(), s);
    if (it == starts_.begin()) return 0;
    return static_cast<std::size_t>(it - starts_.begin()) - 1;
}

void CyclePath::eval(double s, std::span<double> out) const {
    const std::size_t k = segment_at(s);
    const double ds = s - starts_[k];
    const double* v = values_.data() + k * dim_;
    const double* a = slopes_.data() + k * dim_;
    for (std::size_t j = 0; j < dim_; ++j) out[j] = a[j] == 0.0 ? v[j] : v[j] + a[j] * ds;
}

State CyclePath::eval(double s) const {
    State out(dim_);
    eval(s, out);
    return out;
}

}  // namespace regen
