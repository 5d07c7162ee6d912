#pragma once

#include <cmath>
#include <limits>

#include "focuskit/errors.hpp"

namespace focuskit {

/// Signed object distance in mm, measured from the lens (or first vertex) with
/// light travelling left to right: a real object on the left has a negative
/// value. The far point at infinity is a dedicated state rather than a large
/// number.
class ObjectDistance {
public:
    static constexpr ObjectDistance infinity() { return ObjectDistance{}; }

    static ObjectDistance at(double mm) {
        if (!std::isfinite(mm)) {
            if (std::isinf(mm) && mm < 0) return infinity();
            throw InputError("object distance must be finite or the infinity sentinel");
        }
        ObjectDistance d;
        d.infinite_ = false;
        d.mm_ = mm;
        return d;
    }

    constexpr bool is_infinite() const { return infinite_; }

    double mm() const {
        if (infinite_) throw InputError("object distance is at infinity");
        return mm_;
    }

    /// Signed vergence 1/l in mm^-1; zero for the far point.
    constexpr double reciprocal() const { return infinite_ ? 0.0 : 1.0 / mm_; }

    /// Value for numeric output; -inf for the far point.
    constexpr double value_or_inf() const {
        return infinite_ ? -std::numeric_limits<double>::infinity() : mm_;
    }

    friend constexpr bool operator==(const ObjectDistance& a, const ObjectDistance& b) {
        return a.infinite_ == b.infinite_ && (a.infinite_ || a.mm_ == b.mm_);
    }

private:
    constexpr ObjectDistance() = default;

    bool infinite_ = true;
    double mm_ = 0.0;
};

constexpr double kPi = 3.14159265358979323846;

constexpr double deg_to_rad(double deg) { return deg * kPi / 180.0; }
constexpr double rad_to_deg(double rad) { return rad * 180.0 / kPi; }

}  // namespace focuskit
