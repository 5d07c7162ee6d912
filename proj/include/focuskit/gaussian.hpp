#pragma once

// First-order (Gaussian) imaging for thin lenses and two-group systems.
//
// Sign convention: light travels left to right, distances to the right of a
// lens are positive, a real object sits at l < 0. The conjugate distance is
// L = l' - l. All lengths are in mm; angles are degrees at the API boundary.

#include <optional>

#include "focuskit/distance.hpp"

namespace focuskit::gaussian {

struct GaussianConjugate {
    ObjectDistance object = ObjectDistance::infinity();
    double image_distance = 0.0;
    /// Infinite when the object is at infinity.
    double conjugate_distance = 0.0;
    double focal_length = 0.0;
};

/// The four imaging cases of the piecewise conjugate solution. Each case fixes
/// the sign of f and the object interval, and selects one root of
/// l'^2 - L l' + L f = 0.
///
///   case1: f > 0, l in [-inf, -2f] U (-f, 0]      minus root
///   case2: f > 0, l in (-2f, -f]  U (0, +inf]     plus root
///   case3: f < 0, l in [-inf, 0)  U (|f|, 2|f|]   minus root
///   case4: f < 0, l in (0, |f|]   U (2|f|, +inf]  plus root
///
/// For f < 0 the intervals are ordered by magnitude on the virtual-object side.
enum class ConjugateCase : int { case1 = 1, case2 = 2, case3 = 3, case4 = 4 };

/// Maps a 1..4 tag onto a case; anything else is an InputError.
ConjugateCase conjugate_case_from_int(int tag);

/// +1 for the plus root, -1 for the minus root.
int root_sign(ConjugateCase c);

/// 1/l' - 1/l = 1/f. The far point images at l' = f.
double image_distance_gauss(ObjectDistance l, double f);

GaussianConjugate conjugate(ObjectDistance l, double f);

/// l' = (L -/+ sqrt(L^2 - 4Lf)) / 2 with the root picked by `branch`.
double image_distance_conjugate(double L, double f, ConjugateCase branch);

ConjugateCase classify_branch(ObjectDistance l, double f);

/// f = f1 f2 / (f1 + f2 - d). Throws NumericError for an afocal pair.
double two_group_efl(double f1, double f2, double d);

struct TwoGroupSpec {
    double f = 0.0;     ///< total EFL, mm
    double f1 = 0.0;    ///< front group, mm
    double f2 = 0.0;    ///< focusing (back) group, mm
    double d = 0.0;     ///< group separation, mm
    double d_s = 0.0;   ///< stop distance behind the front group, mm
    double fno = 0.0;
    double fov = 0.0;   ///< full field, degrees

    /// Builds a spec whose f is computed from the group powers.
    static TwoGroupSpec from_groups(double f1, double f2, double d, double d_s, double fno,
                                    double fov_deg);

    double alpha() const { return f1 / f; }
    double beta() const { return d / f; }

    /// |f - two_group_efl(f1, f2, d)| / |f|.
    double efl_mismatch() const;
};

struct ApertureReport {
    double d1 = 0.0;        ///< front clear aperture, mm
    double d2 = 0.0;        ///< back clear aperture, mm
    double l2_prime = 0.0;  ///< back working distance, mm
};

/// Back working distance of the focusing group: (f1 - d) f2 / (f1 + f2 - d).
double back_working_distance(double f1, double f2, double d);

ApertureReport aperture_model(const TwoGroupSpec& spec);

struct StopInterval {
    double lo = 0.0;
    double hi = 0.0;
};

/// Stop positions d_s in [0, d] satisfying D1 <= d1_max and D2 <= d2_max.
/// An empty result means no stop position satisfies both budgets.
std::optional<StopInterval> solve_stop_position(const TwoGroupSpec& spec, double d1_max,
                                                double d2_max);

}  // namespace focuskit::gaussian
