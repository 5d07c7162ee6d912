#include "focuskit/gaussian.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace focuskit::gaussian {

ConjugateCase conjugate_case_from_int(int tag) {
    if (tag < 1 || tag > 4) {
        throw InputError("unknown conjugate branch tag " + std::to_string(tag) + " (expected 1-4)");
    }
    return static_cast<ConjugateCase>(tag);
}

int root_sign(ConjugateCase c) {
    switch (c) {
        case ConjugateCase::case1:
        case ConjugateCase::case3:
            return -1;
        case ConjugateCase::case2:
        case ConjugateCase::case4:
            return 1;
    }
    throw InputError("unknown conjugate branch");
}

double image_distance_gauss(ObjectDistance l, double f) {
    if (f == 0.0 || !std::isfinite(f)) throw InputError("invalid lens: focal length must be finite and nonzero");
    if (l.is_infinite()) return f;
    const double lo = l.mm();
    if (lo == 0.0) throw InputError("object distance must be nonzero");
    const double vergence = 1.0 / f + 1.0 / lo;
    if (vergence == 0.0 || lo == -f) throw NumericError("image at infinity (object at the front focal point)");
    return 1.0 / vergence;
}

GaussianConjugate conjugate(ObjectDistance l, double f) {
    GaussianConjugate g;
    g.object = l;
    g.focal_length = f;
    g.image_distance = image_distance_gauss(l, f);
    g.conjugate_distance = l.is_infinite() ? std::numeric_limits<double>::infinity()
                                           : g.image_distance - l.mm();
    return g;
}

double image_distance_conjugate(double L, double f, ConjugateCase branch) {
    if (f == 0.0 || !std::isfinite(f)) throw InputError("invalid lens: focal length must be finite and nonzero");
    const bool positive_case = branch == ConjugateCase::case1 || branch == ConjugateCase::case2;
    if (positive_case != (f > 0.0)) {
        throw InputError("conjugate branch does not match the sign of the focal length");
    }
    const double disc = L * L - 4.0 * L * f;
    if (disc < 0.0) throw NumericError("no real conjugate: L^2 - 4Lf < 0");
    const double root = std::sqrt(disc);
    // The cancelling root is recovered from the product of roots (= L f) to
    // keep full relative precision when |L| >> |f|.
    const double big = 0.5 * (L + std::copysign(root, L));
    const double small = big != 0.0 ? (L * f) / big : 0.0;
    const double plus = L >= 0.0 ? big : small;
    const double minus = L >= 0.0 ? small : big;
    return root_sign(branch) > 0 ? plus : minus;
}

ConjugateCase classify_branch(ObjectDistance l, double f) {
    if (f == 0.0 || !std::isfinite(f)) throw InputError("invalid lens: focal length must be finite and nonzero");
    if (f > 0.0) {
        if (l.is_infinite()) return ConjugateCase::case1;
        const double x = l.mm();
        if (x <= -2.0 * f) return ConjugateCase::case1;
        if (x > -f && x <= 0.0) return ConjugateCase::case1;
        return ConjugateCase::case2;  // (-2f, -f] U (0, +inf]
    }
    const double a = -f;  // |f|
    if (l.is_infinite()) return ConjugateCase::case3;
    const double x = l.mm();
    if (x < 0.0) return ConjugateCase::case3;
    if (x > a && x <= 2.0 * a) return ConjugateCase::case3;
    return ConjugateCase::case4;  // (0, |f|] U (2|f|, +inf]
}

double two_group_efl(double f1, double f2, double d) {
    const double denom = f1 + f2 - d;
    if (denom == 0.0) throw NumericError("afocal configuration: f1 + f2 = d gives an infinite EFL");
    return f1 * f2 / denom;
}

TwoGroupSpec TwoGroupSpec::from_groups(double f1, double f2, double d, double d_s, double fno,
                                       double fov_deg) {
    return TwoGroupSpec{two_group_efl(f1, f2, d), f1, f2, d, d_s, fno, fov_deg};
}

double TwoGroupSpec::efl_mismatch() const {
    return std::abs(f - two_group_efl(f1, f2, d)) / std::abs(f);
}

double back_working_distance(double f1, double f2, double d) {
    const double denom = f1 + f2 - d;
    if (denom == 0.0) throw NumericError("afocal configuration: back working distance undefined");
    return (f1 - d) * f2 / denom;
}

namespace {

void check_spec(const TwoGroupSpec& s) {
    if (!(s.fno > 0.0)) throw InputError("F-number must be positive");
    if (s.fov < 0.0) throw InputError("field of view must be non-negative");
    if (s.f1 == s.d_s) throw InputError("stop at the front-group focal point (d_s = f1) is singular");
}

// Field term shared by both aperture equations: 2 tan(FoV/2) f1 / (f1 - d_s).
double field_factor(const TwoGroupSpec& s, double d_s) {
    return 2.0 * std::tan(deg_to_rad(s.fov) / 2.0) * s.f1 / (s.f1 - d_s);
}

double front_aperture(const TwoGroupSpec& s, double d_s) {
    return field_factor(s, d_s) * d_s + s.f / s.fno;
}

double back_aperture(const TwoGroupSpec& s, double d_s, double l2) {
    return field_factor(s, d_s) * (s.d - d_s) + l2 / s.fno;
}

// Boundary of a monotone predicate on [lo, hi]; `ok_at_lo` says which end holds.
double bisect_boundary(auto&& ok, double lo, double hi) {
    for (int i = 0; i < 200 && hi - lo > 1e-12 * std::max(1.0, std::abs(hi)); ++i) {
        const double mid = 0.5 * (lo + hi);
        if (ok(mid) == ok(lo)) lo = mid; else hi = mid;
    }
    return 0.5 * (lo + hi);
}

}  // namespace

ApertureReport aperture_model(const TwoGroupSpec& spec) {
    check_spec(spec);
    ApertureReport r;
    r.l2_prime = back_working_distance(spec.f1, spec.f2, spec.d);
    r.d1 = front_aperture(spec, spec.d_s);
    r.d2 = back_aperture(spec, spec.d_s, r.l2_prime);
    return r;
}

std::optional<StopInterval> solve_stop_position(const TwoGroupSpec& spec, double d1_max,
                                                double d2_max) {
    if (!(spec.fno > 0.0)) throw InputError("F-number must be positive");
    if (spec.fov < 0.0) throw InputError("field of view must be non-negative");
    if (!(spec.d > 0.0)) throw InputError("group separation must be positive");
    if (spec.f1 >= 0.0 && spec.f1 <= spec.d) {
        throw InputError("front-group focal point lies inside [0, d]; stop search is singular");
    }
    if (d1_max <= 0.0 || d2_max <= 0.0) return std::nullopt;

    const double l2 = back_working_distance(spec.f1, spec.f2, spec.d);
    auto ok1 = [&](double ds) { return front_aperture(spec, ds) <= d1_max; };
    auto ok2 = [&](double ds) { return back_aperture(spec, ds, l2) <= d2_max; };

    // Both apertures are monotone in d_s on [0, d]; each constraint is an
    // interval touching one end, found by bisection.
    auto feasible_part = [&](auto&& ok) -> std::optional<StopInterval> {
        const bool a = ok(0.0);
        const bool b = ok(spec.d);
        if (a && b) return StopInterval{0.0, spec.d};
        if (!a && !b) return std::nullopt;
        const double edge = bisect_boundary(ok, 0.0, spec.d);
        return a ? StopInterval{0.0, edge} : StopInterval{edge, spec.d};
    };

    const auto i1 = feasible_part(ok1);
    const auto i2 = feasible_part(ok2);
    if (!i1 || !i2) return std::nullopt;
    StopInterval out{std::max(i1->lo, i2->lo), std::min(i1->hi, i2->hi)};
    if (out.lo > out.hi) return std::nullopt;
    return out;
}

}  // namespace focuskit::gaussian
