#include "focuskit/focus.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <limits>
#include <string>

#include "focuskit/errors.hpp"
#include "focuskit/gaussian.hpp"
#include "focuskit/travel.hpp"

namespace focuskit::focus {

using raytrace::Layout;

namespace {

std::string describe(ObjectDistance d) {
    return d.is_infinite() ? std::string("infinity") : std::to_string(d.mm()) + " mm";
}

}  // namespace

SpotReport spot_rms(const Prescription& p, const Layout& layout, ObjectDistance object, double field_angle_deg,
                    const Sampling& sampling) {
    // The pupil comes from the unperturbed paraxial model at this shift.
    const auto para = raytrace::paraxial_trace(p, sampling.wavelength, layout.focus_shift());
    const auto rays = raytrace::ray_fan(para.entrance_pupil, raytrace::launch_plane(p, para.entrance_pupil),
                                        field_angle_deg, object, sampling.n_rings, sampling.n_arms,
                                        sampling.wavelength);
    SpotReport rep;
    rep.field_angle = field_angle_deg;
    rep.object_distance = object;
    rep.focus_shift = layout.focus_shift();

    double sx = 0.0;
    double sy = 0.0;
    std::vector<std::pair<double, double>> pts;
    pts.reserve(rays.size());
    for (const auto& ray : rays) {
        const auto r = raytrace::trace_ray(layout, ray, false);
        if (!r.ok()) {
            ++rep.n_vignetted;
            continue;
        }
        pts.emplace_back(r.image_x, r.image_y);
        sx += r.image_x;
        sy += r.image_y;
    }
    rep.n_traced = static_cast<int>(pts.size());
    if (pts.empty()) throw NumericError("no throughput: every ray was vignetted at " + describe(object));

    rep.centroid_x = sx / static_cast<double>(pts.size());
    rep.centroid_y = sy / static_cast<double>(pts.size());
    double acc = 0.0;
    for (const auto& [x, y] : pts) {
        const double dx = x - rep.centroid_x;
        const double dy = y - rep.centroid_y;
        acc += dx * dx + dy * dy;
    }
    rep.rms_radius = std::sqrt(acc / static_cast<double>(pts.size())) * 1000.0;
    return rep;
}

SpotReport spot_rms(const Prescription& p, ObjectDistance object, double field_angle_deg, double focus_shift,
                    const Sampling& sampling) {
    return spot_rms(p, Layout(p, focus_shift), object, field_angle_deg, sampling);
}

double paraxial_focus_shift(const Prescription& p, ObjectDistance object, double wavelength) {
    auto defocus = [&](double s) { return raytrace::paraxial_trace(p, wavelength, s, object).defocus; };
    // Defocus is close to linear in the shift; secant steps from the ends of
    // the search range, then clamp.
    double a = -kShiftLimit;
    double b = kShiftLimit;
    double fa = defocus(a);
    double fb = defocus(b);
    for (int i = 0; i < 50 && std::abs(b - a) > 1e-12; ++i) {
        if (fb == fa) break;
        const double c = b - fb * (b - a) / (fb - fa);
        a = b;
        fa = fb;
        b = c;
        fb = defocus(b);
        if (std::abs(fb) < 1e-13) break;
    }
    if (!std::isfinite(b)) return 0.0;
    return std::clamp(b, -kShiftLimit, kShiftLimit);
}

namespace {

double on_axis_rms(const Prescription& p, ObjectDistance object, double shift, const Sampling& sampling) {
    try {
        return spot_rms(p, object, 0.0, shift, sampling).rms_radius;
    } catch (const NumericError&) {
        return std::numeric_limits<double>::infinity();
    }
}

// Golden-section minimisation on [a, b] to kShiftTolerance.
double golden(auto&& f, double a, double b) {
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = b - inv_phi * (b - a);
    double d = a + inv_phi * (b - a);
    double fc = f(c);
    double fd = f(d);
    while (b - a > kShiftTolerance) {
        if (fc < fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    return 0.5 * (a + b);
}

}  // namespace

FocusSolution best_focus_absolute(const Prescription& p, ObjectDistance object, const Sampling& sampling) {
    auto f = [&](double s) { return on_axis_rms(p, object, s, sampling); };
    const double seed = paraxial_focus_shift(p, object, sampling.wavelength);

    // Coarse scan around the paraxial seed; the minimum must be interior and
    // the samples unimodal for golden section to be trusted.
    constexpr int kSamples = 41;
    constexpr double kHalfWidth = 0.2;
    const double lo = std::max(-kShiftLimit, seed - kHalfWidth);
    const double hi = std::min(kShiftLimit, seed + kHalfWidth);
    std::vector<double> xs(kSamples);
    std::vector<double> ys(kSamples);
    for (int i = 0; i < kSamples; ++i) {
        xs[i] = lo + (hi - lo) * i / (kSamples - 1);
        ys[i] = f(xs[i]);
    }
    const auto imin = static_cast<int>(std::min_element(ys.begin(), ys.end()) - ys.begin());
    bool unimodal = imin > 0 && imin < kSamples - 1 && std::isfinite(ys[imin]);
    for (int i = 1; unimodal && i <= imin; ++i) unimodal = ys[i] <= ys[i - 1];
    for (int i = imin + 1; unimodal && i < kSamples; ++i) unimodal = ys[i] >= ys[i - 1];

    FocusSolution sol;
    if (unimodal) {
        sol.shift = golden(f, xs[imin - 1], xs[imin + 1]);
    } else {
        // Dense 1 um grid over the whole range, refined inside the best cell.
        sol.used_grid = true;
        const int n = static_cast<int>(std::lround(2.0 * kShiftLimit / 1e-3));
        double best_x = 0.0;
        double best_y = std::numeric_limits<double>::infinity();
        for (int i = 0; i <= n; ++i) {
            const double x = -kShiftLimit + 1e-3 * i;
            const double y = f(x);
            if (y < best_y) {
                best_y = y;
                best_x = x;
            }
        }
        if (!std::isfinite(best_y)) throw NumericError("no throughput at any focus shift for " + describe(object));
        sol.shift = golden(f, std::max(-kShiftLimit, best_x - 1e-3), std::min(kShiftLimit, best_x + 1e-3));
    }
    sol.rms_radius = f(sol.shift);
    if (!std::isfinite(sol.rms_radius)) throw NumericError("no throughput at best focus for " + describe(object));
    return sol;
}

double best_focus_shift(const Prescription& p, ObjectDistance object, const Sampling& sampling) {
    if (object.is_infinite()) return 0.0;
    const double ref = best_focus_absolute(p, ObjectDistance::infinity(), sampling).shift;
    return best_focus_absolute(p, object, sampling).shift - ref;
}

TravelSweep travel_sweep(const Prescription& p, const std::vector<ObjectDistance>& distances,
                         const Sampling& sampling) {
    if (distances.size() < 2) throw InputError("travel sweep needs at least two object distances");

    std::vector<ObjectDistance> jobs{ObjectDistance::infinity()};
    jobs.insert(jobs.end(), distances.begin(), distances.end());
    std::vector<std::future<FocusSolution>> futures;
    futures.reserve(jobs.size());
    for (const auto& d : jobs) {
        futures.push_back(std::async(std::launch::async, [&p, d, &sampling] {
            return best_focus_absolute(p, d, sampling);
        }));
    }
    std::vector<FocusSolution> solved;
    for (std::size_t i = 0; i < futures.size(); ++i) {
        try {
            solved.push_back(futures[i].get());
        } catch (const std::exception& e) {
            throw NumericError("travel sweep failed at object distance " + describe(jobs[i]) + ": " + e.what());
        }
    }

    TravelSweep sweep;
    const double ref = solved.front().shift;
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    ObjectDistance nearest = ObjectDistance::infinity();
    for (std::size_t i = 1; i < jobs.size(); ++i) {
        SweepEntry e;
        e.object_distance = jobs[i];
        e.best_shift = jobs[i].is_infinite() ? 0.0 : solved[i].shift - ref;
        e.rms = jobs[i].is_infinite() ? solved.front().rms_radius : solved[i].rms_radius;
        lo = std::min(lo, e.best_shift);
        hi = std::max(hi, e.best_shift);
        if (std::abs(jobs[i].reciprocal()) > std::abs(nearest.reciprocal())) nearest = jobs[i];
        sweep.entries.push_back(e);
    }
    sweep.travel_range = (hi - lo) * 1000.0;
    if (!nearest.is_infinite()) {
        const double r_o = travel::whole_lens_travel(p.nominal.efl, ObjectDistance::infinity(), nearest);
        if (r_o > 0.0) sweep.gamma_measured = sweep.travel_range / r_o;
    }
    return sweep;
}

FirstOrderComparison compare_first_order(const Prescription& p, double f1, double f2, double d,
                                         ObjectDistance near, const Sampling& sampling) {
    FirstOrderComparison c;
    const double f = gaussian::two_group_efl(f1, f2, d);
    c.alpha = f1 / f;
    if (near.is_infinite()) return c;

    c.gamma_closed = travel::gamma_closed(c.alpha);
    c.gamma_first_order = travel::travel_two_group(f1, f2, d, near).gamma;
    c.gamma_measured = travel_sweep(p, {ObjectDistance::infinity(), near}, sampling).gamma_measured;
    if (c.gamma_first_order) c.dev_first_order_vs_closed = *c.gamma_first_order - *c.gamma_closed;
    if (c.gamma_measured) {
        c.dev_measured_vs_closed = *c.gamma_measured - *c.gamma_closed;
        if (c.gamma_first_order) c.dev_measured_vs_first_order = *c.gamma_measured - *c.gamma_first_order;
    }
    return c;
}

PerturbationDelta perturb_focus_group(const Prescription& p, double decenter_mm, double tilt_deg,
                                      const Sampling& sampling) {
    if (std::abs(decenter_mm) > 0.2) throw InputError("decenter must be within +/-0.2 mm");
    if (std::abs(tilt_deg) > 1.0) throw InputError("tilt must be within +/-1 degree");

    const auto inf = ObjectDistance::infinity();
    const double shift = best_focus_absolute(p, inf, sampling).shift;
    PerturbationDelta out;
    out.nominal = spot_rms(p, Layout(p, shift), inf, 0.0, sampling);
    out.perturbed = spot_rms(p, Layout(p, shift, {decenter_mm, tilt_deg}), inf, 0.0, sampling);
    out.rms_growth = out.perturbed.rms_radius - out.nominal.rms_radius;
    out.centroid_shift_x = out.perturbed.centroid_x - out.nominal.centroid_x;
    out.centroid_shift_y = out.perturbed.centroid_y - out.nominal.centroid_y;
    return out;
}

}  // namespace focuskit::focus
