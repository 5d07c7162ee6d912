#include "focuskit/raytrace.hpp"

#include <algorithm>
#include <cmath>

#include "focuskit/errors.hpp"

namespace focuskit::raytrace {

std::string_view to_string(RayStatus status) {
    switch (status) {
        case RayStatus::ok: return "ok";
        case RayStatus::missed: return "missed";
        case RayStatus::vignetted: return "vignetted";
        case RayStatus::total_internal_reflection: return "total_internal_reflection";
        case RayStatus::no_convergence: return "no_convergence";
    }
    return "unknown";
}

namespace {

double asphere_terms(const SurfaceDef& s, double r2) {
    // A4 r^4 + A6 r^6 + ... evaluated by Horner in r^2.
    double acc = 0.0;
    for (auto it = s.asph.rbegin(); it != s.asph.rend(); ++it) acc = acc * r2 + *it;
    return acc * r2 * r2;
}

double asphere_slope(const SurfaceDef& s, double r) {
    const double r2 = r * r;
    double acc = 0.0;
    double pw = r2 * r;  // r^3
    for (std::size_t j = 0; j < s.asph.size(); ++j) {
        acc += static_cast<double>(2 * (j + 2)) * s.asph[j] * pw;
        pw *= r2;
    }
    return acc;
}

}  // namespace

std::optional<double> try_sag(const SurfaceDef& s, double r) {
    const double r2 = r * r;
    double z = 0.0;
    if (!s.is_flat()) {
        const double c = s.curvature();
        const double arg = 1.0 - (1.0 + s.conic) * c * c * r2;
        if (arg < 0.0) return std::nullopt;
        z = c * r2 / (1.0 + std::sqrt(arg));
    }
    return z + asphere_terms(s, r2);
}

double sag(const SurfaceDef& s, double r) {
    if (auto z = try_sag(s, r)) return *z;
    throw NumericError("sag evaluated beyond surface extent");
}

double sag_slope(const SurfaceDef& s, double r) {
    double slope = 0.0;
    if (!s.is_flat()) {
        const double c = s.curvature();
        const double arg = 1.0 - (1.0 + s.conic) * c * c * r * r;
        if (arg <= 0.0) throw NumericError("sag slope evaluated beyond surface extent");
        slope = c * r / std::sqrt(arg);
    }
    return slope + asphere_slope(s, r);
}

namespace {

// Ray parameter of the base conic (aspheric terms dropped) on the vertex-side
// sheet. The form C / (-b + sign(-b) sqrt(b^2 - AC)) stays finite as c -> 0.
std::optional<double> conic_seed(const Vec3& o, const Vec3& d, const SurfaceDef& s) {
    if (s.is_flat()) {
        if (d.z == 0.0) return std::nullopt;
        return -o.z / d.z;
    }
    const double c = s.curvature();
    const double ck = c * (1.0 + s.conic);
    const double a = c * (d.x * d.x + d.y * d.y) + ck * d.z * d.z;
    const double b = c * (o.x * d.x + o.y * d.y) + ck * o.z * d.z - d.z;
    const double cc = c * (o.x * o.x + o.y * o.y) + ck * o.z * o.z - 2.0 * o.z;
    const double disc = b * b - a * cc;
    if (disc < 0.0) return std::nullopt;
    const double denom = -b + std::copysign(std::sqrt(disc), -b);
    if (denom == 0.0) return std::nullopt;
    return cc / denom;
}

Intersection intersect_local(const Vec3& origin, const Vec3& dir, const SurfaceDef& s, bool clip) {
    Intersection out;
    const auto seed = conic_seed(origin, dir, s);
    if (!seed) {
        out.status = RayStatus::missed;
        return out;
    }
    // Re-base at the seed point so the Newton steps work with small numbers.
    const Vec3 base = origin + dir * *seed;
    double t = 0.0;
    bool converged = false;
    Vec3 p = base;
    double rho = 0.0;
    for (int it = 0; it <= kIntersectMaxIterations; ++it) {
        p = base + dir * t;
        rho = std::sqrt(p.x * p.x + p.y * p.y);
        const auto z = try_sag(s, rho);
        if (!z) {
            out.status = RayStatus::missed;
            return out;
        }
        const double f = p.z - *z;
        out.iterations = it;
        if (std::abs(f) <= 0.01 * kIntersectTolerance) {
            converged = true;
            break;
        }
        if (it == kIntersectMaxIterations) break;
        const double drho = rho > 0.0 ? (p.x * dir.x + p.y * dir.y) / rho : 0.0;
        double slope = 0.0;
        try {
            slope = sag_slope(s, rho);
        } catch (const NumericError&) {
            out.status = RayStatus::missed;
            return out;
        }
        const double df = dir.z - slope * drho;
        if (df == 0.0) break;
        const double step = f / df;
        t -= step;
        if (std::abs(step) <= 1e-15) {
            p = base + dir * t;
            rho = std::sqrt(p.x * p.x + p.y * p.y);
            converged = true;
            break;
        }
    }
    if (!converged) {
        out.status = RayStatus::no_convergence;
        return out;
    }
    if (clip && rho > s.semi_diameter * (1.0 + 1e-12)) {
        out.status = RayStatus::vignetted;
        out.hit.point = p;
        return out;
    }
    double slope = 0.0;
    try {
        slope = sag_slope(s, rho);
    } catch (const NumericError&) {
        out.status = RayStatus::missed;
        return out;
    }
    Vec3 n{0.0, 0.0, -1.0};
    if (rho > 0.0) n = Vec3{slope * p.x / rho, slope * p.y / rho, -1.0};
    out.hit.point = p;
    out.hit.normal = normalized(n);
    out.status = RayStatus::ok;
    return out;
}

}  // namespace

Intersection intersect(const Ray& ray, const SurfaceDef& s, double vertex_z, bool clip_to_aperture) {
    const Vec3 offset{0.0, 0.0, vertex_z};
    Intersection r = intersect_local(ray.origin - offset, ray.direction, s, clip_to_aperture);
    r.hit.point = r.hit.point + offset;
    return r;
}

std::optional<Vec3> refract(const Vec3& d_in, const Vec3& normal, double n1, double n2) {
    Vec3 n = normal;
    double cos_i = -dot(n, d_in);
    if (cos_i < 0.0) {
        n = -n;
        cos_i = -cos_i;
    }
    const double mu = n1 / n2;
    const double sin2_t = mu * mu * (1.0 - cos_i * cos_i);
    if (sin2_t > 1.0) return std::nullopt;
    const double cos_t = std::sqrt(1.0 - sin2_t);
    return d_in * mu + n * (mu * cos_i - cos_t);
}

Layout::Layout(const Prescription& p, double focus_shift, GroupPerturbation perturbation,
               const GlassCatalog& catalog)
    : surfaces_(p.surfaces), focus_shift_(focus_shift) {
    if (surfaces_.empty()) throw InputError("prescription has no surfaces");
    const auto [g0, g1] = p.focusing_group;
    const bool has_group = g0 >= 1 && g1 >= g0 && g1 < p.surface_count();
    if (focus_shift != 0.0 && !has_group) throw InputError("prescription has no focusing group to shift");

    placements_.resize(surfaces_.size());
    media_.reserve(surfaces_.size());
    double z = 0.0;
    for (int i = 1; i <= p.surface_count(); ++i) {
        Placement& pl = placements_[static_cast<std::size_t>(i - 1)];
        pl.vertex = Vec3{0.0, 0.0, z};
        if (has_group && p.in_focusing_group(i)) pl.vertex.z += focus_shift;
        media_.push_back(catalog.get(p.surface(i).material));
        z += p.surface(i).thickness;
    }

    if (has_group && !perturbation.is_zero()) {
        const Vec3 pivot = placements_[static_cast<std::size_t>(g0 - 1)].vertex;
        const Mat3 rot = Mat3::rotation_x(deg_to_rad(perturbation.tilt));
        const Vec3 shift{0.0, perturbation.decenter, 0.0};
        for (int i = g0; i <= g1; ++i) {
            Placement& pl = placements_[static_cast<std::size_t>(i - 1)];
            pl.vertex = pivot + rot.apply(pl.vertex - pivot) + shift;
            pl.orientation = rot;
            pl.rotated = true;
        }
    }
}

double Layout::index_after(int number, double wavelength) const {
    return refractive_index(media_[static_cast<std::size_t>(number - 1)], wavelength);
}

TraceResult trace_ray(const Layout& layout, const Ray& ray, bool record_hits) {
    TraceResult result;
    Vec3 pos = ray.origin;
    Vec3 dir = ray.direction;
    double n1 = 1.0;
    const int count = layout.surface_count();
    if (record_hits) result.hits.reserve(static_cast<std::size_t>(count));

    for (int i = 1; i <= count; ++i) {
        const SurfaceDef& s = layout.surface(i);
        const auto& pl = layout.placement(i);
        const bool image = i == count;

        Vec3 lo = pos - pl.vertex;
        Vec3 ld = dir;
        if (pl.rotated) {
            lo = pl.orientation.apply_transpose(lo);
            ld = pl.orientation.apply_transpose(ld);
        }
        const Intersection hit = intersect_local(lo, ld, s, !image);
        if (hit.status != RayStatus::ok) {
            result.status = hit.status;
            result.failed_surface = i;
            return result;
        }

        Vec3 gp = hit.hit.point;
        Vec3 gn = hit.hit.normal;
        if (pl.rotated) {
            gp = pl.orientation.apply(gp);
            gn = pl.orientation.apply(gn);
        }
        gp = gp + pl.vertex;
        if (record_hits) result.hits.push_back({gp, gn});
        pos = gp;

        if (image) {
            result.image_x = gp.x;
            result.image_y = gp.y;
            result.final_direction = dir;
            return result;
        }

        const double n2 = layout.index_after(i, ray.wavelength);
        if (n2 != n1) {
            const auto out = refract(ld, hit.hit.normal, n1, n2);
            if (!out) {
                result.status = RayStatus::total_internal_reflection;
                result.failed_surface = i;
                return result;
            }
            dir = pl.rotated ? pl.orientation.apply(*out) : *out;
        }
        n1 = n2;
    }
    return result;
}

TraceResult trace_ray(const Prescription& p, const Ray& ray, double focus_shift) {
    return trace_ray(Layout(p, focus_shift), ray, true);
}

std::vector<TraceResult> trace_batch(const Layout& layout, std::span<const Ray> rays, bool record_hits) {
    std::vector<TraceResult> out;
    out.reserve(rays.size());
    for (const auto& r : rays) out.push_back(trace_ray(layout, r, record_hits));
    return out;
}

namespace {

struct ParaxialModel {
    std::vector<double> curvature;  // per surface
    std::vector<double> index;      // medium after each surface
    std::vector<double> gap;        // thickness after each surface (shift applied)
};

ParaxialModel paraxial_model(const Prescription& p, double wavelength, double focus_shift,
                             const GlassCatalog& catalog) {
    ParaxialModel m;
    const int n = p.surface_count();
    const auto [g0, g1] = p.focusing_group;
    const bool has_group = g0 >= 1 && g1 >= g0 && g1 < n;
    if (focus_shift != 0.0 && !has_group) throw InputError("prescription has no focusing group to shift");
    for (int i = 1; i <= n; ++i) {
        const auto& s = p.surface(i);
        m.curvature.push_back(s.curvature());
        m.index.push_back(catalog.index(s.material, wavelength));
        double t = s.thickness;
        if (has_group && i == g0 - 1) t += focus_shift;
        if (has_group && i == g1) t -= focus_shift;
        m.gap.push_back(t);
    }
    return m;
}

// Traces (y, u) from the first vertex through surfaces [1, last]; returns the
// height and slope just after refraction at `last` (no transfer beyond it).
ParaxialRay trace_to(const ParaxialModel& m, double y, double u, int last) {
    double n = 1.0;
    for (int i = 1; i <= last; ++i) {
        const auto k = static_cast<std::size_t>(i - 1);
        if (i > 1) y += m.gap[k - 1] * u;
        const double n2 = m.index[k];
        u = (n * u - y * (n2 - n) * m.curvature[k]) / n2;
        n = n2;
    }
    return {y, u};
}

}  // namespace

ParaxialRay paraxial_ray_at_image(const Prescription& p, double y1, double u0, double wavelength,
                                  double focus_shift, const GlassCatalog& catalog) {
    const auto m = paraxial_model(p, wavelength, focus_shift, catalog);
    const int last = p.surface_count() - 1;
    ParaxialRay r = trace_to(m, y1, u0, last);
    r.y += m.gap[static_cast<std::size_t>(last - 1)] * r.u;
    return r;
}

ParaxialSummary paraxial_trace(const Prescription& p, double wavelength, double focus_shift,
                               ObjectDistance object, const GlassCatalog& catalog) {
    if (p.surface_count() < 2) throw InputError("paraxial trace needs at least one surface before the image");
    const auto m = paraxial_model(p, wavelength, focus_shift, catalog);
    const int last = p.surface_count() - 1;
    const double n_image = m.index[static_cast<std::size_t>(last - 1)];
    const double last_gap = m.gap[static_cast<std::size_t>(last - 1)];

    ParaxialSummary s;
    const ParaxialRay axial = trace_to(m, 1.0, 0.0, last);
    if (axial.u == 0.0) {
        s.afocal = true;
        s.efl = std::numeric_limits<double>::infinity();
        s.bfl = std::numeric_limits<double>::infinity();
    } else {
        s.efl = -1.0 / (n_image * axial.u);
        s.bfl = -axial.y / axial.u;
    }

    if (object.is_infinite()) {
        s.image_distance = s.bfl;
    } else {
        const double l = object.mm();
        const ParaxialRay r = trace_to(m, 1.0, -1.0 / l, last);
        s.image_distance = r.u == 0.0 ? std::numeric_limits<double>::infinity() : -r.y / r.u;
    }
    s.defocus = s.image_distance - last_gap;

    // Entrance pupil: rays a = (1, 0) and b = (0, 1) at the first vertex,
    // heights measured on the stop plane.
    const int stop = p.stop_index;
    double ya = 1.0;
    double yb = 0.0;
    if (stop > 1) {
        const ParaxialRay a = trace_to(m, 1.0, 0.0, stop - 1);
        const ParaxialRay b = trace_to(m, 0.0, 1.0, stop - 1);
        const double t = m.gap[static_cast<std::size_t>(stop - 2)];
        ya = a.y + t * a.u;
        yb = b.y + t * b.u;
    }
    if (ya == 0.0) throw NumericError("stop is conjugate to infinity; entrance pupil undefined");
    s.entrance_pupil.position = yb / ya;
    s.entrance_pupil.diameter = 2.0 * p.surface(stop).semi_diameter / std::abs(ya);

    const double epr = 0.5 * s.entrance_pupil.diameter;
    ParaxialRay marginal;
    if (object.is_infinite()) {
        marginal = trace_to(m, epr, 0.0, last);
    } else {
        const double l = object.mm();
        const double u0 = epr / (s.entrance_pupil.position - l);
        marginal = trace_to(m, -u0 * l, u0, last);
    }
    s.working_fno = marginal.u == 0.0 ? std::numeric_limits<double>::infinity()
                                      : 1.0 / (2.0 * std::abs(n_image * marginal.u));
    return s;
}

double launch_plane(const Prescription& p, const EntrancePupil& pupil) {
    return std::min(0.0, pupil.position) - p.surface(1).semi_diameter - 1.0;
}

std::vector<Ray> ray_fan(const EntrancePupil& pupil, double start_z, double field_angle_deg,
                         ObjectDistance object, int n_rings, int n_arms, double wavelength,
                         double pupil_scale) {
    if (n_rings < 1 || n_arms < 1) throw InputError("ray fan needs at least one ring and one arm");
    const double theta = deg_to_rad(field_angle_deg);
    const double epr = 0.5 * pupil.diameter * pupil_scale;

    std::vector<Vec3> targets;
    targets.push_back({0.0, 0.0, pupil.position});
    for (int i = 1; i < n_rings; ++i) {
        const double rho = epr * static_cast<double>(i) / static_cast<double>(n_rings - 1);
        for (int j = 0; j < n_arms; ++j) {
            const double phi = 2.0 * kPi * static_cast<double>(j) / static_cast<double>(n_arms);
            targets.push_back({rho * std::cos(phi), rho * std::sin(phi), pupil.position});
        }
    }

    std::vector<Ray> rays;
    rays.reserve(targets.size());
    if (object.is_infinite()) {
        const Vec3 dir{0.0, std::sin(theta), std::cos(theta)};
        for (const auto& t : targets) {
            const double back = (t.z - start_z) / dir.z;
            rays.push_back({t - dir * back, dir, wavelength});
        }
    } else {
        const double l = object.mm();
        if (l >= pupil.position) throw InputError("object must lie ahead of the entrance pupil");
        const Vec3 obj{0.0, -(pupil.position - l) * std::tan(theta), l};
        for (const auto& t : targets) rays.push_back({obj, normalized(t - obj), wavelength});
    }
    return rays;
}

std::vector<Ray> ray_fan(const Prescription& p, double field_angle_deg, ObjectDistance object, int n_rings,
                         int n_arms, double focus_shift, double wavelength) {
    const ParaxialSummary s = paraxial_trace(p, wavelength, focus_shift);
    return ray_fan(s.entrance_pupil, launch_plane(p, s.entrance_pupil), field_angle_deg, object, n_rings,
                   n_arms, wavelength);
}

}  // namespace focuskit::raytrace
