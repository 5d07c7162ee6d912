#pragma once

// Sequential real-ray and paraxial tracing through a Prescription.
//
// Global frame: light travels along +z, the first vertex sits at z = 0 and
// each following vertex is placed by cumulative thickness. A focus shift
// moves the focusing group rigidly along z (the gap ahead of it grows by the
// shift, the gap behind shrinks) while the image plane stays put.

#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "focuskit/distance.hpp"
#include "focuskit/prescription.hpp"
#include "focuskit/vec3.hpp"

namespace focuskit::raytrace {

struct Ray {
    Vec3 origin;
    Vec3 direction;  ///< unit
    double wavelength = kLineD;  ///< nm
};

enum class RayStatus { ok, missed, vignetted, total_internal_reflection, no_convergence };

std::string_view to_string(RayStatus status);

/// Even-asphere sag z(r) = c r^2 / (1 + sqrt(1 - (1+k) c^2 r^2)) + sum A_2j r^2j.
/// Empty when the conic square root is imaginary at r.
std::optional<double> try_sag(const SurfaceDef& s, double r);

/// As try_sag, but throws NumericError ("beyond surface extent").
double sag(const SurfaceDef& s, double r);

/// dz/dr of the sag profile; requires r inside the conic extent.
double sag_slope(const SurfaceDef& s, double r);

struct SurfaceHit {
    Vec3 point;
    Vec3 normal;  ///< unit, gradient of sag(r) - z (points toward -z at the vertex)
};

struct Intersection {
    RayStatus status = RayStatus::ok;
    SurfaceHit hit;
    int iterations = 0;
};

constexpr double kIntersectTolerance = 1e-10;  // mm
constexpr int kIntersectMaxIterations = 50;

/// Intersects an unrotated surface whose vertex is at (0, 0, vertex_z).
/// Newton iteration seeded by the exact base-conic solution.
Intersection intersect(const Ray& ray, const SurfaceDef& s, double vertex_z, bool clip_to_aperture = true);

/// Vector Snell refraction. Empty on total internal reflection. The normal
/// may face either way.
std::optional<Vec3> refract(const Vec3& d_in, const Vec3& normal, double n1, double n2);

/// Rigid misalignment of the focusing group: decenter along +y (mm) and tilt
/// about the x axis (degrees), pivoting on the group's first vertex.
struct GroupPerturbation {
    double decenter = 0.0;
    double tilt = 0.0;

    bool is_zero() const { return decenter == 0.0 && tilt == 0.0; }
};

/// Surface placement of a prescription at a given focus shift, optionally with
/// the focusing group perturbed. Materials are resolved once.
class Layout {
public:
    Layout(const Prescription& p, double focus_shift = 0.0, GroupPerturbation perturbation = {},
           const GlassCatalog& catalog = GlassCatalog::standard());

    struct Placement {
        Vec3 vertex;
        Mat3 orientation;  ///< local -> global
        bool rotated = false;
    };

    int surface_count() const { return static_cast<int>(surfaces_.size()); }
    const SurfaceDef& surface(int number) const { return surfaces_[static_cast<std::size_t>(number - 1)]; }
    const Placement& placement(int number) const { return placements_[static_cast<std::size_t>(number - 1)]; }
    /// Index of the medium following surface `number`.
    double index_after(int number, double wavelength) const;
    double image_z() const { return placements_.back().vertex.z; }
    double focus_shift() const { return focus_shift_; }

private:
    std::vector<SurfaceDef> surfaces_;
    std::vector<Placement> placements_;
    std::vector<GlassEntry> media_;
    double focus_shift_ = 0.0;
};

struct TraceResult {
    RayStatus status = RayStatus::ok;
    int failed_surface = 0;         ///< 1-based; 0 when the ray reached the image
    std::vector<SurfaceHit> hits;   ///< global frame, one per surface reached
    double image_x = 0.0;           ///< mm
    double image_y = 0.0;           ///< mm
    Vec3 final_direction;

    bool ok() const { return status == RayStatus::ok; }
};

/// Every surface but the image clips at its semi-diameter.
TraceResult trace_ray(const Layout& layout, const Ray& ray, bool record_hits = true);

TraceResult trace_ray(const Prescription& p, const Ray& ray, double focus_shift = 0.0);

std::vector<TraceResult> trace_batch(const Layout& layout, std::span<const Ray> rays,
                                     bool record_hits = false);

struct EntrancePupil {
    double position = 0.0;  ///< z of the pupil plane relative to the first vertex, mm
    double diameter = 0.0;  ///< mm
};

struct ParaxialSummary {
    double efl = 0.0;             ///< mm; infinite when afocal
    double bfl = 0.0;             ///< last refracting vertex to infinity focus, mm
    double image_distance = 0.0;  ///< last refracting vertex to the object's paraxial image, mm
    double defocus = 0.0;         ///< paraxial image minus image-plane position, mm
    EntrancePupil entrance_pupil;
    double working_fno = 0.0;
    bool afocal = false;
};

/// y-nu trace with surface powers (n' - n) c. The entrance pupil is the
/// paraxial image of the stop through the surfaces ahead of it.
ParaxialSummary paraxial_trace(const Prescription& p, double wavelength = kLineD, double focus_shift = 0.0,
                               ObjectDistance object = ObjectDistance::infinity(),
                               const GlassCatalog& catalog = GlassCatalog::standard());

/// Height and slope of a paraxial ray at the image plane, launched with height
/// y1 at the first vertex and object-space slope u0.
struct ParaxialRay {
    double y = 0.0;
    double u = 0.0;
};

ParaxialRay paraxial_ray_at_image(const Prescription& p, double y1, double u0, double wavelength = kLineD,
                                  double focus_shift = 0.0,
                                  const GlassCatalog& catalog = GlassCatalog::standard());

/// Rays filling the entrance pupil on rings x arms. Ring 0 is a single ray
/// through the pupil centre; ring i (1..n_rings-1) sits at radius
/// i / (n_rings - 1) of the pupil radius with n_arms rays at equal azimuth.
/// For a finite object the rays leave the object point; for infinity they are
/// collimated at the field angle (tilted toward +y).
std::vector<Ray> ray_fan(const EntrancePupil& pupil, double start_z, double field_angle_deg,
                         ObjectDistance object, int n_rings = 8, int n_arms = 16,
                         double wavelength = kLineD, double pupil_scale = 1.0);

std::vector<Ray> ray_fan(const Prescription& p, double field_angle_deg, ObjectDistance object,
                         int n_rings = 8, int n_arms = 16, double focus_shift = 0.0,
                         double wavelength = kLineD);

/// A z plane safely ahead of the first surface for launching collimated rays.
double launch_plane(const Prescription& p, const EntrancePupil& pupil);

}  // namespace focuskit::raytrace
