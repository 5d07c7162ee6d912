#pragma once

// Lens prescriptions: surface data, JSON file format, validation and the two
// bundled designs ("mfm30", "mms45").
//
// Surfaces are numbered from 1 as in a lens-design table; the image plane is
// the last surface. Thickness is the axial distance to the next vertex.

#include <array>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "focuskit/glass.hpp"

namespace focuskit {

enum class SurfaceKind { sphere, asphere, plane, stop, image };

std::string_view to_string(SurfaceKind kind);
SurfaceKind surface_kind_from_string(std::string_view s);

constexpr double kFlat = std::numeric_limits<double>::infinity();

struct SurfaceDef {
    SurfaceKind kind = SurfaceKind::sphere;
    double radius = kFlat;  ///< mm; kFlat (either sign of infinity) for a plane
    double thickness = 0.0;
    std::string material = "AIR";
    double semi_diameter = 0.0;
    double conic = 0.0;
    std::array<double, 5> asph{};  ///< A4, A6, A8, A10, A12

    bool is_flat() const { return !std::isfinite(radius); }
    double curvature() const { return is_flat() ? 0.0 : 1.0 / radius; }
    bool has_asphere_terms() const;
};

struct NominalSpec {
    double efl = 0.0;  ///< mm
    double fno = 0.0;
    double fov = 0.0;  ///< full field, degrees
};

struct SensorSpec {
    double pixel_pitch = 0.0;  ///< mm
    double diagonal = 0.0;     ///< mm
    int h_px = 0;
    int v_px = 0;

    double pixel_count() const { return static_cast<double>(h_px) * v_px; }
};

/// Channel geometry carried by array-camera designs.
struct ChannelGeometry {
    double cone_angle = 0.0;  ///< degrees
    double mfov = 0.0;        ///< degrees
};

struct Prescription {
    std::string name;
    std::string description;
    std::vector<SurfaceDef> surfaces;
    int stop_index = 0;                  ///< 1-based
    std::array<int, 2> focusing_group{};  ///< 1-based, inclusive
    NominalSpec nominal;
    SensorSpec sensor;
    std::optional<ChannelGeometry> channel;

    int surface_count() const { return static_cast<int>(surfaces.size()); }
    int image_index() const { return surface_count(); }

    /// 1-based access.
    const SurfaceDef& surface(int number) const;
    SurfaceDef& surface(int number);

    bool in_focusing_group(int number) const {
        return number >= focusing_group[0] && number <= focusing_group[1];
    }
};

/// Reads the JSON prescription format. Numbers may be JSON numbers or decimal
/// strings; radius may be "inf". Errors carry the 1-based surface number.
Prescription parse_prescription(std::string_view json,
                                const GlassCatalog& catalog = GlassCatalog::standard());

/// Writes the JSON prescription format with numbers as shortest round-trip
/// decimal strings and a fixed key order.
std::string emit_prescription(const Prescription& p);

Prescription load_prescription_file(const std::string& path,
                                    const GlassCatalog& catalog = GlassCatalog::standard());

struct ValidationIssue {
    enum class Severity { error, warning };
    Severity severity = Severity::error;
    int surface = 0;  ///< 1-based, 0 when not tied to a surface
    std::string message;
};

struct ValidationReport {
    std::vector<ValidationIssue> issues;
    double max_focusing_group_diameter = 0.0;  ///< mm

    bool ok() const;
    std::vector<ValidationIssue> errors() const;
    std::vector<ValidationIssue> warnings() const;
};

/// Package limit for the focusing-group clear aperture.
constexpr double kFocusingGroupMaxDiameter = 6.0;  // mm

ValidationReport validate(const Prescription& p,
                          const GlassCatalog& catalog = GlassCatalog::standard());

/// Sum of thicknesses of every surface ahead of the image plane.
double total_track(const Prescription& p);

/// Bundled designs: "mfm30" and "mms45".
Prescription builtin(std::string_view name);

std::vector<std::string> builtin_names();

}  // namespace focuskit
