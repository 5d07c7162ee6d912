#include "focuskit/array.hpp"

#include <cmath>

#include "focuskit/distance.hpp"
#include "focuskit/errors.hpp"

namespace focuskit::array {

Tiling plan_geometry(const ArraySpec& spec) {
    if (!(spec.cone_angle > 0.0)) throw InputError("cone angle must be positive");
    if (spec.mfov < spec.cone_angle) throw InputError("coverage gap: channel field is narrower than the cone angle");
    if (spec.total_fov < spec.mfov) throw InputError("total field must be at least the channel field");
    Tiling t;
    t.overlap = spec.mfov - spec.cone_angle;
    const double ratio = spec.total_fov / spec.cone_angle;
    auto n = static_cast<int>(std::ceil(ratio));
    // ceil can land one above the exact quotient after rounding; take the
    // least count that still covers.
    if (n > 1 && (n - 1) * spec.cone_angle >= spec.total_fov) --n;
    t.channels_per_axis = n;
    return t;
}

double ifov(double pixel_pitch_um, double efl_mm) {
    if (!(pixel_pitch_um > 0.0) || !(efl_mm > 0.0)) throw InputError("pixel pitch and EFL must be positive");
    return pixel_pitch_um / efl_mm * 1000.0;
}

double equivalent_focal_length(double efl_mm, EquivalentMode mode, const EquivalentInputs& in) {
    switch (mode) {
    case EquivalentMode::diagonal:
        if (!(in.sensor_diagonal > 0.0)) throw InputError("diagonal mode needs a sensor diagonal");
        return efl_mm * kFullFrameDiagonal / in.sensor_diagonal;
    case EquivalentMode::ifov:
        if (!(in.pixel_pitch > 0.0) || !(in.ref_pixel > 0.0))
            throw InputError("ifov mode needs a pixel pitch and a reference pixel");
        return efl_mm * in.ref_pixel / in.pixel_pitch;
    }
    throw InputError("unknown equivalent focal length mode");
}

double zoom_envelope(const ArraySpec& spec, int display_px) {
    if (display_px <= 0) throw InputError("display width must be positive");
    const double narrow = display_px * ifov(spec.pixel_pitch, spec.efl) * 1e-6;
    const double wide = deg_to_rad(spec.total_fov);
    if (narrow >= wide) throw NumericError("no zoom headroom: display view covers the full field");
    return std::tan(wide / 2.0) / std::tan(narrow / 2.0);
}

double lateral_clearance(double cone_angle_deg, double distance_mm) {
    return 2.0 * std::tan(deg_to_rad(cone_angle_deg) / 2.0) * distance_mm;
}

ArrayPlan plan(const ArraySpec& spec, int display_px, double ref_pixel_um, double clearance_distance_mm) {
    const auto tiling = plan_geometry(spec);
    ArrayPlan out;
    out.overlap = tiling.overlap;
    out.channels_per_axis = tiling.channels_per_axis;
    out.ifov = ifov(spec.pixel_pitch, spec.efl);
    out.eq_fl_diagonal = equivalent_focal_length(spec.efl, EquivalentMode::diagonal, {spec.sensor_diagonal, 0, 0});
    out.eq_fl_ifov =
        equivalent_focal_length(spec.efl, EquivalentMode::ifov, {0.0, spec.pixel_pitch, ref_pixel_um});
    out.ref_pixel = ref_pixel_um;
    out.display_px = display_px;
    out.zoom_ratio = zoom_envelope(spec, display_px);
    out.clearance_distance = clearance_distance_mm;
    out.lateral_clearance = lateral_clearance(spec.cone_angle, clearance_distance_mm);
    return out;
}

}  // namespace focuskit::array
