#pragma once

// Array-camera planning in a 1-D angular tiling model: channel count along
// one great-circle axis, overlap, pixel field of view, equivalent focal
// length and digital zoom headroom.

namespace focuskit::array {

/// 36 x 24 mm full-frame diagonal.
constexpr double kFullFrameDiagonal = 43.27;

struct ArraySpec {
    double cone_angle = 0.0;      ///< degrees per channel
    double mfov = 0.0;            ///< per-channel full field, degrees
    double total_fov = 0.0;       ///< coverage target, degrees
    double pixel_pitch = 0.0;     ///< um
    double efl = 0.0;             ///< mm
    double sensor_diagonal = 0.0; ///< mm
    int h_px = 0;
    int v_px = 0;
};

struct Tiling {
    double overlap = 0.0;  ///< degrees
    int channels_per_axis = 0;
};

/// Throws InputError on a coverage gap (mfov < cone angle) or non-positive angles.
Tiling plan_geometry(const ArraySpec& spec);

/// Pixel pitch (um) over EFL (mm), in microradians.
double ifov(double pixel_pitch_um, double efl_mm);

enum class EquivalentMode { diagonal, ifov };

struct EquivalentInputs {
    double sensor_diagonal = 0.0;  ///< mm, diagonal mode
    double pixel_pitch = 0.0;      ///< um, ifov mode
    double ref_pixel = 0.0;        ///< um, ifov mode
};

/// diagonal: efl * 43.27 / sensor_diagonal; ifov: efl * ref_pixel / pixel_pitch.
/// Throws InputError when the mode's parameters are missing.
double equivalent_focal_length(double efl_mm, EquivalentMode mode, const EquivalentInputs& in);

/// tan(total/2) / tan(display_px * ifov / 2). Throws NumericError when the
/// one-to-one view already spans the whole coverage.
double zoom_envelope(const ArraySpec& spec, int display_px);

/// Width of a channel's cone at `distance` mm from the shell centre.
double lateral_clearance(double cone_angle_deg, double distance_mm);

constexpr double kClearanceDistance = 75.0;  // mm
constexpr double kReferencePixel = 8.0;      // um
constexpr int kDefaultDisplayPx = 1920;

struct ArrayPlan {
    double overlap = 0.0;          ///< degrees
    int channels_per_axis = 0;
    double ifov = 0.0;             ///< urad
    double eq_fl_diagonal = 0.0;   ///< mm
    double eq_fl_ifov = 0.0;       ///< mm
    double ref_pixel = 0.0;        ///< um
    double zoom_ratio = 0.0;
    int display_px = 0;
    double lateral_clearance = 0.0;  ///< mm at clearance_distance
    double clearance_distance = 0.0; ///< mm
};

ArrayPlan plan(const ArraySpec& spec, int display_px = kDefaultDisplayPx, double ref_pixel_um = kReferencePixel,
               double clearance_distance_mm = kClearanceDistance);

}  // namespace focuskit::array
