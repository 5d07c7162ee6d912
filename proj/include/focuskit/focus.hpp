#pragma once

// Refocusing on real prescriptions: geometric spot size, best-focus search
// over the focusing-group shift, travel sweeps and misalignment checks.

#include <optional>
#include <vector>

#include "focuskit/distance.hpp"
#include "focuskit/prescription.hpp"
#include "focuskit/raytrace.hpp"

namespace focuskit::focus {

struct Sampling {
    int n_rings = 8;
    int n_arms = 16;
    double wavelength = kLineD;
};

struct SpotReport {
    double field_angle = 0.0;  ///< degrees
    ObjectDistance object_distance = ObjectDistance::infinity();
    double focus_shift = 0.0;  ///< mm, absolute shift from the tabulated position
    double rms_radius = 0.0;   ///< um, about the centroid
    double centroid_x = 0.0;   ///< mm
    double centroid_y = 0.0;   ///< mm
    int n_traced = 0;
    int n_vignetted = 0;
};

/// RMS transverse radius of the unvignetted image hits. Throws NumericError
/// when no ray reaches the image.
SpotReport spot_rms(const Prescription& p, ObjectDistance object, double field_angle_deg, double focus_shift,
                    const Sampling& sampling = {});

/// Same, on an explicit (possibly perturbed) layout.
SpotReport spot_rms(const Prescription& p, const raytrace::Layout& layout, ObjectDistance object,
                    double field_angle_deg, const Sampling& sampling = {});

/// Search range for the focusing-group shift, mm.
constexpr double kShiftLimit = 0.5;
constexpr double kShiftTolerance = 1e-4;  // mm (0.1 um)

struct FocusSolution {
    double shift = 0.0;      ///< absolute shift, mm
    double rms_radius = 0.0; ///< um
    bool used_grid = false;  ///< true when the bracket was not unimodal
};

/// Shift that puts the paraxial image of `object` on the image plane.
double paraxial_focus_shift(const Prescription& p, ObjectDistance object, double wavelength = kLineD);

/// Minimum on-axis RMS over shifts in [-0.5, 0.5] mm: golden section around
/// the paraxial seed, dense 1 um grid when the bracket is not unimodal.
FocusSolution best_focus_absolute(const Prescription& p, ObjectDistance object, const Sampling& sampling = {});

/// Best-focus shift relative to the best focus at infinity (mm). Zero for the
/// far point by construction.
double best_focus_shift(const Prescription& p, ObjectDistance object, const Sampling& sampling = {});

struct SweepEntry {
    ObjectDistance object_distance = ObjectDistance::infinity();
    double best_shift = 0.0;  ///< mm, relative to infinity focus
    double rms = 0.0;         ///< um
};

struct TravelSweep {
    std::vector<SweepEntry> entries;
    double travel_range = 0.0;  ///< um
    /// travel_range / whole-lens travel of the nominal EFL; empty when the
    /// nearest distance is infinity.
    std::optional<double> gamma_measured;
};

/// Best focus for each distance (evaluated concurrently) and the resulting
/// travel range.
TravelSweep travel_sweep(const Prescription& p, const std::vector<ObjectDistance>& distances,
                         const Sampling& sampling = {});

struct FirstOrderComparison {
    double alpha = 0.0;
    std::optional<double> gamma_closed;
    std::optional<double> gamma_first_order;
    std::optional<double> gamma_measured;
    /// first_order - closed, measured - closed, measured - first_order
    std::optional<double> dev_first_order_vs_closed;
    std::optional<double> dev_measured_vs_closed;
    std::optional<double> dev_measured_vs_first_order;
};

/// Closed-form, two-group first-order and traced travel ratios side by side
/// for a thin-lens split (f1, f2, d) of the prescription.
FirstOrderComparison compare_first_order(const Prescription& p, double f1, double f2, double d,
                                         ObjectDistance near, const Sampling& sampling = {});

struct PerturbationDelta {
    SpotReport nominal;
    SpotReport perturbed;
    double rms_growth = 0.0;        ///< um
    double centroid_shift_x = 0.0;  ///< mm
    double centroid_shift_y = 0.0;  ///< mm
};

/// Decenters (mm, along y) and tilts (degrees, about x) the focusing group
/// about its first vertex and compares the on-axis infinity spot at the
/// nominal best focus.
PerturbationDelta perturb_focus_group(const Prescription& p, double decenter_mm, double tilt_deg,
                                      const Sampling& sampling = {});

}  // namespace focuskit::focus
