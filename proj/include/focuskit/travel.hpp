#pragma once

// Focus-travel bookkeeping: how far an image (or a focusing group) must move
// to refocus between two object distances, and how a fixed front group with
// a moving back group reduces that stroke.

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include "focuskit/distance.hpp"

namespace focuskit::travel {

/// Whole-lens travel R_o = f^2 |1/l_a - 1/l_b| in micrometres (f and
/// distances in mm). Valid when both distances are large compared with 4|f|.
double whole_lens_travel(double f, ObjectDistance l_a, ObjectDistance l_b);

/// True when |l| >= factor * 4|f|, i.e. the far-object approximation behind
/// whole_lens_travel is reasonable.
bool far_object_approximation_holds(double f, ObjectDistance l, double factor = 10.0);

struct TravelResult {
    double r_o = 0.0;       ///< whole-lens travel, um
    double delta_l1 = 0.0;  ///< intermediate-image shift, um
    double l2_conj = 0.0;   ///< back-group conjugate distance L2, mm
    double r = 0.0;         ///< two-group travel, um
    /// r / r_o; empty when r_o is zero (near point at infinity).
    std::optional<double> gamma;
};

/// Two-group travel with the far point fixed at infinity and the near point at
/// l_b. The back-group displacement uses the first-order derivative of the
/// plus-root conjugate solution.
TravelResult travel_two_group(double f1, double f2, double d, ObjectDistance l_b);

/// |alpha^2 / (1 - alpha^2)| with alpha = f1 / f.
double gamma_closed(double alpha);

struct GammaPoint {
    double alpha = 0.0;
    double gamma = 0.0;
};

/// Uniform samples of gamma_closed over [alpha_min, alpha_max]. A range that
/// contains the pole at alpha = 1 comes back as two segments; samples landing
/// exactly on the pole are dropped.
std::vector<std::vector<GammaPoint>> gamma_curve(double alpha_min, double alpha_max, int n_samples);

/// H = f^2 / (fno * coc) + f, all lengths in mm.
double hyperfocal(double f, double fno, double coc);

/// Default circle of confusion: two pixels.
constexpr double default_coc(double pixel_pitch_mm) { return 2.0 * pixel_pitch_mm; }

/// Default actuator stroke budget in um.
constexpr double kDefaultTravelBudgetUm = 300.0;

struct FocusBudget {
    double hyperfocal = 0.0;  ///< mm
    double coc = 0.0;         ///< mm
    std::int64_t positions = 1;
    double total_pixels = 0.0;
    double travel_budget = kDefaultTravelBudgetUm;  ///< um
};

/// Number of depth-of-field steps needed to cover infinity down to `near`
/// (mm, sign ignored): ceil((1/near) / (2 fno coc / f^2)).
FocusBudget focus_positions(double f, double fno, double coc, double near, double sensor_pixels,
                            double travel_budget_um = kDefaultTravelBudgetUm);

/// One lens of the universal focusing family sharing a single focusing group.
struct FamilyLens {
    int lens = 0;
    double f = 0.0;          ///< mm
    double fno = 0.0;
    double near_m = 0.0;     ///< near point magnitude, m
    double r_um = 0.0;       ///< group travel reported for the design, um
    double r_o_um = 0.0;     ///< whole-lens travel as tabulated, um
    double gamma = 0.0;      ///< ratio as tabulated
};

const std::array<FamilyLens, 8>& universal_focusing_family();

struct FamilyRow {
    FamilyLens lens;
    double r_o_um = 0.0;  ///< recomputed from f and near point
    double gamma = 0.0;   ///< tabulated R / recomputed R_o
};

std::vector<FamilyRow> reproduce_family_table();

}  // namespace focuskit::travel
