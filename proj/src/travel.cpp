#include "focuskit/travel.hpp"

#include <algorithm>
#include <cmath>

#include "focuskit/gaussian.hpp"

namespace focuskit::travel {

double whole_lens_travel(double f, ObjectDistance l_a, ObjectDistance l_b) {
    if (!(f > 0.0)) throw InputError("focal length must be positive");
    if ((!l_a.is_infinite() && l_a.mm() == 0.0) || (!l_b.is_infinite() && l_b.mm() == 0.0)) {
        throw InputError("object distance must be nonzero");
    }
    const double mm = f * f * std::abs(l_a.reciprocal() - l_b.reciprocal());
    return mm * 1000.0;
}

bool far_object_approximation_holds(double f, ObjectDistance l, double factor) {
    if (l.is_infinite()) return true;
    return std::abs(l.mm()) >= factor * 4.0 * std::abs(f);
}

TravelResult travel_two_group(double f1, double f2, double d, ObjectDistance l_b) {
    const double f = gaussian::two_group_efl(f1, f2, d);
    if (!(f > 0.0)) throw InputError("two-group system must have positive EFL");

    TravelResult t;
    t.r_o = whole_lens_travel(f, ObjectDistance::infinity(), l_b);
    t.delta_l1 = (f1 / f) * (f1 / f) * t.r_o;
    t.l2_conj = -(f1 - d) * (f1 - d) / (f1 + f2 - d);

    const double disc = t.l2_conj * t.l2_conj - 4.0 * t.l2_conj * f2;
    if (!(disc > 0.0)) throw NumericError("invalid back-group conjugate: L2^2 - 4 L2 f2 <= 0");
    const double slope = 0.5 * std::abs(1.0 + (t.l2_conj - 2.0 * f2) / std::sqrt(disc));
    t.r = slope * t.delta_l1;
    if (t.r_o > 0.0) t.gamma = t.r / t.r_o;
    return t;
}

double gamma_closed(double alpha) {
    const double a2 = alpha * alpha;
    if (a2 == 1.0) throw NumericError("gamma has a pole at alpha = 1");
    return std::abs(a2 / (1.0 - a2));
}

std::vector<std::vector<GammaPoint>> gamma_curve(double alpha_min, double alpha_max, int n_samples) {
    if (!(alpha_min > 0.0) || !(alpha_max > alpha_min)) {
        throw InputError("gamma curve needs 0 < alpha_min < alpha_max");
    }
    if (n_samples < 2) throw InputError("gamma curve needs at least two samples");

    std::vector<std::vector<GammaPoint>> segments(1);
    const double step = (alpha_max - alpha_min) / (n_samples - 1);
    for (int i = 0; i < n_samples; ++i) {
        const double a = i == n_samples - 1 ? alpha_max : alpha_min + step * i;
        if (a == 1.0) continue;
        if (a > 1.0 && !segments.back().empty() && segments.back().back().alpha < 1.0) {
            segments.emplace_back();
        }
        segments.back().push_back({a, gamma_closed(a)});
    }
    std::erase_if(segments, [](const auto& s) { return s.empty(); });
    return segments;
}

double hyperfocal(double f, double fno, double coc) {
    if (!(f > 0.0) || !(fno > 0.0) || !(coc > 0.0)) {
        throw InputError("hyperfocal distance needs positive f, F-number and circle of confusion");
    }
    return f * f / (fno * coc) + f;
}

FocusBudget focus_positions(double f, double fno, double coc, double near, double sensor_pixels,
                            double travel_budget_um) {
    if (near == 0.0) throw InputError("near distance must be nonzero");
    FocusBudget b;
    b.hyperfocal = hyperfocal(f, fno, coc);
    b.coc = coc;
    b.travel_budget = travel_budget_um;
    const double span = 1.0 / std::abs(near);        // mm^-1 from infinity to near
    const double step = 2.0 * fno * coc / (f * f);   // mm^-1 per depth-of-field interval
    b.positions = std::max<std::int64_t>(1, static_cast<std::int64_t>(std::ceil(span / step - 1e-12)));
    b.total_pixels = static_cast<double>(b.positions) * sensor_pixels;
    return b;
}

const std::array<FamilyLens, 8>& universal_focusing_family() {
    static const std::array<FamilyLens, 8> table{{
        {1, 25, 2.5, 2, 238, 313, 0.76},
        {2, 30, 3.0, 3, 207, 300, 0.69},
        {3, 35, 3.0, 4, 238, 306, 0.78},
        {4, 40, 3.0, 5, 252, 320, 0.79},
        {5, 45, 3.5, 6, 224, 338, 0.66},
        {6, 50, 3.5, 8, 204, 313, 0.65},
        {7, 55, 3.5, 10, 208, 303, 0.69},
        {8, 60, 4.0, 12, 205, 300, 0.68},
    }};
    return table;
}

std::vector<FamilyRow> reproduce_family_table() {
    std::vector<FamilyRow> rows;
    for (const auto& lens : universal_focusing_family()) {
        FamilyRow row;
        row.lens = lens;
        row.r_o_um = whole_lens_travel(lens.f, ObjectDistance::infinity(),
                                       ObjectDistance::at(-lens.near_m * 1000.0));
        row.gamma = lens.r_um / row.r_o_um;
        rows.push_back(row);
    }
    return rows;
}

}  // namespace focuskit::travel
