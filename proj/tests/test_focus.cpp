#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>

#include "focuskit/errors.hpp"
#include "focuskit/focus.hpp"
#include "focuskit/travel.hpp"

using namespace focuskit;
using namespace focuskit::focus;

namespace {

const Prescription& mfm() {
    static const Prescription p = builtin("mfm30");
    return p;
}

const Prescription& mms() {
    static const Prescription p = builtin("mms45");
    return p;
}

}  // namespace

TEST_SUITE("focus") {

TEST_CASE("on-axis fan has its centroid on the axis") {
    for (const auto* p : {&mfm(), &mms()}) {
        const auto s = spot_rms(*p, ObjectDistance::infinity(), 0.0, 0.0);
        CHECK(std::abs(s.centroid_x) <= 1e-9);
        CHECK(std::abs(s.centroid_y) <= 1e-9);
        CHECK(s.rms_radius >= 0.0);
        CHECK(s.n_traced > 0);
        CHECK(s.n_traced + s.n_vignetted == 1 + 7 * 16);
    }
}

TEST_CASE("no throughput is an error") {
    CHECK_THROWS_AS(spot_rms(mfm(), ObjectDistance::infinity(), 60.0, 0.0), NumericError);
}

TEST_CASE("infinity is the zero reference") {
    CHECK(best_focus_shift(mfm(), ObjectDistance::infinity()) == 0.0);
}

TEST_CASE("golden-section focus agrees with a dense grid") {
    for (const auto* p : {&mfm(), &mms()}) {
        for (const auto obj : {ObjectDistance::infinity(), ObjectDistance::at(-3000.0)}) {
            const auto sol = best_focus_absolute(*p, obj);
            // Brute force on a 1 um grid around the answer, then 0.05 um.
            double best = 0.0;
            double best_rms = std::numeric_limits<double>::infinity();
            for (int i = -60; i <= 60; ++i) {
                const double s = std::round(sol.shift * 1e3) * 1e-3 + i * 1e-3;
                const double r = spot_rms(*p, obj, 0.0, s).rms_radius;
                if (r < best_rms) {
                    best_rms = r;
                    best = s;
                }
            }
            for (int i = -20; i <= 20; ++i) {
                const double s = best + i * 5e-5;
                const double r = spot_rms(*p, obj, 0.0, s).rms_radius;
                if (r < best_rms) {
                    best_rms = r;
                    best = s;
                }
            }
            CHECK(std::abs(sol.shift - best) <= 0.5e-3);
            CHECK(sol.rms_radius <= best_rms + 1e-3);
        }
    }
}

TEST_CASE("travel sweep brackets for the 30 mm design") {
    const auto sw = travel_sweep(mfm(), {ObjectDistance::infinity(), ObjectDistance::at(-2000.0)});
    REQUIRE(sw.entries.size() == 2);
    CHECK(sw.entries[0].best_shift == 0.0);
    CHECK(sw.travel_range >= 190.0);
    CHECK(sw.travel_range <= 240.0);
    REQUIRE(sw.gamma_measured.has_value());
    CHECK(*sw.gamma_measured >= 0.42);
    CHECK(*sw.gamma_measured <= 0.54);
    CHECK(*sw.gamma_measured < 1.0);
}

TEST_CASE("travel ratio below one for the multiscale design") {
    const auto sw = travel_sweep(mms(), {ObjectDistance::infinity(), ObjectDistance::at(-5000.0)});
    REQUIRE(sw.gamma_measured.has_value());
    CHECK(*sw.gamma_measured < 1.0);
}

TEST_CASE("sweep properties") {
    const std::vector<ObjectDistance> d = {ObjectDistance::at(-1000.0), ObjectDistance::infinity(),
                                           ObjectDistance::at(-5000.0), ObjectDistance::at(-2000.0)};
    auto reversed = d;
    std::reverse(reversed.begin(), reversed.end());
    const auto a = travel_sweep(mfm(), d);
    const auto b = travel_sweep(mfm(), reversed);
    CHECK(a.travel_range == b.travel_range);

    // Shift grows with object vergence.
    auto entries = a.entries;
    std::sort(entries.begin(), entries.end(), [](const auto& x, const auto& y) {
        return std::abs(x.object_distance.reciprocal()) < std::abs(y.object_distance.reciprocal());
    });
    for (std::size_t i = 1; i < entries.size(); ++i) CHECK(entries[i].best_shift > entries[i - 1].best_shift);

    const auto same = travel_sweep(mfm(), {ObjectDistance::at(-2000.0), ObjectDistance::at(-2000.0)});
    CHECK(same.travel_range == 0.0);
    CHECK_THROWS_AS(travel_sweep(mfm(), {ObjectDistance::infinity()}), InputError);
}

TEST_CASE("first-order comparison") {
    const auto c = compare_first_order(mfm(), 17.49, -5.43, 15.23, ObjectDistance::at(-2000.0));
    const double f = 17.49 * -5.43 / (17.49 - 5.43 - 15.23);
    const double a2 = (17.49 / f) * (17.49 / f);
    REQUIRE(c.gamma_closed.has_value());
    REQUIRE(c.gamma_first_order.has_value());
    REQUIRE(c.gamma_measured.has_value());
    CHECK(*c.gamma_closed == doctest::Approx(a2 / (1.0 - a2)).epsilon(1e-14));
    CHECK(std::abs(*c.gamma_first_order - *c.gamma_closed) <= 1e-6);
    CHECK(*c.gamma_measured >= 0.42);
    CHECK(*c.gamma_measured <= 0.54);
    CHECK(*c.dev_measured_vs_closed == doctest::Approx(*c.gamma_measured - *c.gamma_closed));

    const auto none = compare_first_order(mfm(), 17.49, -5.43, 15.23, ObjectDistance::infinity());
    CHECK_FALSE(none.gamma_closed.has_value());
    CHECK_FALSE(none.gamma_first_order.has_value());
    CHECK_FALSE(none.gamma_measured.has_value());
}

TEST_CASE("zero perturbation is the identity") {
    const auto d = perturb_focus_group(mfm(), 0.0, 0.0);
    CHECK(d.rms_growth == 0.0);
    CHECK(d.centroid_shift_x == 0.0);
    CHECK(d.centroid_shift_y == 0.0);
    CHECK(d.nominal.rms_radius == d.perturbed.rms_radius);
}

TEST_CASE("decenter is mirror symmetric and degrades monotonically") {
    const auto plus = perturb_focus_group(mfm(), 0.025, 0.0);
    const auto minus = perturb_focus_group(mfm(), -0.025, 0.0);
    CHECK(plus.perturbed.rms_radius == doctest::Approx(minus.perturbed.rms_radius).epsilon(1e-9));
    CHECK(plus.centroid_shift_y == doctest::Approx(-minus.centroid_shift_y).epsilon(1e-9));

    double prev = -1.0;
    for (double dec : {0.0, 0.010, 0.025, 0.050}) {
        const double rms = perturb_focus_group(mfm(), dec, 0.0).perturbed.rms_radius;
        CHECK(rms > prev);
        prev = rms;
    }
    CHECK(perturb_focus_group(mfm(), 0.0, 0.2).rms_growth > 0.0);
}

TEST_CASE("perturbation limits") {
    CHECK_THROWS_AS(perturb_focus_group(mfm(), 0.3, 0.0), InputError);
    CHECK_THROWS_AS(perturb_focus_group(mfm(), 0.0, 1.5), InputError);
}

}

// Spot-size targets for the 30 mm design at the specified pupil sampling.
TEST_SUITE("focus_quality") {

TEST_CASE("best-focus spot of the 30 mm design is within 5 um rms") {
    const auto sol = best_focus_absolute(mfm(), ObjectDistance::infinity());
    CHECK(sol.rms_radius <= 5.0);
}

TEST_CASE("doubling the pupil sampling changes the spot by under 2%") {
    const double shift = best_focus_absolute(mfm(), ObjectDistance::infinity()).shift;
    const double coarse = spot_rms(mfm(), ObjectDistance::infinity(), 0.0, shift, {8, 16, kLineD}).rms_radius;
    const double fine = spot_rms(mfm(), ObjectDistance::infinity(), 0.0, shift, {16, 32, kLineD}).rms_radius;
    CHECK(std::abs(fine - coarse) / coarse < 0.02);
}

}
