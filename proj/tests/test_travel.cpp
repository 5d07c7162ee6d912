#include <doctest.h>

#include <cmath>
#include <random>

#include "focuskit/errors.hpp"
#include "focuskit/gaussian.hpp"
#include "focuskit/travel.hpp"

using namespace focuskit;
using namespace focuskit::travel;

TEST_SUITE("travel") {

TEST_CASE("whole-lens travel") {
    const auto inf = ObjectDistance::infinity();
    CHECK(whole_lens_travel(30.0, inf, ObjectDistance::at(-2000.0)) == doctest::Approx(450.0).epsilon(1e-12));
    CHECK(whole_lens_travel(30.0, ObjectDistance::at(-2000.0), inf) ==
          whole_lens_travel(30.0, inf, ObjectDistance::at(-2000.0)));
    CHECK(whole_lens_travel(30.0, inf, inf) == 0.0);
    // Scales with f^2.
    CHECK(whole_lens_travel(60.0, inf, ObjectDistance::at(-2000.0)) == doctest::Approx(1800.0));
    CHECK_THROWS_AS(whole_lens_travel(-30.0, inf, ObjectDistance::at(-2000.0)), InputError);
    CHECK(far_object_approximation_holds(30.0, ObjectDistance::at(-2000.0)));
    CHECK_FALSE(far_object_approximation_holds(30.0, ObjectDistance::at(-500.0)));
}

TEST_CASE("two-group travel for the 30 mm design split") {
    const auto t = travel_two_group(17.49, -5.43, 15.23, ObjectDistance::at(-2000.0));
    const double f = gaussian::two_group_efl(17.49, -5.43, 15.23);
    const double alpha = 17.49 / f;
    CHECK(t.r_o == doctest::Approx(f * f / 2000.0 * 1000.0));
    CHECK(t.delta_l1 == doctest::Approx(alpha * alpha * t.r_o));
    CHECK(t.l2_conj == doctest::Approx(-(17.49 - 15.23) * (17.49 - 15.23) / (17.49 - 5.43 - 15.23)));
    REQUIRE(t.gamma.has_value());
    CHECK(*t.gamma == doctest::Approx(alpha * alpha / (1.0 - alpha * alpha)).epsilon(1e-9));
    CHECK(*t.gamma == doctest::Approx(0.5170).epsilon(2e-4));
    CHECK_FALSE(travel_two_group(17.49, -5.43, 15.23, ObjectDistance::infinity()).gamma.has_value());
}

TEST_CASE("gamma is independent of beta and of the near point") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 500; ++i) {
        const double alpha = 0.1 + 0.85 * u(rng);
        const double f = 10.0 + 50.0 * u(rng);
        const double near = -(500.0 + 5000.0 * u(rng));
        const double beta = (0.05 + 0.9 * u(rng)) * alpha;
        const double f1 = alpha * f;
        const double d = beta * f;
        const double f2 = f * (d - f1) / (f - f1);
        const auto t = travel_two_group(f1, f2, d, ObjectDistance::at(near));
        CHECK(*t.gamma == doctest::Approx(gamma_closed(alpha)).epsilon(1e-9));
    }
}

TEST_CASE("closed-form ratio") {
    CHECK(gamma_closed(std::sqrt(2.0) / 2.0) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(gamma_closed(0.5) == doctest::Approx(1.0 / 3.0));
    CHECK(gamma_closed(2.0) == doctest::Approx(4.0 / 3.0));
    CHECK_THROWS_AS(gamma_closed(1.0), NumericError);
    CHECK_THROWS_AS(gamma_closed(-1.0), NumericError);
    // Increasing on (0, 1).
    double prev = 0.0;
    for (int i = 1; i < 100; ++i) {
        const double g = gamma_closed(i / 100.0);
        CHECK(g > prev);
        prev = g;
    }
}

TEST_CASE("gamma curve splits at the pole") {
    const auto segs = gamma_curve(0.1, 0.95, 100);
    REQUIRE(segs.size() == 1);
    CHECK(segs[0].size() == 100);
    CHECK(segs[0].front().alpha == 0.1);
    CHECK(segs[0].back().alpha == 0.95);
    const auto split = gamma_curve(0.5, 1.5, 11);
    REQUIRE(split.size() == 2);
    CHECK(split[0].back().alpha < 1.0);
    CHECK(split[1].front().alpha > 1.0);
    CHECK(split[0].size() + split[1].size() == 10);
    CHECK_THROWS_AS(gamma_curve(0.9, 0.1, 10), InputError);
    CHECK_THROWS_AS(gamma_curve(0.1, 0.9, 1), InputError);
}

TEST_CASE("hyperfocal distance and focus positions") {
    CHECK(hyperfocal(30.0, 3.0, 0.004) == doctest::Approx(900.0 / 0.012 + 30.0));
    CHECK(default_coc(0.002) == doctest::Approx(0.004));
    const auto b = focus_positions(30.0, 3.0, 0.004, 2000.0, 5.14e6);
    CHECK(b.positions == 19);
    CHECK(b.total_pixels == doctest::Approx(19 * 5.14e6));
    CHECK(b.travel_budget == kDefaultTravelBudgetUm);
    // Sign of the near distance is ignored.
    CHECK(focus_positions(30.0, 3.0, 0.004, -2000.0, 1.0).positions == 19);
    // Near point beyond the hyperfocal span needs a single position.
    CHECK(focus_positions(30.0, 3.0, 0.004, 1e9, 1.0).positions == 1);
    CHECK_THROWS_AS(focus_positions(30.0, 3.0, 0.004, 0.0, 1.0), InputError);
}

TEST_CASE("focusing family table") {
    const auto rows = reproduce_family_table();
    REQUIRE(rows.size() == 8);
    const double expected[] = {312.5, 300.0, 306.25, 320.0, 337.5, 312.5, 302.5, 300.0};
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const auto& r = rows[i];
        CHECK(r.r_o_um == doctest::Approx(expected[i]));
        CHECK(r.gamma == doctest::Approx(r.lens.r_um / expected[i]));
        CHECK(std::abs(r.gamma - r.lens.gamma) <= 0.01);
        CHECK(r.gamma < 1.0);
    }
}

}
