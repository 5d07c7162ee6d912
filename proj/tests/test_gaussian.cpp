#include <doctest.h>

#include <cmath>
#include <random>

#include "focuskit/errors.hpp"
#include "focuskit/gaussian.hpp"

using namespace focuskit;
using namespace focuskit::gaussian;

TEST_SUITE("gaussian") {

TEST_CASE("gauss formula basics") {
    CHECK(image_distance_gauss(ObjectDistance::at(-60.0), 30.0) == doctest::Approx(60.0));
    CHECK(image_distance_gauss(ObjectDistance::infinity(), 30.0) == 30.0);
    CHECK(image_distance_gauss(ObjectDistance::at(-10.0), 30.0) == doctest::Approx(-15.0));
    CHECK(image_distance_gauss(ObjectDistance::at(-20.0), -20.0) == doctest::Approx(-10.0));
    CHECK_THROWS_AS(image_distance_gauss(ObjectDistance::at(-30.0), 30.0), NumericError);
    CHECK_THROWS_AS(image_distance_gauss(ObjectDistance::at(-30.0), 0.0), InputError);
}

TEST_CASE("object distance rejects NaN and +inf") {
    CHECK_THROWS_AS(ObjectDistance::at(std::nan("")), InputError);
    CHECK_THROWS_AS(ObjectDistance::at(HUGE_VAL), InputError);
    CHECK(ObjectDistance::at(-HUGE_VAL).is_infinite());
}

TEST_CASE("case classification follows the object intervals") {
    const double f = 30.0;
    CHECK(classify_branch(ObjectDistance::infinity(), f) == ConjugateCase::case1);
    CHECK(classify_branch(ObjectDistance::at(-60.0), f) == ConjugateCase::case1);
    CHECK(classify_branch(ObjectDistance::at(-45.0), f) == ConjugateCase::case2);
    CHECK(classify_branch(ObjectDistance::at(-30.0), f) == ConjugateCase::case2);
    CHECK(classify_branch(ObjectDistance::at(-10.0), f) == ConjugateCase::case1);
    CHECK(classify_branch(ObjectDistance::at(10.0), f) == ConjugateCase::case2);
    CHECK(classify_branch(ObjectDistance::at(-10.0), -20.0) == ConjugateCase::case3);
    CHECK(classify_branch(ObjectDistance::at(30.0), -20.0) == ConjugateCase::case3);
    CHECK(classify_branch(ObjectDistance::at(10.0), -20.0) == ConjugateCase::case4);
    CHECK(classify_branch(ObjectDistance::at(50.0), -20.0) == ConjugateCase::case4);
    CHECK(root_sign(ConjugateCase::case1) == -1);
    CHECK(root_sign(ConjugateCase::case2) == 1);
    CHECK_THROWS_AS(conjugate_case_from_int(5), InputError);
}

TEST_CASE("both roots satisfy sum L and product L f") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int i = 0; i < 2000; ++i) {
        const double f = (u(rng) > 0 ? 1.0 : -1.0) * (1.0 + 50.0 * std::abs(u(rng)));
        const double l = 400.0 * u(rng);
        if (std::abs(l) < 1e-3 || std::abs(l + f) < 1e-3) continue;
        const auto c = conjugate(ObjectDistance::at(l), f);
        const double L = c.conjugate_distance;
        const double disc = L * L - 4.0 * L * f;
        if (disc < 0.0) continue;
        const double other = L - c.image_distance;
        CHECK(c.image_distance + other == doctest::Approx(L).epsilon(1e-9));
        CHECK(c.image_distance * other == doctest::Approx(L * f).epsilon(1e-9).scale(std::abs(L * f) + 1.0));
        CHECK(c.image_distance == doctest::Approx(image_distance_gauss(ObjectDistance::at(l), f)).epsilon(1e-9));
    }
}

TEST_CASE("explicit branch must agree with the sign of f") {
    CHECK_THROWS_AS(image_distance_conjugate(120.0, 30.0, ConjugateCase::case3), InputError);
    CHECK_THROWS_AS(image_distance_conjugate(120.0, -30.0, ConjugateCase::case2), InputError);
    // L in (0, 4f) has no real conjugate for a positive lens.
    CHECK_THROWS_AS(image_distance_conjugate(60.0, 30.0, ConjugateCase::case1), NumericError);
    // l = -60, f = 30: L = 120, double root 60.
    CHECK(image_distance_conjugate(120.0, 30.0, ConjugateCase::case1) == doctest::Approx(60.0));
    CHECK(image_distance_conjugate(120.0, 30.0, ConjugateCase::case2) == doctest::Approx(60.0));
}

TEST_CASE("two-group EFL") {
    const double f = two_group_efl(17.49, -5.43, 15.23);
    CHECK(f == doctest::Approx(17.49 * -5.43 / (17.49 - 5.43 - 15.23)).epsilon(1e-15));
    CHECK(f == doctest::Approx(29.9592).epsilon(1e-5));
    CHECK_THROWS_AS(two_group_efl(10.0, -10.0, 0.0), NumericError);
    CHECK(two_group_efl(20.0, 30.0, 0.0) == doctest::Approx(12.0));
}

TEST_CASE("aperture model trades D1 against D2 along the stop position") {
    const auto s0 = TwoGroupSpec::from_groups(17.49, -5.43, 15.23, 2.0, 3.0, 6.2);
    const auto s1 = TwoGroupSpec::from_groups(17.49, -5.43, 15.23, 12.0, 3.0, 6.2);
    const auto a0 = aperture_model(s0);
    const auto a1 = aperture_model(s1);
    CHECK(a1.d1 > a0.d1);
    CHECK(a1.d2 < a0.d2);
    CHECK(a0.l2_prime == doctest::Approx(back_working_distance(17.49, -5.43, 15.23)));
    // At d_s = 0 the front aperture is the axial beam f / F#.
    const auto z = aperture_model(TwoGroupSpec::from_groups(17.49, -5.43, 15.23, 0.0, 3.0, 6.2));
    CHECK(z.d1 == doctest::Approx(s0.f / 3.0));
    CHECK_THROWS_AS(aperture_model(TwoGroupSpec::from_groups(17.49, -5.43, 15.23, 17.49, 3.0, 6.2)),
                    InputError);
}

TEST_CASE("stop position solver") {
    const auto spec = TwoGroupSpec::from_groups(17.49, -5.43, 15.23, 0.0, 3.0, 6.2);
    const auto iv = solve_stop_position(spec, 14.0, 5.0);
    REQUIRE(iv.has_value());
    CHECK(iv->lo <= iv->hi);
    for (double ds : {iv->lo, 0.5 * (iv->lo + iv->hi), iv->hi}) {
        auto s = spec;
        s.d_s = ds;
        const auto a = aperture_model(s);
        CHECK(a.d1 <= 14.0 + 1e-6);
        CHECK(a.d2 <= 5.0 + 1e-6);
    }
    CHECK_FALSE(solve_stop_position(spec, 9.0, 1.0).has_value());
    const auto bad = TwoGroupSpec::from_groups(10.0, -5.0, 12.0, 0.0, 3.0, 6.2);
    CHECK_THROWS(solve_stop_position(bad, 10.0, 10.0));
}

TEST_CASE("alpha and beta of a spec") {
    const auto s = TwoGroupSpec::from_groups(17.49, -5.43, 15.23, 5.0, 3.0, 6.2);
    CHECK(s.alpha() == doctest::Approx(17.49 / s.f));
    CHECK(s.beta() == doctest::Approx(15.23 / s.f));
    CHECK(s.efl_mismatch() == doctest::Approx(0.0));
}

}
