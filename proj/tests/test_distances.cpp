#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "oracles.hpp"
#include "rotsym/distances.hpp"
#include "rotsym/profiles.hpp"

using namespace rotsym;

TEST_CASE("sorwen bound closed form") {
    CHECK(ifd_bound_sorwen(3, 0.0, 10.0, 10.0, 100.0, 10.0) == 0.0);
    // n=3, d_lip = log 1.1, D = 10, V1 = 100, A1 = 10 -> 2*1.21*0.1*10*110 = 266.2
    const double b = ifd_bound_sorwen(3, std::log(1.1), 10.0, 10.0, 100.0, 10.0);
    CHECK(std::fabs(b - 266.2) < 1e-12 * 266.2);
    // monotone in the lipschitz input
    double prev = 0.0;
    for (double d : {0.01, 0.05, 0.1, 0.4}) {
        const double v = ifd_bound_sorwen(3, d, 10.0, 10.0, 100.0, 10.0);
        CHECK(v > prev);
        prev = v;
    }
}

TEST_CASE("sorwen bound is monotone in every geometric input") {
    const double base = ifd_bound_sorwen(3, 0.1, 5.0, 4.0, 50.0, 10.0);
    CHECK(ifd_bound_sorwen(3, 0.1, 10.0, 4.0, 50.0, 10.0) > base); // D1
    CHECK(ifd_bound_sorwen(3, 0.1, 5.0, 9.0, 50.0, 10.0) > base);  // D2 via max
    CHECK(ifd_bound_sorwen(3, 0.1, 5.0, 4.0, 80.0, 10.0) > base);  // V1
    CHECK(ifd_bound_sorwen(3, 0.1, 5.0, 4.0, 50.0, 30.0) > base);  // A1
    // and linear in (V1 + A1)
    CHECK(std::fabs(ifd_bound_sorwen(3, 0.1, 5.0, 4.0, 100.0, 20.0) - 2.0 * base) <
          1e-12 * base);
}

TEST_CASE("lakzian bound") {
    const LakzianBound zero = ifd_bound_lakzian(0.0, 5.0, 5.0, 10.0, 10.0, 2.0, 2.0);
    CHECK(zero.t_gap == 0.0);
    CHECK(zero.bound == 0.0);

    // small-eps expansion: t_gap ~ sqrt(2 eps)/pi * maxD
    const double eps = 1e-6;
    const LakzianBound lb = ifd_bound_lakzian(eps, 7.0, 5.0, 10.0, 10.0, 2.0, 2.0);
    const double approx = std::sqrt(2.0 * eps) / M_PI * 7.0;
    CHECK(std::fabs(lb.t_gap / approx - 1.0) < 1e-5);

    // doubling the volumes and areas doubles the bound
    const LakzianBound l1 = ifd_bound_lakzian(0.01, 7.0, 5.0, 10.0, 20.0, 2.0, 3.0);
    const LakzianBound l2 = ifd_bound_lakzian(0.01, 7.0, 5.0, 20.0, 40.0, 4.0, 6.0);
    CHECK(std::fabs(l2.bound - 2.0 * l1.bound) < 1e-12 * l2.bound);

    CHECK_THROWS_AS(ifd_bound_lakzian(-0.1, 1, 1, 1, 1, 1, 1), OutOfDomain);
}

TEST_CASE("filling warp factor") {
    CHECK(filling_metric_lower(0.1, 2.0, 2.0, 4.0) == 1.0);
    CHECK(std::fabs(filling_metric_lower(0.1, 4.0, 2.0, 4.0)) < 1e-30); // cos(pi/2)^2
    // even in t - t_i
    CHECK(filling_metric_lower(0.0, 2.5, 2.0, 4.0) ==
          filling_metric_lower(0.0, 1.5, 2.0, 4.0));
    CHECK_THROWS_AS(filling_metric_lower(-1.0, 0.0, 0.0, 1.0), OutOfDomain);
    CHECK_THROWS_AS(filling_metric_lower(0.0, 0.0, 0.0, 0.0), OutOfDomain);
}

TEST_CASE("tube comparison on schwarzschild is null") {
    const Manifold M(schwarzschild_profile(3, 1.0));
    const DistanceBounds b = tube_comparison(M, 16.0 * M_PI, 64.0 * M_PI, 1.0);
    CHECK(b.lip_bound == 0.0);
    CHECK(std::fabs(b.inputs.tube_lip) < 1e-7);
    CHECK(b.ifd_sorwen < 1e-3);
    CHECK(b.ifd_lakzian < 1.0);     // t_gap ~ sqrt(eps): weaker but still tiny
    CHECK(b.tube_distortion_bounded);
    CHECK(std::fabs(b.inputs.scale_in - 1.0) < 1e-7);
    CHECK(std::fabs(b.inputs.scale_out - 1.0) < 1e-7);
}

TEST_CASE("tube comparison bounds slacken off as delta grows") {
    const double A0 = 16.0 * M_PI, A1 = 64.0 * M_PI;
    double prev_s = 0.0, prev_l = 0.0;
    for (double delta : {0.001, 0.01, 0.1}) {
        const Manifold M(deep_well_profile(3, A0, A1, 4.0, delta));
        const ComparisonSetup C(M);
        const DistanceBounds b = tube_comparison(C, A1, 1.0);
        CHECK(b.ifd_sorwen > prev_s);
        CHECK(b.ifd_lakzian > prev_l);
        CHECK(b.tube_distortion_bounded);
        CHECK(b.inputs.lambda >= C.h());
        prev_s = b.ifd_sorwen;
        prev_l = b.ifd_lakzian;
    }
}

TEST_CASE("diameter, volume and area caps hold for the computed tubes") {
    const double A0 = 16.0 * M_PI, A1 = 64.0 * M_PI, D = 1.0;
    for (double delta : {0.01, 0.05}) {
        const Manifold M(deep_well_profile(3, A0, A1, 6.0, delta));
        const ComparisonSetup C(M);
        const DistanceBounds b = tube_comparison(C, A1, D);
        const double r1 = M.radius_of_area(A1);
        CHECK(b.inputs.D1 <= 2.0 * D + M_PI * r1 + 1e-8);
        CHECK(b.inputs.D2 <= 2.0 * D + M_PI * r1 + 1e-8);
        const double vol_cap = D * A0 + C.model().volume_between_radii(
                                            C.model().horizon_radius(), r1 + D);
        CHECK(b.inputs.V1 <= vol_cap + 1e-8 * vol_cap);
        const double area_cap =
            2.0 * unit_sphere_area(3) * ipow(r1 + D, 2);
        CHECK(b.inputs.A1 <= area_cap + 1e-8 * area_cap);
    }
}

TEST_CASE("tube must stay in the sphere-preserving region") {
    const Manifold M(deep_well_profile(3, 16.0 * M_PI, 64.0 * M_PI, 4.0, 0.09));
    const ComparisonSetup C(M);
    CHECK_THROWS_AS(tube_comparison(C, C.A_delta() * 0.999, 1.0), TubeEscapesRegion);
    CHECK_THROWS_AS(tube_comparison(C, 64.0 * M_PI, 0.0), OutOfDomain);
    CHECK_THROWS_AS(tube_comparison(M, 17.0 * M_PI, 64.0 * M_PI, 1.0), OutOfDomain);
}

TEST_CASE("clipped tube comparison still yields finite inflated input") {
    // deep well: the tube around Sigma_1 reaches down the well and clips
    const Manifold M(deep_well_profile(3, 16.0 * M_PI, 64.0 * M_PI, 2.0, 0.05));
    const ComparisonSetup C(M);
    const double s1 = M.arclength(M.radius_of_area(64.0 * M_PI));
    const DistanceBounds b = tube_comparison(C, 64.0 * M_PI, s1 * 1.5);
    CHECK(std::isfinite(b.inputs.tube_lip));
    CHECK(b.tube_distortion_bounded);
    CHECK(b.ifd_sorwen > 0.0);
}
