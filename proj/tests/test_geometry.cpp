#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>
#include <sstream>

#include "oracles.hpp"
#include "rotsym/geometry.hpp"
#include "rotsym/profiles.hpp"

using namespace rotsym;

namespace {
// closed form for s(4) on Schwarzschild n=3, m=1:
// s(r) = sqrt(r(r-2m)) + 2m asinh(sqrt((r-2m)/(2m)))
const double kSchwClosedS4 = std::sqrt(8.0) + 2.0 * std::asinh(1.0); // 4.59117429878...

Manifold schw31() { return Manifold(schwarzschild_profile(3, 1.0)); }
} // namespace

TEST_CASE("schwarzschild n=3 m=1 closed forms") {
    const Manifold M = schw31();
    CHECK(M.r0() == 2.0);
    CHECK(M.boundary_area() == 16.0 * M_PI);

    CHECK(M.drds(2.0) == 0.0); // exactly zero at the horizon
    CHECK(std::fabs(M.drds(4.0) - std::sqrt(0.5)) < 1e-15);
    CHECK(std::fabs(M.dzdr(4.0) - 1.0) < 1e-15);
    CHECK_THROWS_AS(M.dzdr(2.0), SingularAtHorizon);

    CHECK(M.arclength(2.0) == 0.0);
    CHECK(M.height(2.0) == 0.0);
    CHECK(std::fabs(M.height(4.0) - 4.0) < 1e-9);
    CHECK(std::fabs(M.height(2.5) - 2.0) < 1e-9);
    CHECK(std::fabs(M.arclength(4.0) - kSchwClosedS4) < 1e-9);

    // z(r) = sqrt(8 (r-2)) across the grid
    for (double r : {2.0001, 2.01, 2.3, 3.0, 5.5, 11.0, 19.0})
        CHECK(std::fabs(M.height(r) - std::sqrt(8.0 * (r - 2.0))) < 1e-9);
}

TEST_CASE("critical-slope piece has dr/ds = sqrt(eps) exactly") {
    const auto prof = deep_well_profile(3, 16.0 * M_PI, 64.0 * M_PI, 8.0, 0.04);
    const double eps = prof.pieces()[1].epsilon;
    const Manifold M(prof);
    const double r_mid = 0.5 * (prof.pieces()[1].r_lo + prof.pieces()[1].r_hi);
    CHECK(M.drds(r_mid) == std::sqrt(eps));
    // dz/dr falls off like sqrt(2m/(r-2m)) at large radius for a bounded tail
    const double r_far = 0.99 * M.r_max();
    const double two_m = 2.0 * M.adm_mass();
    CHECK(M.dzdr(r_far) < M.dzdr(3.0));
    CHECK(std::fabs(M.dzdr(r_far) - std::sqrt(two_m / (r_far - two_m))) < 1e-12);
}

TEST_CASE("coordinate identity and monotonicity on the grid") {
    const auto prof = deep_well_profile(3, 16.0 * M_PI, 64.0 * M_PI, 8.0, 0.04);
    const Manifold M(prof);
    const auto& gr = M.grid_r();
    const auto& gs = M.grid_s();
    const auto& gz = M.grid_z();
    REQUIRE(gr.size() == gs.size());
    for (std::size_t i = 1; i < gr.size(); ++i) {
        CHECK(gs[i] > gs[i - 1]);
        CHECK(gz[i] > gz[i - 1]);
        const double r = gr[i];
        const double dsdr = 1.0 / M.drds(r);
        const double dzdr = M.dzdr(r);
        CHECK(std::fabs(dsdr * dsdr - dzdr * dzdr - 1.0) < 1e-9); // define-z identity
        CHECK(M.drds(r) > 0.0);
        CHECK(M.drds(r) < 1.0);
    }
}

TEST_CASE("arclength and height match the oracle quadrature") {
    const auto prof = deep_well_profile(3, 16.0 * M_PI, 64.0 * M_PI, 8.0, 0.04);
    const Manifold M(prof);
    for (double r : {2.0005, 2.004, 2.08, 2.5, 4.0, 9.0, 23.0}) {
        const double s_o = oracles::arclength(M, r);
        const double z_o = oracles::height(M, r);
        CHECK(std::fabs(M.arclength(r) - s_o) <= 1e-9 * (1.0 + s_o));
        CHECK(std::fabs(M.height(r) - z_o) <= 1e-9 * (1.0 + z_o));
    }
    const Manifold S = schw31();
    for (double r : {2.1, 3.0, 4.0, 8.0, 17.0}) {
        // 10 x quad_tol
        CHECK(std::fabs(S.arclength(r) - oracles::arclength(S, r)) <=
              1e-9 * (1.0 + S.arclength(r)));
        CHECK(std::fabs(S.height(r) - oracles::height(S, r)) <=
              1e-9 * (1.0 + S.height(r)));
    }
}

TEST_CASE("mollified profiles run through the full geometry") {
    // smooth the kinked three-piece profile and rebuild the manifold
    const double eps = 0.1, delta = 0.05, r0 = 2.0;
    const double r_under = r0 / (1.0 - eps);
    const double r_over = r0 * (1.0 + delta) / (1.0 - eps);
    const AdmissibleProfile kinked(
        3, r0,
        {ProfilePiece::constant(1.0, r0, r_under),
         ProfilePiece::fraction_of_max(eps, r_under, r_over),
         ProfilePiece::constant(1.0 * (1 + delta), r_over, kInf)});
    const auto smooth = mollify(kinked, 0.03);
    REQUIRE(validate_profile(smooth).valid);
    const Manifold M(smooth);

    // oracle agreement through the joins
    for (double r : {r_under, 0.5 * (r_under + r_over), r_over, 2.0 * r_over}) {
        const double s_o = oracles::arclength(M, r);
        const double z_o = oracles::height(M, r);
        CHECK(std::fabs(M.arclength(r) - s_o) <= 1e-8 * (1.0 + s_o));
        CHECK(std::fabs(M.height(r) - z_o) <= 1e-8 * (1.0 + z_o));
    }
    // curvature is continuous across the seams (no CornerDerivative)
    for (const auto& pc : smooth.pieces()) {
        if (pc.kind != PieceKind::MollifiedJoin) continue;
        CHECK_NOTHROW(M.scalar_curvature(pc.r_lo));
        CHECK_NOTHROW(M.scalar_curvature(pc.r_hi));
        CHECK(M.scalar_curvature(0.5 * (pc.r_lo + pc.r_hi)) >= 0.0);
    }
}

TEST_CASE("inverse coordinate maps round-trip") {
    const Manifold M(deep_well_profile(3, 16.0 * M_PI, 64.0 * M_PI, 6.0, 0.05));
    for (double f : {1e-4, 0.05, 0.3, 0.7, 1.0}) {
        const double r = M.r0() * std::pow(M.r_max() / M.r0(), f);
        CHECK(std::fabs(M.r_at_arclength(M.arclength(r)) - r) < 1e-8 * r);
        CHECK(std::fabs(M.r_at_height(M.height(r)) - r) < 1e-8 * r);
    }
    CHECK(M.r_at_arclength(0.0) == M.r0());
}

TEST_CASE("scalar curvature: analytic pieces and finite-difference oracle") {
    const double eps = 0.1, delta = 0.05;
    const int n = 3;
    const double r0 = 2.0;
    const double m0 = 0.5 * r0;
    const double r_under = r0 / (1.0 - eps);
    const double r_over = r0 * (1.0 + delta) / (1.0 - eps);
    const AdmissibleProfile prof(n, r0,
                                 {ProfilePiece::constant(m0, r0, r_under),
                                  ProfilePiece::fraction_of_max(eps, r_under, r_over),
                                  ProfilePiece::constant(m0 * (1 + delta), r_over, kInf)});
    const Manifold M(prof);

    CHECK(M.scalar_curvature(2.05) == 0.0);
    const double r_mid = 0.5 * (r_under + r_over);
    // critical-slope piece: R = (n-1)(n-2)(1-eps)/r^2
    CHECK(std::fabs(M.scalar_curvature(r_mid) -
                    (n - 1) * (n - 2) * (1.0 - eps) / (r_mid * r_mid)) < 1e-14);

    // eqn-18 cross-check via second differences of r(s)
    const double R_fd = oracles::scalar_curvature_fd(M, r_mid, 1e-3);
    CHECK(std::fabs(R_fd - M.scalar_curvature(r_mid)) <=
          1e-4 * std::fabs(M.scalar_curvature(r_mid)));
    // smooth constant piece: absolute agreement with zero
    CHECK(std::fabs(oracles::scalar_curvature_fd(M, 8.0, 1e-3)) < 1e-6);

    CHECK_THROWS_AS(M.scalar_curvature(r_under), CornerDerivative);
    CHECK(M.scalar_curvature(r_under, Side::Left) == 0.0);
}

TEST_CASE("geroch monotonicity is equivalent to nonnegative curvature") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 8; ++trial) {
        const int n = 3 + static_cast<int>(canonical_u01(rng()) * 3);
        const auto prof =
            oracles::random_admissible_profile(rng, n, 0.05 + 0.4 * canonical_u01(rng()));
        const Manifold M(prof);
        double minR = 0.0;
        for (int k = 0; k <= 2000; ++k) {
            const double r =
                M.r0() * std::pow(M.r_max() / M.r0(), static_cast<double>(k) / 2000.0);
            minR = std::min(minR, M.scalar_curvature(r, Side::Right));
        }
        CHECK(minR >= -1e-12);
    }
    // a decreasing stretch produces negative curvature somewhere
    for (int trial = 0; trial < 4; ++trial) {
        const auto bad = oracles::random_decreasing_profile(rng, 3);
        const Manifold M(bad);
        const ProfilePiece* join = nullptr;
        for (const auto& pc : bad.pieces())
            if (pc.kind == PieceKind::MollifiedJoin) join = &pc;
        REQUIRE(join != nullptr);
        double minR = 0.0;
        for (int k = 1; k < 200; ++k) {
            const double r = join->r_lo + (join->r_hi - join->r_lo) * k / 200.0;
            minR = std::min(minR, M.scalar_curvature(r));
        }
        CHECK(minR < 0.0);
    }
}

TEST_CASE("pinching: m0 <= m_H <= m_ADM on the grid") {
    std::mt19937_64 rng(3);
    const auto prof = oracles::random_admissible_profile(rng, 4, 0.3);
    const Manifold M(prof);
    const double two_m0 = ipow(M.r0(), M.n() - 2);
    const double two_m1 = 2.0 * M.adm_mass();
    for (double r : M.grid_r()) {
        const double lhs = ipow(r, M.n() - 2) * (1.0 - sqr(M.drds(r)));
        CHECK(lhs >= two_m0 * (1.0 - 1e-12));
        CHECK(lhs <= two_m1 * (1.0 + 1e-12));
    }
}

TEST_CASE("adm mass and the penrose ratio") {
    CHECK(schw31().adm_mass() == 1.0);
    std::mt19937_64 rng(5);
    for (int t = 0; t < 5; ++t) {
        const auto prof = oracles::random_admissible_profile(rng, 3, 0.2);
        const Manifold M(prof);
        const double m0 = 0.5 * ipow(M.r0(), M.n() - 2);
        CHECK(M.adm_mass() / m0 >= 1.0 - 1e-15);
    }
}

TEST_CASE("areas and inverse radius") {
    const Manifold M = schw31();
    CHECK(M.area_of_sphere(2.0) == 16.0 * M_PI);
    CHECK(std::fabs(M.radius_of_area(M.area_of_sphere(3.7)) - 3.7) < 1e-14);
    CHECK_THROWS_AS(M.area_of_sphere(1.0), OutOfDomain);
    CHECK_THROWS_AS(M.radius_of_area(1.0), OutOfDomain);

    const Manifold M4(schwarzschild_profile(4, 0.5));
    CHECK(M4.area_of_sphere(1.0) == 2.0 * M_PI * M_PI);
}

TEST_CASE("sphere distance") {
    const Manifold M = schw31();
    CHECK(M.sphere_distance(16.0 * M_PI, 16.0 * M_PI) == 0.0);
    // distance between the r=2 and r=4 spheres against the oracle
    const double d = M.sphere_distance(16.0 * M_PI, 64.0 * M_PI);
    CHECK(std::fabs(d - oracles::arclength(M, 4.0)) <= 1e-8 * d);

    // deep-well: measured separation exceeds the analytic lower bound
    const auto prof = deep_well_profile(3, 16.0 * M_PI, 64.0 * M_PI, 12.0, 0.05);
    const Manifold W(prof);
    const double eps = prof.pieces()[1].epsilon;
    const double bound = 2.0 / std::sqrt(eps) * 0.05 / (1.0 - eps);
    const double sep = W.sphere_distance(16.0 * M_PI, 64.0 * M_PI);
    CHECK(sep > 12.0);
    CHECK(sep >= bound * (1.0 - 1e-9));
}

TEST_CASE("tubes") {
    const Manifold M = schw31();

    // degenerate tube
    const Tube t0 = M.tube(64.0 * M_PI, 0.0);
    CHECK(M.tube_volume(t0) == 0.0);
    CHECK(std::fabs(M.tube_boundary_area(t0) - 2.0 * 64.0 * M_PI) < 1e-9);
    CHECK_FALSE(t0.clipped_at_boundary);

    const Tube t = M.tube(64.0 * M_PI, 1.0);
    const double sc = M.arclength(4.0);
    CHECK(std::fabs(M.arclength(t.r_hi) - sc - 1.0) < 1e-9);
    CHECK(std::fabs(sc - M.arclength(t.r_lo) - 1.0) < 1e-9);
    CHECK_FALSE(t.clipped_at_boundary);

    // volume against the oracle
    const double v = M.tube_volume(t);
    CHECK(std::fabs(v - oracles::tube_volume(M, t)) <= 1e-6 * v);

    // diameter bound never exceeds 2D + pi r_hi
    CHECK(M.tube_diameter_bound(t) <= 2.0 * 1.0 + M_PI * t.r_hi + 1e-12);

    // clipped tube: centre close to the boundary
    const Tube tc = M.tube(M.area_of_sphere(2.05), 3.0);
    CHECK(tc.clipped_at_boundary);
    CHECK(tc.r_lo == 2.0);
    const double vc = M.tube_volume(tc);
    CHECK(std::fabs(vc - oracles::tube_volume(M, tc)) <= 1e-6 * vc);

    CHECK_THROWS_AS(M.tube(64.0 * M_PI, 1e9), OutOfDomain);
}

TEST_CASE("sharp turn curvature exceeds its closed-form floor") {
    for (double slope : {10.0, 250.0}) {
        const auto prof = sharp_turn_profile(3, 1.0, 1.08, slope);
        const Manifold M(prof);
        const ProfilePiece& j = prof.pieces()[1];
        double supR = 0.0;
        for (int i = 1; i < 2000; ++i) {
            const double r = j.r_lo + (j.r_hi - j.r_lo) * i / 2000.0;
            supR = std::max(supR, M.scalar_curvature(r));
        }
        // m_H' reaches the requested slope somewhere in (2 r0, 3 r0), so
        // R = 2(n-1) m_H'/r^{n-1} is at least the worst-case-radius value
        const double floor_R =
            2.0 * (M.n() - 1) * slope / ipow(3.0 * M.r0(), M.n() - 1);
        CHECK(supR >= floor_R);
    }
}

TEST_CASE("domain errors") {
    // supercritical constant stretch (validation bypassed): the radicand goes
    // negative beyond rounding and the grid build surfaces NumericalDomain
    const double r0 = 2.0;
    const double v = 0.5 * 3.0 * (1.0 + 1e-10); // just above criticality at r = 3
    AdmissibleProfile super(3, r0,
                            {ProfilePiece::constant(1.0, r0, 3.0),
                             ProfilePiece::constant(v, 3.0, kInf)});
    CHECK_THROWS_AS(Manifold(super, BuildOptions{20.0, 1e-10, 64}), NumericalDomain);

    // unbounded tail: a critical-slope piece running to infinity
    AdmissibleProfile unbounded(
        3, 2.0,
        {ProfilePiece::constant(1.0, 2.0, 4.0),
         ProfilePiece::fraction_of_max(0.5, 4.0, kInf)});
    CHECK(validate_profile(unbounded).valid);
    const Manifold U(unbounded, BuildOptions{40.0, 1e-10, 128});
    CHECK_THROWS_AS(U.adm_mass(), UnboundedTail);
}

TEST_CASE("embedding csv export") {
    const Manifold M = schw31();
    std::ostringstream os;
    M.write_embedding_csv(os);
    std::istringstream is(os.str());
    std::string header;
    std::getline(is, header);
    CHECK(header == "r,s,z,drds,m_hawking,scalar_curvature");
    std::size_t rows = 0;
    std::string line;
    double first_r = -1, first_s = -1, first_z = -1, first_drds = -1;
    while (std::getline(is, line)) {
        if (rows == 0)
            std::sscanf(line.c_str(), "%lf,%lf,%lf,%lf", &first_r, &first_s, &first_z,
                        &first_drds);
        ++rows;
    }
    CHECK(rows == M.grid_r().size());
    CHECK(first_r == 2.0);
    CHECK(first_s == 0.0);
    CHECK(first_z == 0.0);
    CHECK(first_drds == 0.0);
}
