// Test-only oracles, independent of the library's quadrature and curvature
// paths: composite 20-point Gauss-Legendre on uniformly doubled panels
// (versus adaptive Gauss-Kronrod 15 in the library), and a second-difference
// scalar curvature evaluated through the numerically inverted r(s).
#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <vector>

#include "rotsym/geometry.hpp"
#include "rotsym/profiles.hpp"

namespace oracles {

// 20-point Gauss-Legendre nodes/weights on [-1,1] (positive half).
inline constexpr double kGL20x[10] = {
    0.0765265211334973, 0.2277858511416451, 0.3737060887154195, 0.5108670019508271,
    0.6360536807265150, 0.7463319064601508, 0.8391169718222188, 0.9122344282513259,
    0.9639719272779138, 0.9931285991850949};
inline constexpr double kGL20w[10] = {
    0.1527533871307258, 0.1491729864726037, 0.1420961093183820, 0.1316886384491766,
    0.1181945319615184, 0.1019301198172404, 0.0832767415767048, 0.0626720483341091,
    0.0406014298003869, 0.0176140071391521};

template <class F>
double gl20_panel(F&& f, double a, double b) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    double sum = 0.0;
    for (int i = 0; i < 10; ++i) {
        const double dx = h * kGL20x[i];
        sum += kGL20w[i] * (f(c - dx) + f(c + dx));
    }
    return sum * h;
}

// Brute force: uniform panels, doubled until two successive refinements agree.
template <class F>
double integrate(F&& f, double a, double b, double tol = 1e-12) {
    if (a == b) return 0.0;
    double prev = gl20_panel(f, a, b);
    for (int K = 2; K <= (1 << 22); K *= 2) {
        double sum = 0.0;
        const double h = (b - a) / K;
        for (int k = 0; k < K; ++k) sum += gl20_panel(f, a + k * h, a + (k + 1) * h);
        if (std::fabs(sum - prev) <= tol * std::max(1.0, std::fabs(sum))) return sum;
        prev = sum;
    }
    throw std::runtime_error("oracle quadrature did not converge");
}

// Integrands near the horizon: after r = r0 + u^2 the radicand is
// u^2 * Q(r)/r^p with Q = pow_diff_sum(r, r0, p) (admissibility forces
// m_H = r0^p/2 on the first piece), so the transformed integrands go through
// Q directly. The endpoint algebra is shared with the library; the
// quadrature rule and the panelization are not.
enum class Kind { InvDrds, Dzdr, Volume };

inline double transformed_at(const rotsym::Manifold& M, double u, Kind kind) {
    const double r0 = M.r0();
    const int n = M.n();
    const double r = r0 + u * u;
    const double Q = rotsym::pow_diff_sum(r, r0, n - 2);
    switch (kind) {
        case Kind::InvDrds:
            return 2.0 * std::sqrt(rotsym::ipow(r, n - 2) / Q);
        case Kind::Dzdr:
            return 2.0 * std::sqrt(rotsym::ipow(r0, n - 2) / Q);
        case Kind::Volume:
            return 2.0 * rotsym::ipow(r, n - 1) * std::sqrt(rotsym::ipow(r, n - 2) / Q);
    }
    return 0.0;
}

inline double plain_at(const rotsym::Manifold& M, double r, Kind kind) {
    switch (kind) {
        case Kind::InvDrds:
            return 1.0 / M.drds(r);
        case Kind::Dzdr:
            return M.dzdr(r);
        case Kind::Volume:
            return rotsym::ipow(r, M.n() - 1) / M.drds(r);
    }
    return 0.0;
}

inline double radial_integral(const rotsym::Manifold& M, double a, double b, Kind kind,
                              double tol) {
    if (b <= a) return 0.0;
    std::vector<double> cuts{a};
    for (double c : M.profile().breakpoints())
        if (c > a && c < b) cuts.push_back(c);
    cuts.push_back(b);
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        if (cuts[i] == M.r0()) {
            const double U = std::sqrt(cuts[i + 1] - M.r0());
            total += integrate([&](double u) { return transformed_at(M, u, kind); },
                               0.0, U, tol);
        } else {
            total += integrate([&](double rr) { return plain_at(M, rr, kind); },
                               cuts[i], cuts[i + 1], tol);
        }
    }
    return total;
}

inline double arclength(const rotsym::Manifold& M, double r, double tol = 1e-12) {
    return radial_integral(M, M.r0(), r, Kind::InvDrds, tol);
}

inline double height(const rotsym::Manifold& M, double r, double tol = 1e-12) {
    return radial_integral(M, M.r0(), r, Kind::Dzdr, tol);
}

inline double tube_volume(const rotsym::Manifold& M, const rotsym::Tube& t,
                          double tol = 1e-12) {
    return rotsym::unit_sphere_area(M.n()) *
           radial_integral(M, t.r_lo, t.r_hi, Kind::Volume, tol);
}

// Scalar curvature through the geodesic-coordinate formula
//   R = (n-1)/r^2 ( (n-2)(1 - (dr/ds)^2) - 2 r d2r/ds2 ),
// with r(s) reconstructed by inverting arclength and differenced centrally.
inline double scalar_curvature_fd(const rotsym::Manifold& M, double r, double h_s) {
    const double s0 = M.arclength(r);
    const double rp = M.r_at_arclength(s0 + h_s);
    const double rm = M.r_at_arclength(s0 - h_s);
    const double drds = (rp - rm) / (2.0 * h_s);
    const double d2rds2 = (rp - 2.0 * r + rm) / (h_s * h_s);
    const int n = M.n();
    return (n - 1) / (r * r) * ((n - 2) * (1.0 - drds * drds) - 2.0 * r * d2rds2);
}

// Random admissible profile: a staircase of constant and critical-slope
// pieces rising from r0^{n-2}/2 to exactly (1+delta) r0^{n-2}/2.
inline rotsym::AdmissibleProfile random_admissible_profile(std::mt19937_64& rng, int n,
                                                           double delta,
                                                           int max_steps = 4) {
    using namespace rotsym;
    auto u01 = [&] { return canonical_u01(rng()); };
    const int p = n - 2;
    const double r0 = 0.5 + 2.0 * u01();
    const double m0 = 0.5 * ipow(r0, p);
    const double m_tail = m0 * (1.0 + delta);

    std::vector<ProfilePiece> pieces;
    double r_cur = r0;
    double v_cur = m0;
    const int steps = 1 + static_cast<int>(u01() * max_steps);
    for (int k = 0; k < steps; ++k) {
        // constant stretch
        const double r_next = r_cur * (1.0 + 0.05 + 0.8 * u01());
        pieces.push_back(ProfilePiece::constant(v_cur, r_cur, r_next));
        r_cur = r_next;
        if (v_cur >= m_tail) break;
        // critical-slope stretch; epsilon forced by continuity
        const double eps = 1.0 - 2.0 * v_cur / ipow(r_cur, p);
        if (!(eps > 1e-12 && eps < 1.0)) break;
        // rise to an intermediate target, or all the way to the tail mass
        const bool last = (k + 1 >= steps) || u01() < 0.4;
        const double v_to = last ? m_tail : v_cur + (m_tail - v_cur) * (0.3 + 0.5 * u01());
        const double r_to = std::pow(2.0 * v_to / (1.0 - eps), 1.0 / p);
        pieces.push_back(ProfilePiece::fraction_of_max(eps, r_cur, r_to));
        r_cur = r_to;
        v_cur = v_to;
        if (last) break;
    }
    pieces.push_back(ProfilePiece::constant(v_cur, r_cur, kInf));
    return AdmissibleProfile(n, r0, std::move(pieces));
}

// A profile with a deliberately decreasing mollified stretch (inadmissible;
// construction bypasses validation on purpose).
inline rotsym::AdmissibleProfile random_decreasing_profile(std::mt19937_64& rng, int n) {
    using namespace rotsym;
    auto u01 = [&] { return canonical_u01(rng()); };
    const int p = n - 2;
    const double r0 = 0.5 + 2.0 * u01();
    const double m0 = 0.5 * ipow(r0, p);
    const double hi = m0 * (1.3 + 0.5 * u01());
    const double lo = m0 * 1.05;
    const double a = r0 * (2.0 + u01());
    const double w = r0 * (0.2 + 0.3 * u01());
    // rise to hi, then mollified drop back to lo
    const double eps = 1.0 - 2.0 * m0 / ipow(r0 * 1.5, p);
    const double r_rise_end = std::pow(2.0 * hi / (1.0 - eps), 1.0 / p);
    std::vector<ProfilePiece> pieces{
        ProfilePiece::constant(m0, r0, r0 * 1.5),
        ProfilePiece::fraction_of_max(eps, r0 * 1.5, r_rise_end)};
    const double drop_lo = std::max(a, r_rise_end * 1.05);
    pieces.push_back(ProfilePiece::constant(hi, r_rise_end, drop_lo));
    pieces.push_back(ProfilePiece::mollified_join(drop_lo, drop_lo + w));
    pieces.push_back(ProfilePiece::constant(lo, drop_lo + w, kInf));
    return AdmissibleProfile(n, r0, std::move(pieces));
}

} // namespace oracles
