#pragma once

#include <algorithm>
#include <cmath>

#include "rotsym/comparison.hpp"
#include "rotsym/errors.hpp"
#include "rotsym/geometry.hpp"

namespace rotsym {

// Intrinsic-flat upper bound from a Lipschitz bound:
//   d_F <= ((n+1)/2) lambda^{n-1} (lambda - 1) max{D1, D2} (V1 + A1),
// with lambda = exp(d_lip).
inline double ifd_bound_sorwen(int n, double d_lip, double D1, double D2, double V1,
                               double A1) {
    const double lambda = std::exp(d_lip);
    return 0.5 * (n + 1) * ipow(lambda, n - 1) * (lambda - 1.0) * std::max(D1, D2) *
           (V1 + A1);
}

// Filling-based bound: for metric distortion within (1+eps)^{+-2}, any slab
// thickness t2 - t1 strictly above
//   arccos((1+eps)^{-1})/pi * max{D1, D2}
// admits metric isometric embeddings of both spaces, giving
//   d_F <= 2 |t2 - t1| (V1 + V2 + A1 + A2).
// Returns the infimal gap; the reported bound inflates it by 1e-6 to respect
// the strict inequality.
struct LakzianBound {
    double t_gap = 0.0;
    double bound = 0.0;
};

inline LakzianBound ifd_bound_lakzian(double eps, double D1, double D2, double V1,
                                      double V2, double A1, double A2) {
    if (eps < 0.0) throw OutOfDomain("ifd_bound_lakzian: eps must be >= 0");
    LakzianBound out;
    out.t_gap = std::acos(1.0 / (1.0 + eps)) / M_PI * std::max(D1, D2);
    out.bound = 2.0 * out.t_gap * (1.0 + 1e-6) * (V1 + V2 + A1 + A2);
    return out;
}

// Per-slice lower-bound warp factor of the explicit filling metric,
// cos^2((t - t_i) pi / D_i). Used for plots of the filling, not for bounds.
inline double filling_metric_lower(double eps, double t, double t_i, double D_i) {
    if (eps < 0.0) throw OutOfDomain("filling_metric_lower: eps must be >= 0");
    if (!(D_i > 0.0)) throw OutOfDomain("filling_metric_lower: D_i must be positive");
    return sqr(std::cos((t - t_i) * M_PI / D_i));
}

// Geometric inputs of the tube bounds. Index convention: D1/V2/A2 belong to
// the tube in M, D2/V1/A1 to the tube in the model space M_Sch(m0, L).
struct TubeBoundInputs {
    double D1 = 0.0;
    double D2 = 0.0;
    double V1 = 0.0;
    double V2 = 0.0;
    double A1 = 0.0;
    double A2 = 0.0;
    double scale_in = 1.0;  // radial rescale factor inside Sigma_1
    double scale_out = 1.0; // and outside
    double tube_lip = 0.0;  // log h_delta + |log scale_in| + |log scale_out|
    double lambda = 1.0;    // exp(tube_lip)
    double eps = 0.0;       // lambda - 1
    double t_gap = 0.0;
};

struct DistanceBounds {
    double lip_bound = 0.0; // log h_delta
    double ifd_sorwen = 0.0;
    double ifd_lakzian = 0.0;
    TubeBoundInputs inputs;
    double tube_max_ratio_sampled = 1.0;
    bool tube_distortion_bounded = false;
};

// Distance bounds between T_D(Sigma_1) in M and T_D(Sigma_1-bar) in
// M_Sch(m0, L), where Sigma_1 is the symmetric sphere of area A1.
//
// phi maps Sigma_1 to Sigma_1-bar but not tube to tube; the correction is a
// radial rescaling by a constant factor on each side of Sigma_1-bar, and each
// factor is the ratio of the corresponding tube extents in M and in the
// model. The Lipschitz input for the bounds is log h_delta inflated by those
// two margins.
inline DistanceBounds tube_comparison(const ComparisonSetup& C, double A1, double D) {
    if (!(A1 > C.A_delta()))
        throw TubeEscapesRegion("tube centre must lie in the sphere-preserving region: "
                                "A1 must exceed A_delta");
    if (!(D > 0.0)) throw OutOfDomain("tube_comparison: tube radius must be positive");

    const Manifold& M = C.manifold();
    const AppendedSchwarzschild& model = C.model();
    const int n = M.n();
    const double r1 = M.radius_of_area(A1);
    const double center_diam = 2.0 * D + M_PI * r1;

    const Tube tm = M.tube(A1, D);
    const TubeInAppended ta = model.tube(A1, D);

    DistanceBounds out;
    // both tubes also admit the through-centre path bound 2D + pi r1
    out.inputs.D1 = std::min(M.tube_diameter_bound(tm), center_diam);
    out.inputs.D2 = std::min(ta.diameter_bound, center_diam);
    out.inputs.V1 = ta.volume;
    out.inputs.A1 = ta.boundary_area;
    out.inputs.V2 = M.tube_volume(tm);
    out.inputs.A2 = M.tube_boundary_area(tm);

    // outer rescale: the outer edge of the M-tube projects vertically
    const double E_out = model.s_sch(tm.r_hi) - model.s_sch(r1);
    out.inputs.scale_out = D / E_out;

    // inner rescale: image of the inner edge (or of dM when clipped)
    const double sigma_1 = model.sigma_of_r(r1);
    double ext_m, ext_model;
    if (tm.clipped_at_boundary) {
        ext_m = M.arclength(r1);
        ext_model = sigma_1;
    } else {
        ext_m = D;
        if (tm.r_lo >= C.r_delta()) {
            ext_model = model.s_sch(r1) - model.s_sch(tm.r_lo);
        } else {
            const double z = C.z_manifold(tm.r_lo);
            ext_model = sigma_1 - model.sigma_of_z(z);
        }
    }
    out.inputs.scale_in = ext_m / ext_model;

    out.lip_bound = C.lip_bound();
    out.inputs.tube_lip = out.lip_bound + std::fabs(std::log(out.inputs.scale_in)) +
                          std::fabs(std::log(out.inputs.scale_out));
    out.inputs.lambda = std::exp(out.inputs.tube_lip);
    out.inputs.eps = out.inputs.lambda - 1.0;

    out.ifd_sorwen = ifd_bound_sorwen(n, out.inputs.tube_lip, out.inputs.D1,
                                      out.inputs.D2, out.inputs.V1, out.inputs.A1);
    const LakzianBound lb =
        ifd_bound_lakzian(out.inputs.eps, out.inputs.D1, out.inputs.D2, out.inputs.V1,
                          out.inputs.V2, out.inputs.A1, out.inputs.A2);
    out.inputs.t_gap = lb.t_gap;
    out.ifd_lakzian = lb.bound;

    // per-run check: the inflated input bounds the sampled tube distortion
    double worst = 1.0;
    const int samples = 256;
    for (int k = 0; k < samples; ++k) {
        const double r =
            tm.r_lo * std::pow(tm.r_hi / tm.r_lo, static_cast<double>(k) / (samples - 1));
        for (Direction dir : {Direction::Radial, Direction::Tangential}) {
            double q;
            try {
                q = C.distortion_ratio(r, dir);
            } catch (const SingularAtHorizon&) {
                continue;
            }
            worst = std::max(worst, std::max(q, 1.0 / q));
        }
    }
    out.tube_max_ratio_sampled = worst;
    out.tube_distortion_bounded = worst <= out.inputs.lambda + 1e-9;
    return out;
}

inline DistanceBounds tube_comparison(const Manifold& M, double A0, double A1, double D,
                                      double rdelta_exponent = 0.5) {
    if (std::fabs(A0 - M.boundary_area()) > 1e-9 * M.boundary_area())
        throw OutOfDomain("tube_comparison: A0 does not match the boundary area of M");
    ComparisonSetup C(M, rdelta_exponent);
    return tube_comparison(C, A1, D);
}

} // namespace rotsym
