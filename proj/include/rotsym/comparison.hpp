#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <string>
#include <vector>

#include "rotsym/errors.hpp"
#include "rotsym/geometry.hpp"
#include "rotsym/math_util.hpp"
#include "rotsym/schwarzschild.hpp"

namespace rotsym {

// Distortion bound of the comparison map:
//   h_delta = max{ (1+delta^e)^{2/(n-2)}, (1+delta^e)(1+delta), (1-delta^{1-e})^{-1} }
// with e the r_delta exponent (1/2 by default; other values in (0,1) work too
// and are exposed because the choice is arbitrary).
inline double h_delta(double delta, int n, double exponent = 0.5) {
    if (!(delta >= 0.0 && delta < 1.0))
        throw DeltaOutOfRange("h_delta requires 0 <= delta < 1");
    if (!(exponent > 0.0 && exponent < 1.0))
        throw OutOfDomain("h_delta: r_delta exponent must lie in (0,1)");
    const double de = std::pow(delta, exponent);
    const double dc = std::pow(delta, 1.0 - exponent);
    return std::max({std::pow(1.0 + de, 2.0 / (n - 2)), (1.0 + de) * (1.0 + delta),
                     1.0 / (1.0 - dc)});
}

enum class Direction { Radial, Tangential };

// Image point in M_Sch(m0, L).
struct ModelPoint {
    double r = 0.0;
    double z = 0.0;
    bool on_cylinder = false;
};

struct DistortionSample {
    std::string region;    // "outer" | "inner"
    double coord = 0.0;    // r on M
    std::string direction; // "radial" | "tangential" | "mixed"
    double ratio = 1.0;
};

struct DistortionReport {
    double delta = 0.0;
    double h_delta = 1.0;
    double lip_bound = 0.0; // log h_delta, an upper bound for d_L
    double depth = 0.0;
    double max_ratio = 1.0;
    double min_ratio = 1.0;
    bool certified = false;
    // every mixed-direction ratio fell between the radial and tangential
    // ratios at its point (block-diagonal pullback)
    bool mixed_within_bounds = true;
    DistortionSample worst_sample;
    std::vector<DistortionSample> extremes; // per region x direction max/min
    long samples_evaluated = 0;
};

struct CertifyOptions {
    int points_per_region = 4096;
    int mixed_per_point = 64;
    std::uint64_t seed = 0;
};

// Comparison data for a manifold against its model space M_Sch(m0, L):
//   m0 = |dM|-normalised mass, delta the Penrose excess, r1^{n-2}=(1+delta)r0^{n-2},
//   r_delta = (1+delta^e)^{1/(n-2)} r0, and L the depth.
// The manifold embedding is re-anchored so that z_M(r_delta) = z_Sch(r_delta);
// the depth is then L = -z_M(r0), nonnegative for admissible profiles.
class ComparisonSetup {
  public:
    explicit ComparisonSetup(const Manifold& M, double rdelta_exponent = 0.5)
        : M_(&M),
          exponent_(rdelta_exponent),
          d_(compute(M, rdelta_exponent)),
          model_(M.n(), d_.m0, d_.depth, M.quad_tol(), M.r_max()) {}

    const Manifold& manifold() const { return *M_; }
    const AppendedSchwarzschild& model() const { return model_; }

    double delta() const { return d_.delta; }
    double m0() const { return d_.m0; }
    double r0() const { return d_.r0; }
    double r1() const { return d_.r1; }
    double r_delta() const { return d_.r_delta; }
    double A_delta() const { return d_.A_delta; }
    double z_anchor() const { return d_.z_anchor; }
    double rdelta_exponent() const { return exponent_; }

    // The depth L >= 0 (clamped within 1e-9 of zero).
    double depth() const { return d_.depth; }

    double h() const { return h_delta(d_.delta, M_->n(), exponent_); }
    double lip_bound() const { return std::log(h()); }

    // Embedding height of M with the comparison anchor applied.
    double z_manifold(double r) const { return M_->height(r) + d_.z_anchor; }

    // The map phi: vertical projection (same r) outside r_delta, horizontal
    // projection (same z) inside.
    ModelPoint phi(double r) const {
        const double r_cl = clamp_radius(r);
        if (r_cl >= d_.r_delta) return {r_cl, model_.z_sch(r_cl), false};
        const double z = z_manifold(r_cl);
        if (z >= 0.0) return {model_.r_sch(z), z, false};
        return {model_.horizon_radius(), z, true};
    }

    double phi_inverse(const ModelPoint& q) const {
        if (!q.on_cylinder && q.r >= d_.r_delta) return q.r;
        return M_->r_at_height(q.z - d_.z_anchor);
    }

    // Pointwise ratio g(v,v) / g_SchL(phi_* v, phi_* v) for radial or
    // sphere-tangent v at the point with areal radius r.
    double distortion_ratio(double r, Direction dir) const {
        const double r_cl = clamp_radius(r);
        if (r_cl >= d_.r_delta) {
            if (dir == Direction::Tangential) return 1.0; // phi preserves r and the sphere
            const int p = M_->n() - 2;
            const double num =
                (r_cl - d_.r0) * pow_diff_sum(r_cl, d_.r0, p) / ipow(r_cl, p);
            const double den = M_->radicand(r_cl);
            if (den <= 0.0)
                throw SingularAtHorizon("radial distortion undefined at the horizon");
            return num / den;
        }
        const double z = z_manifold(r_cl);
        const double r_img = z >= 0.0 ? model_.r_sch(z) : model_.horizon_radius();
        if (dir == Direction::Tangential) return sqr(r_cl / r_img);
        const int p = M_->n() - 2;
        const double g_m = ipow(r_cl, p) / (2.0 * M_->profile().value(r_cl)); // (ds/dz)^2
        const double g_img = z >= 0.0 ? ipow(r_img, p) / (2.0 * d_.m0) : 1.0;
        return g_m / g_img;
    }

    // Ratio for v = a e_radial + b e_tangential (unit frames in M). The
    // pullback is block diagonal, so this always lies between the radial and
    // tangential ratios.
    static double mixed_from(double q_radial, double q_tangential, double a, double b) {
        const double a2 = a * a, b2 = b * b;
        return (a2 + b2) / (a2 / q_radial + b2 / q_tangential);
    }

    double distortion_ratio_mixed(double r, double a, double b) const {
        return mixed_from(distortion_ratio(r, Direction::Radial),
                          distortion_ratio(r, Direction::Tangential), a, b);
    }

    // Sample the distortion over both regions and all direction classes and
    // compare against the h_delta bound.
    DistortionReport certify(CertifyOptions opt = {}) const {
        DistortionReport rep;
        rep.delta = d_.delta;
        rep.h_delta = h();
        rep.lip_bound = std::log(rep.h_delta);
        rep.depth = d_.depth;

        Tracker tr;
        std::mt19937_64 rng(opt.seed);
        const int n_mixed = std::max(0, opt.mixed_per_point);

        bool mixed_ok = true;
        auto visit = [&](const char* region, double r) {
            const double qr = distortion_ratio(r, Direction::Radial);
            const double qt = distortion_ratio(r, Direction::Tangential);
            tr.record(region, r, "radial", qr);
            tr.record(region, r, "tangential", qt);
            const double lo = std::min(qr, qt), hi = std::max(qr, qt);
            for (int j = 0; j < n_mixed; ++j) {
                const double theta = canonical_u01(rng()) * (M_PI / 2.0);
                const double q = mixed_from(qr, qt, std::cos(theta), std::sin(theta));
                tr.record(region, r, "mixed", q);
                if (q < lo - 1e-12 || q > hi + 1e-12) mixed_ok = false;
            }
        };

        // outer region: geometric samples on [r_delta, r_max]
        const double outer_lo =
            d_.r_delta > d_.r0 * (1.0 + 1e-12) ? d_.r_delta : d_.r0 * (1.0 + 1e-9);
        const double outer_hi = M_->r_max();
        const int N = std::max(2, opt.points_per_region);
        for (int k = 0; k < N; ++k) {
            const double r =
                outer_lo * std::pow(outer_hi / outer_lo, static_cast<double>(k) / (N - 1));
            visit("outer", r);
        }

        // inner region: geometric in r plus uniform in z, to cover wells that
        // are short in r but long in z
        if (d_.r_delta > d_.r0 * (1.0 + 1e-12)) {
            const int Nr = std::max(2, N / 2), Nz = std::max(2, N - N / 2);
            for (int k = 0; k < Nr; ++k) {
                const double r = d_.r0 * std::pow(d_.r_delta / d_.r0,
                                                  static_cast<double>(k) / (Nr - 1));
                visit("inner", r);
            }
            const double z_lo = 0.0; // internal anchor: height(r0) = 0
            const double z_hi = M_->height(d_.r_delta);
            for (int k = 0; k < Nz; ++k) {
                const double z = z_lo + (z_hi - z_lo) * static_cast<double>(k) / (Nz - 1);
                visit("inner", M_->r_at_height(z));
            }
        }
        // delta = 0 collapses the inner region to the horizon sphere, where
        // the radial ratio is the singular 0/0 limit; the outer samples
        // already approach it.

        rep.max_ratio = tr.max_ratio;
        rep.min_ratio = tr.min_ratio;
        rep.worst_sample = tr.worst;
        rep.extremes = tr.extremes();
        rep.samples_evaluated = tr.count;
        rep.mixed_within_bounds = mixed_ok;
        rep.certified = rep.max_ratio <= rep.h_delta + 1e-9 &&
                        rep.min_ratio >= 1.0 / rep.h_delta - 1e-9;
        return rep;
    }

  private:
    struct SetupData {
        double delta, m0, r0, r1, r_delta, A_delta, z_anchor, depth;
    };

    static SetupData compute(const Manifold& M, double exponent) {
        if (!(exponent > 0.0 && exponent < 1.0))
            throw OutOfDomain("ComparisonSetup: r_delta exponent must lie in (0,1)");
        SetupData d{};
        const int n = M.n();
        const int p = n - 2;
        d.r0 = M.r0();
        d.m0 = 0.5 * ipow(d.r0, p);
        const double m_adm = M.adm_mass();
        d.delta = m_adm / d.m0 - 1.0;
        if (d.delta < -1e-12)
            throw DeltaOutOfRange("ADM mass below the boundary mass: Penrose violation");
        d.delta = std::max(d.delta, 0.0);
        if (d.delta >= 1.0)
            throw DeltaOutOfRange("comparison requires delta < 1");
        d.r1 = d.r0 * std::pow(1.0 + d.delta, 1.0 / p);
        d.r_delta = d.r0 * std::pow(1.0 + std::pow(d.delta, exponent), 1.0 / p);
        d.A_delta = unit_sphere_area(n) * ipow(d.r_delta, n - 1);

        const double z_m = M.height(d.r_delta);
        AppendedSchwarzschild pure(n, d.m0, 0.0, M.quad_tol(),
                                   std::max(M.r_max(), 4.0 * d.r0));
        const double z_s = pure.z_sch(d.r_delta);
        const double raw = z_m - z_s; // >= 0 for admissible profiles
        if (raw < -1e-9)
            throw NumericalDomain("negative depth beyond tolerance; inadmissible profile?");
        d.depth = std::max(0.0, raw);
        d.z_anchor = -raw;
        return d;
    }

    double clamp_radius(double r) const {
        if (r < d_.r0) {
            if (r >= d_.r0 * (1.0 - 1e-12)) return d_.r0;
            throw OutOfDomain("point below the boundary sphere");
        }
        if (r > M_->r_max() * (1.0 + 1e-12))
            throw OutOfDomain("point beyond the truncation radius");
        return std::min(r, M_->r_max());
    }

    struct Tracker {
        double max_ratio = -1.0;
        double min_ratio = std::numeric_limits<double>::infinity();
        DistortionSample worst;
        double worst_dev = -1.0;
        long count = 0;
        // extreme samples per region x direction
        struct Slot {
            bool seen = false;
            DistortionSample lo, hi;
        } slots[6];

        static int slot_index(const char* region, const char* dir) {
            const int r = region[0] == 'o' ? 0 : 1;
            const int d = dir[0] == 'r' ? 0 : (dir[0] == 't' ? 1 : 2);
            return r * 3 + d;
        }

        void record(const char* region, double coord, const char* dir, double ratio) {
            ++count;
            max_ratio = std::max(max_ratio, ratio);
            min_ratio = std::min(min_ratio, ratio);
            const double dev = std::max(ratio, 1.0 / ratio);
            DistortionSample s{region, coord, dir, ratio};
            if (dev > worst_dev) {
                worst_dev = dev;
                worst = s;
            }
            Slot& sl = slots[slot_index(region, dir)];
            if (!sl.seen) {
                sl.seen = true;
                sl.lo = sl.hi = s;
            } else {
                if (ratio < sl.lo.ratio) sl.lo = s;
                if (ratio > sl.hi.ratio) sl.hi = s;
            }
        }

        std::vector<DistortionSample> extremes() const {
            std::vector<DistortionSample> out;
            for (const Slot& sl : slots) {
                if (!sl.seen) continue;
                out.push_back(sl.lo);
                out.push_back(sl.hi);
            }
            return out;
        }
    };

    const Manifold* M_;
    double exponent_;
    SetupData d_;
    AppendedSchwarzschild model_;
};

inline ComparisonSetup setup(const Manifold& M, double rdelta_exponent = 0.5) {
    return ComparisonSetup(M, rdelta_exponent);
}

inline double depth(const ComparisonSetup& c) { return c.depth(); }

} // namespace rotsym
