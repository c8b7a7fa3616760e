#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <string>
#include <vector>

#include "rotsym/errors.hpp"
#include "rotsym/math_util.hpp"
#include "rotsym/profiles.hpp"
#include "rotsym/quadrature.hpp"
#include "rotsym/rootfind.hpp"

namespace rotsym {

struct BuildOptions {
    double r_max = 0.0;     // 0 = auto: max(10 r1, 10 r_delta, 1.25 * last breakpoint)
    double quad_tol = 1e-10;
    int grid_size = 2048;
};

// Tubular neighbourhood of a symmetric sphere, stored as an r-interval.
struct Tube {
    double center_area = 0.0;
    double radius = 0.0; // D
    double r_lo = 0.0;
    double r_hi = 0.0;
    bool clipped_at_boundary = false;
};

// Rotationally symmetric manifold generated by an admissible Hawking mass
// profile. The metric data comes from inverting
//   (dr/ds)^2 = 1 - 2 m_H(r) / r^{n-2},
// with s the distance from the boundary. Coordinates s(r) and z(r) are
// cached on a grid and extended by local quadrature; both integrands behave
// like (r - r0)^{-1/2} at the horizon, which is removed exactly by the
// substitution r = r0 + u^2.
//
// Immutable after construction; concurrent reads are safe.
class Manifold {
  public:
    explicit Manifold(AdmissibleProfile profile, BuildOptions opt = {})
        : profile_(std::move(profile)),
          n_(profile_.n()),
          p_(profile_.n() - 2),
          r0_(profile_.r0()),
          quad_tol_(opt.quad_tol) {
        // The admissible class forces m_H(r0) = r0^{n-2}/2 exactly; when the
        // stored first piece agrees to rounding, treat it as exactly critical
        // so the horizon radicand factors as (r - r0) * Q(r) with no
        // cancellation and dr/ds vanishes exactly at r0.
        two_m_horizon_ = ipow(r0_, p_);
        const ProfilePiece& first = profile_.pieces().front();
        horizon_critical_ = first.kind == PieceKind::Constant &&
                            std::fabs(2.0 * first.value - two_m_horizon_) <=
                                1e-9 * two_m_horizon_;

        // Radicand numerators r^p - 2 m_H(r) factor through the criticality
        // radius of each constant piece: r^p - 2v = (r - r_c) Q(r, r_c) + E
        // with r_c = (2v)^{1/p} and E its rounding defect. This keeps the
        // near-critical integrands smooth at machine precision, which the
        // naive 1 - 2 m_H/r^p form does not.
        const auto& pieces = profile_.pieces();
        crit_r_.assign(pieces.size(), 0.0);
        crit_e_.assign(pieces.size(), 0.0);
        for (std::size_t i = 0; i < pieces.size(); ++i) {
            if (pieces[i].kind != PieceKind::Constant) continue;
            if (i == 0 && horizon_critical_) {
                crit_r_[0] = r0_;
                crit_e_[0] = 0.0;
            } else {
                crit_r_[i] = std::pow(2.0 * pieces[i].value, 1.0 / p_);
                crit_e_[i] = ipow(crit_r_[i], p_) - 2.0 * pieces[i].value;
            }
        }

        r_max_ = opt.r_max > 0.0 ? opt.r_max : default_r_max();
        if (!(r_max_ > r0_)) throw OutOfDomain("Manifold: r_max must exceed r0");
        build_grid(opt.grid_size);
    }

    int n() const { return n_; }
    double r0() const { return r0_; }
    double r_max() const { return r_max_; }
    double quad_tol() const { return quad_tol_; }
    const AdmissibleProfile& profile() const { return profile_; }
    const std::vector<double>& grid_r() const { return grid_r_; }
    const std::vector<double>& grid_s() const { return grid_s_; }
    const std::vector<double>& grid_z() const { return grid_z_; }

    double boundary_area() const { return unit_sphere_area(n_) * ipow(r0_, n_ - 1); }

    // N(r) = r^{n-2} - 2 m_H(r), evaluated cancellation-free per piece kind.
    double radicand_num(double r) const {
        if (r < r0_) throw OutOfDomain("radicand: r below horizon radius");
        const std::size_t k = profile_.piece_index(r);
        const ProfilePiece& pc = profile_.pieces()[k];
        switch (pc.kind) {
            case PieceKind::Constant:
                return (r - crit_r_[k]) * pow_diff_sum(r, crit_r_[k], p_) + crit_e_[k];
            case PieceKind::FractionOfMax:
                return pc.epsilon * ipow(r, p_);
            case PieceKind::MollifiedJoin:
                return ipow(r, p_) - 2.0 * profile_.value(r);
        }
        return 0.0;
    }

    // 1 - 2 m_H(r)/r^{n-2}.
    double radicand(double r) const {
        double rad = radicand_num(r) / ipow(r, p_);
        if (rad < 0.0) {
            if (rad < -1e-14)
                throw NumericalDomain("sub-criticality violated beyond rounding at r = " +
                                      std::to_string(r));
            rad = 0.0;
        }
        return rad;
    }

    // dr/ds = sqrt(1 - 2 m_H/r^{n-2}); 0 exactly at r0, in (0,1) beyond.
    double drds(double r) const { return std::sqrt(radicand(r)); }

    // dz/dr = sqrt( (2 m_H/r^{n-2}) / (1 - 2 m_H/r^{n-2}) ); diverges at r0.
    double dzdr(double r) const {
        if (r == r0_) throw SingularAtHorizon("dz/dr diverges at the horizon");
        const double num = radicand_num(r);
        if (num <= 0.0) throw NumericalDomain("dz/dr: vanishing radicand off the horizon");
        return std::sqrt(2.0 * profile_.value(r) / num);
    }

    // s(r): distance from the boundary to the sphere of areal radius r.
    double arclength(double r) const { return lookup(grid_s_, r, Integrand::InvDrds); }

    // z(r): embedding height, anchored internally at z(r0) = 0.
    double height(double r) const { return lookup(grid_z_, r, Integrand::Dzdr); }

    // R(r) = 2 (n-1) m_H'(r) / r^{n-1}.
    double scalar_curvature(double r) const {
        return 2.0 * (n_ - 1) * profile_.slope(r) / ipow(r, n_ - 1);
    }
    double scalar_curvature(double r, Side side) const {
        return 2.0 * (n_ - 1) * profile_.slope(r, side) / ipow(r, n_ - 1);
    }

    double adm_mass() const {
        const auto t = profile_.tail_mass();
        if (!t) throw UnboundedTail("profile declares no finite tail mass");
        return *t;
    }

    double area_of_sphere(double r) const {
        if (r < r0_ * (1.0 - 1e-12)) throw OutOfDomain("area_of_sphere: r below r0");
        return unit_sphere_area(n_) * ipow(r, n_ - 1);
    }

    double radius_of_area(double area) const {
        if (area < boundary_area() * (1.0 - 1e-12))
            throw OutOfDomain("radius_of_area: area below the boundary area");
        return std::pow(area / unit_sphere_area(n_), 1.0 / (n_ - 1));
    }

    // Metric distance between the symmetric spheres of the given areas.
    double sphere_distance(double area_a, double area_b) const {
        return std::fabs(arclength(radius_of_area(area_a)) -
                         arclength(radius_of_area(area_b)));
    }

    // Inverse coordinate maps, bracketed on the grid then polished by
    // safeguarded Newton.
    double r_at_arclength(double s) const {
        return invert(grid_s_, s, [this](double r) { return arclength(r); },
                      [this](double r) { return 1.0 / drds(r); });
    }
    double r_at_height(double z) const {
        return invert(grid_z_, z, [this](double r) { return height(r); },
                      [this](double r) { return dzdr(r); });
    }

    Tube tube(double area, double D) const {
        if (D < 0.0) throw OutOfDomain("tube: negative radius");
        Tube t;
        t.center_area = area;
        t.radius = D;
        const double rc = radius_of_area(area);
        const double sc = arclength(rc);
        if (D == 0.0) {
            t.r_lo = t.r_hi = rc;
            return t;
        }
        if (sc + D > grid_s_.back() * (1.0 + 1e-12))
            throw OutOfDomain("tube: outer edge beyond the truncation radius r_max");
        t.r_hi = r_at_arclength(sc + D);
        if (sc <= D) {
            t.r_lo = r0_;
            t.clipped_at_boundary = true;
        } else {
            t.r_lo = r_at_arclength(sc - D);
        }
        return t;
    }

    double tube_volume(const Tube& t) const {
        return unit_sphere_area(n_) * integral_over(t.r_lo, t.r_hi, Integrand::VolumeDensity);
    }

    double tube_boundary_area(const Tube& t) const {
        return area_of_sphere(t.r_lo) + area_of_sphere(t.r_hi);
    }

    // Upper bound for the diameter: radial extent plus half a great circle of
    // the outermost sphere.
    double tube_diameter_bound(const Tube& t) const {
        return (arclength(t.r_hi) - arclength(t.r_lo)) + M_PI * t.r_hi;
    }

    // Embedding table, one row per grid point. Kinks report the right-sided
    // curvature value.
    void write_embedding_csv(std::ostream& os, double z_offset = 0.0) const {
        os << "r,s,z,drds,m_hawking,scalar_curvature\n";
        char buf[160];
        for (std::size_t i = 0; i < grid_r_.size(); ++i) {
            const double r = grid_r_[i];
            std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", r,
                          grid_s_[i], grid_z_[i] + z_offset, drds(r), profile_.value(r),
                          scalar_curvature(r, Side::Right));
            os << buf;
        }
    }

    void write_embedding_csv(const std::string& path, double z_offset = 0.0) const {
        std::ofstream out(path);
        if (!out) throw IoError("cannot write csv file: " + path);
        write_embedding_csv(out, z_offset);
    }

  private:
    enum class Integrand { InvDrds, Dzdr, VolumeDensity };

    double default_r_max() const {
        double rm = 2.0 * r0_;
        if (const auto tail = profile_.tail_mass()) {
            const double m0 = 0.5 * two_m_horizon_;
            const double delta = std::max(0.0, *tail / m0 - 1.0);
            const double r1 = r0_ * std::pow(1.0 + delta, 1.0 / p_);
            const double r_delta = r0_ * std::pow(1.0 + std::sqrt(delta), 1.0 / p_);
            rm = std::max(rm, 10.0 * std::max(r1, r_delta));
        }
        rm = std::max(rm, 1.25 * profile_.last_finite_breakpoint());
        return rm;
    }

    void build_grid(int grid_size) {
        grid_r_.clear();
        const double ratio = r_max_ / r0_;
        for (int k = 0; k < grid_size; ++k)
            grid_r_.push_back(r0_ * std::pow(ratio, static_cast<double>(k) / (grid_size - 1)));
        grid_r_.front() = r0_;
        grid_r_.back() = r_max_;
        for (double b : profile_.breakpoints())
            if (b > r0_ && b < r_max_) grid_r_.push_back(b);
        std::sort(grid_r_.begin(), grid_r_.end());
        grid_r_.erase(std::unique(grid_r_.begin(), grid_r_.end()), grid_r_.end());

        grid_s_.assign(grid_r_.size(), 0.0);
        grid_z_.assign(grid_r_.size(), 0.0);
        for (std::size_t i = 1; i < grid_r_.size(); ++i) {
            grid_s_[i] = grid_s_[i - 1] +
                         integral_over(grid_r_[i - 1], grid_r_[i], Integrand::InvDrds);
            grid_z_[i] = grid_z_[i - 1] +
                         integral_over(grid_r_[i - 1], grid_r_[i], Integrand::Dzdr);
        }
    }

    // Integral of the chosen density over [a,b], split at profile breakpoints,
    // with the horizon-singular first segment transformed by r = r0 + u^2.
    double integral_over(double a, double b, Integrand kind) const {
        if (b <= a) return 0.0;
        std::vector<double> cuts{a};
        for (double c : profile_.breakpoints())
            if (c > a && c < b) cuts.push_back(c);
        cuts.push_back(b);
        std::sort(cuts.begin(), cuts.end());

        double sum = 0.0;
        for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
            const double c0 = cuts[i], c1 = cuts[i + 1];
            if (c0 == r0_ && horizon_critical_) {
                // m_H = r0^{n-2}/2 on this segment, so
                //   r^p - 2 m_H = (r - r0) * Q(r),  Q = pow_diff_sum(r, r0, p),
                // and with r = r0 + u^2 the transformed integrands are analytic.
                const double U = std::sqrt(c1 - r0_);
                auto g = [&](double u) {
                    const double r = r0_ + u * u;
                    const double Q = pow_diff_sum(r, r0_, p_);
                    switch (kind) {
                        case Integrand::InvDrds:
                            return 2.0 * std::sqrt(ipow(r, p_) / Q);
                        case Integrand::Dzdr:
                            return 2.0 * std::sqrt(two_m_horizon_ / Q);
                        case Integrand::VolumeDensity:
                            return 2.0 * ipow(r, n_ - 1) * std::sqrt(ipow(r, p_) / Q);
                    }
                    return 0.0;
                };
                sum += integrate(g, 0.0, U, quad_tol_);
            } else {
                auto f = [&](double r) {
                    switch (kind) {
                        case Integrand::InvDrds:
                            return 1.0 / drds(r);
                        case Integrand::Dzdr:
                            return dzdr(r);
                        case Integrand::VolumeDensity:
                            return ipow(r, n_ - 1) / drds(r);
                    }
                    return 0.0;
                };
                sum += integrate(f, c0, c1, quad_tol_);
            }
        }
        return sum;
    }

    // Cached cumulative value at the nearest grid node below r plus a local
    // quadrature increment.
    double lookup(const std::vector<double>& table, double r, Integrand kind) const {
        if (r < r0_) {
            if (r >= r0_ * (1.0 - 1e-12)) r = r0_;
            else throw OutOfDomain("coordinate lookup below r0");
        }
        if (r > r_max_) {
            if (r <= r_max_ * (1.0 + 1e-12)) r = r_max_;
            else throw OutOfDomain("coordinate lookup beyond r_max");
        }
        const auto it = std::upper_bound(grid_r_.begin(), grid_r_.end(), r);
        const std::size_t k = static_cast<std::size_t>(it - grid_r_.begin()) - 1;
        if (grid_r_[k] == r) return table[k];
        return table[k] + integral_over(grid_r_[k], r, kind);
    }

    template <class F, class DF>
    double invert(const std::vector<double>& table, double target, F&& fwd, DF&& dfwd) const {
        if (target < 0.0) {
            if (target >= -1e-12 * (1.0 + std::fabs(table.back()))) return r0_;
            throw OutOfDomain("inverse coordinate lookup below the boundary value");
        }
        if (target > table.back())
            throw OutOfDomain("inverse coordinate lookup beyond r_max");
        const auto it = std::lower_bound(table.begin(), table.end(), target);
        std::size_t k = static_cast<std::size_t>(it - table.begin());
        if (k < table.size() && table[k] == target) return grid_r_[k];
        // bracket [k-1, k]
        const double lo = grid_r_[k - 1];
        const double hi = grid_r_[k];
        return newton_bisect([&](double r) { return fwd(r) - target; }, dfwd, lo, hi, 1e-13);
    }

    AdmissibleProfile profile_;
    int n_;
    int p_; // n - 2
    double r0_;
    double quad_tol_;
    double r_max_;
    double two_m_horizon_; // r0^{n-2}
    bool horizon_critical_;
    std::vector<double> crit_r_, crit_e_; // per-piece criticality radius and defect
    std::vector<double> grid_r_, grid_s_, grid_z_;
};

} // namespace rotsym
