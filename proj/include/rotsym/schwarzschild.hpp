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
#include "rotsym/quadrature.hpp"
#include "rotsym/rootfind.hpp"

namespace rotsym {

struct TubeInAppended {
    double center_area = 0.0;
    double radius = 0.0;       // D
    double sigma_lo = 0.0;     // arclength from the bottom of the cylinder
    double sigma_hi = 0.0;
    double r_hi = 0.0;         // outer areal radius
    bool clipped_at_boundary = false;
    double volume = 0.0;
    double boundary_area = 0.0;
    double diameter_bound = 0.0;
};

// The model space M_Sch(m, L): the exterior Schwarzschild space of mass m
// with a cylinder [-L,0] x S^{n-1}(r0) glued to its horizon. Vertical
// coordinate convention: the Schwarzschild part occupies z >= 0 with z = 0
// at the horizon, the cylinder occupies z in [-L, 0].
//
// For n = 3 the closed forms
//   z(r) = sqrt(8m (r - 2m)),  s(r) = sqrt(r(r-2m)) + 2m asinh(sqrt((r-2m)/(2m)))
// are primary; quadrature is used for n >= 4 and kept as a cross-check path.
//
// Immutable after construction; concurrent reads are safe.
class AppendedSchwarzschild {
  public:
    AppendedSchwarzschild(int n, double m, double L, double quad_tol = 1e-10,
                          double r_max = 0.0, int grid_size = 1024)
        : n_(n), p_(n - 2), m_(m), L_(L), quad_tol_(quad_tol) {
        if (n_ < 3) throw OutOfDomain("AppendedSchwarzschild: n must be >= 3");
        if (!(m_ > 0.0)) throw OutOfDomain("AppendedSchwarzschild: mass must be positive");
        if (L_ < 0.0) throw OutOfDomain("AppendedSchwarzschild: cylinder length must be >= 0");
        r0_ = std::pow(2.0 * m_, 1.0 / p_);
        // Horizon constant used in every radicand; equals 2m up to one
        // rounding of the root above, and makes r^p - 2m factor exactly
        // through (r - r0).
        two_m_ = ipow(r0_, p_);
        r_max_ = r_max > 0.0 ? r_max : 100.0 * r0_;
        if (!(r_max_ > r0_)) throw OutOfDomain("AppendedSchwarzschild: r_max must exceed r0");
        build_grid(grid_size);
    }

    int n() const { return n_; }
    double mass() const { return m_; }
    double cylinder_length() const { return L_; }
    double horizon_radius() const { return r0_; }
    double r_max() const { return r_max_; }
    double boundary_area() const { return unit_sphere_area(n_) * ipow(r0_, n_ - 1); }

    // z(r) on the Schwarzschild part, z(r0) = 0.
    double z_sch(double r) const {
        check_radius(r);
        if (n_ == 3) return std::sqrt(4.0 * two_m_ * (r - r0_));
        return lookup(grid_z_, r, Integrand::Dzdr);
    }

    double z_sch_by_quadrature(double r) const {
        check_radius(r);
        return segment(r0_, r, Integrand::Dzdr);
    }

    // Arclength s(r) from the horizon along the Schwarzschild part.
    double s_sch(double r) const {
        check_radius(r);
        if (n_ == 3) {
            const double a = two_m_;
            return std::sqrt(r * (r - a)) + a * std::asinh(std::sqrt((r - a) / a));
        }
        return lookup(grid_s_, r, Integrand::InvDrds);
    }

    double s_sch_by_quadrature(double r) const {
        check_radius(r);
        return segment(r0_, r, Integrand::InvDrds);
    }

    // Inverse of z_sch for z >= 0; constant r0 on the cylinder.
    double r_sch(double z) const {
        if (z < -L_ * (1.0 + 1e-12) - 1e-300)
            throw OutOfDomain("r_sch: z below the bottom of the cylinder");
        if (z <= 0.0) return r0_;
        if (n_ == 3) return r0_ + z * z / (4.0 * two_m_);
        if (z > grid_z_.back())
            throw OutOfDomain("r_sch: z beyond the truncation radius");
        const auto it = std::lower_bound(grid_z_.begin(), grid_z_.end(), z);
        const std::size_t k = static_cast<std::size_t>(it - grid_z_.begin());
        if (k < grid_z_.size() && grid_z_[k] == z) return grid_r_[k];
        return newton_bisect([&](double r) { return z_sch(r) - z; },
                             [&](double r) { return dzdr(r); }, grid_r_[k - 1], grid_r_[k],
                             1e-13);
    }

    // g_rr = (1 - 2m/r^{n-2})^{-1} in radial graphical coordinates.
    double metric_coeff_radial(double r) const {
        check_radius(r);
        const double rad = radicand(r);
        if (rad == 0.0)
            throw SingularAtHorizon("radial metric coefficient diverges at the horizon");
        return 1.0 / rad;
    }

    // g_zz in vertical graphical coordinates: r(z)^{n-2}/(2m) on the
    // Schwarzschild part, 1 on the cylinder.
    double metric_coeff_vertical(double z) const {
        if (z < 0.0) {
            if (z < -L_ * (1.0 + 1e-12) - 1e-300)
                throw OutOfDomain("metric_coeff_vertical: z below the cylinder");
            return 1.0;
        }
        return ipow(r_sch(z), p_) / two_m_;
    }

    double sphere_radius_at_z(double z) const { return r_sch(z); }

    // Arclength from the bottom sphere z = -L of the appended space.
    double sigma_of_r(double r) const { return L_ + s_sch(r); }
    double sigma_of_z(double z) const {
        if (z <= 0.0) {
            if (z < -L_ * (1.0 + 1e-12) - 1e-300)
                throw OutOfDomain("sigma_of_z: z below the cylinder");
            return std::max(0.0, z + L_);
        }
        return L_ + s_sch(r_sch(z));
    }

    double r_at_sigma(double sigma) const {
        if (sigma < -1e-12 * (1.0 + L_))
            throw OutOfDomain("r_at_sigma: negative arclength");
        if (sigma <= L_) return r0_;
        const double s = sigma - L_;
        if (s > grid_s_.back())
            throw OutOfDomain("r_at_sigma: arclength beyond the truncation radius");
        const auto it = std::lower_bound(grid_s_.begin(), grid_s_.end(), s);
        const std::size_t k = static_cast<std::size_t>(it - grid_s_.begin());
        if (k < grid_s_.size() && grid_s_[k] == s) return grid_r_[k];
        return newton_bisect([&](double r) { return s_sch(r) - s; },
                             [&](double r) { return 1.0 / drds(r); }, grid_r_[k - 1],
                             grid_r_[k], 1e-13);
    }

    // Volume of r^{-1}[r_a, r_b] in the Schwarzschild part.
    double volume_between_radii(double r_a, double r_b) const {
        check_radius(r_a);
        check_radius(r_b);
        if (r_b <= r_a) return 0.0;
        return unit_sphere_area(n_) * segment(r_a, r_b, Integrand::VolumeDensity);
    }

    TubeInAppended tube(double area, double D) const {
        if (area < boundary_area() * (1.0 - 1e-12))
            throw OutOfDomain("tube: centre area below the boundary area");
        const double rc = std::pow(area / unit_sphere_area(n_), 1.0 / (n_ - 1));
        return tube_at_sigma(sigma_of_r(rc), D);
    }

    TubeInAppended tube_at_sigma(double sigma_c, double D) const {
        if (D < 0.0) throw OutOfDomain("tube: negative radius");
        TubeInAppended t;
        t.center_area = unit_sphere_area(n_) * ipow(r_at_sigma(sigma_c), n_ - 1);
        t.radius = D;
        t.sigma_hi = sigma_c + D;
        t.sigma_lo = std::max(0.0, sigma_c - D);
        t.clipped_at_boundary = sigma_c <= D;
        t.r_hi = r_at_sigma(t.sigma_hi);

        const double omega = unit_sphere_area(n_);
        const double cyl_len = std::max(0.0, std::min(t.sigma_hi, L_) - t.sigma_lo);
        t.volume = cyl_len * omega * ipow(r0_, n_ - 1);
        if (t.sigma_hi > L_) {
            const double r_from = r_at_sigma(std::max(t.sigma_lo, L_));
            t.volume += omega * segment(r_from, t.r_hi, Integrand::VolumeDensity);
        }
        const double r_lo_sphere = r_at_sigma(t.sigma_lo);
        t.boundary_area =
            omega * (ipow(r_lo_sphere, n_ - 1) + ipow(t.r_hi, n_ - 1));
        t.diameter_bound = (t.sigma_hi - t.sigma_lo) + M_PI * t.r_hi;
        return t;
    }

    // Embedding table matching the manifold CSV schema; the cylinder
    // contributes the rows with z < 0.
    void write_embedding_csv(std::ostream& os, int cylinder_rows = 128) const {
        os << "r,s,z,drds,m_hawking,scalar_curvature\n";
        char buf[160];
        const double mass_h = 0.5 * two_m_;
        if (L_ > 0.0) {
            const double R_cyl = (n_ - 1) * (n_ - 2) / sqr(r0_);
            for (int i = 0; i < cylinder_rows; ++i) {
                const double z = -L_ + L_ * i / cylinder_rows;
                std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n",
                              r0_, z + L_, z, 0.0, mass_h, R_cyl);
                os << buf;
            }
        }
        for (std::size_t i = 0; i < grid_r_.size(); ++i) {
            const double r = grid_r_[i];
            const double z = (n_ == 3) ? z_sch(r) : grid_z_[i];
            const double s = (n_ == 3) ? s_sch(r) : grid_s_[i];
            std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", r,
                          s + L_, z, drds(r), mass_h, 0.0);
            os << buf;
        }
    }

    void write_embedding_csv(const std::string& path, int cylinder_rows = 128) const {
        std::ofstream out(path);
        if (!out) throw IoError("cannot write csv file: " + path);
        write_embedding_csv(out, cylinder_rows);
    }

    double radicand(double r) const {
        return (r - r0_) * pow_diff_sum(r, r0_, p_) / ipow(r, p_);
    }
    double drds(double r) const { return std::sqrt(radicand(r)); }
    double dzdr(double r) const {
        if (r == r0_) throw SingularAtHorizon("dz/dr diverges at the horizon");
        return std::sqrt(two_m_ / ((r - r0_) * pow_diff_sum(r, r0_, p_)));
    }

  private:
    enum class Integrand { InvDrds, Dzdr, VolumeDensity };

    void check_radius(double r) const {
        if (r < r0_ * (1.0 - 1e-12)) throw OutOfDomain("radius below the horizon radius");
    }

    void build_grid(int grid_size) {
        grid_r_.clear();
        const double ratio = r_max_ / r0_;
        for (int k = 0; k < grid_size; ++k)
            grid_r_.push_back(r0_ * std::pow(ratio, static_cast<double>(k) / (grid_size - 1)));
        grid_r_.front() = r0_;
        grid_r_.back() = r_max_;

        grid_s_.assign(grid_r_.size(), 0.0);
        grid_z_.assign(grid_r_.size(), 0.0);
        if (n_ == 3) {
            for (std::size_t i = 0; i < grid_r_.size(); ++i) {
                grid_s_[i] = s_sch(grid_r_[i]);
                grid_z_[i] = z_sch(grid_r_[i]);
            }
            return;
        }
        for (std::size_t i = 1; i < grid_r_.size(); ++i) {
            grid_s_[i] = grid_s_[i - 1] + segment(grid_r_[i - 1], grid_r_[i], Integrand::InvDrds);
            grid_z_[i] = grid_z_[i - 1] + segment(grid_r_[i - 1], grid_r_[i], Integrand::Dzdr);
        }
    }

    double segment(double a, double b, Integrand kind) const {
        if (b <= a) return 0.0;
        if (a == r0_) {
            // r = r0 + u^2 removes the (r-r0)^{-1/2} endpoint singularity
            const double U = std::sqrt(b - r0_);
            auto g = [&](double u) {
                const double r = r0_ + u * u;
                const double Q = pow_diff_sum(r, r0_, p_);
                switch (kind) {
                    case Integrand::InvDrds:
                        return 2.0 * std::sqrt(ipow(r, p_) / Q);
                    case Integrand::Dzdr:
                        return 2.0 * std::sqrt(two_m_ / Q);
                    case Integrand::VolumeDensity:
                        return 2.0 * ipow(r, n_ - 1) * std::sqrt(ipow(r, p_) / Q);
                }
                return 0.0;
            };
            return integrate(g, 0.0, U, quad_tol_);
        }
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
        return integrate(f, a, b, quad_tol_);
    }

    double lookup(const std::vector<double>& table, double r, Integrand kind) const {
        if (r > r_max_ * (1.0 + 1e-12))
            throw OutOfDomain("model coordinate lookup beyond r_max");
        r = std::min(std::max(r, r0_), r_max_);
        const auto it = std::upper_bound(grid_r_.begin(), grid_r_.end(), r);
        const std::size_t k = static_cast<std::size_t>(it - grid_r_.begin()) - 1;
        if (grid_r_[k] == r) return table[k];
        return table[k] + segment(grid_r_[k], r, kind);
    }

    int n_, p_;
    double m_, L_, quad_tol_;
    double r0_, two_m_, r_max_;
    std::vector<double> grid_r_, grid_s_, grid_z_;
};

} // namespace rotsym
