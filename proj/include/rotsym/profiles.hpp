#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "rotsym/errors.hpp"
#include "rotsym/math_util.hpp"
#include "rotsym/rootfind.hpp"

namespace rotsym {

constexpr double kInf = std::numeric_limits<double>::infinity();

enum class PieceKind { Constant, FractionOfMax, MollifiedJoin };

enum class Side { Left, Right };

// One piece of a piecewise Hawking mass function m_H(r).
//   Constant       m_H = value
//   FractionOfMax  m_H = (1/2) r^{n-2} (1 - epsilon), the critical-slope piece
//   MollifiedJoin  C^1 cubic Hermite blend between its two neighbours
struct ProfilePiece {
    PieceKind kind;
    double r_lo = 0.0;
    double r_hi = kInf; // +inf allowed on the last piece only
    double value = 0.0;    // Constant
    double epsilon = 0.0;  // FractionOfMax, in (0,1)
    double width = 0.0;    // MollifiedJoin, equals r_hi - r_lo

    static ProfilePiece constant(double m, double r_lo, double r_hi) {
        ProfilePiece p;
        p.kind = PieceKind::Constant;
        p.value = m;
        p.r_lo = r_lo;
        p.r_hi = r_hi;
        return p;
    }
    static ProfilePiece fraction_of_max(double eps, double r_lo, double r_hi) {
        ProfilePiece p;
        p.kind = PieceKind::FractionOfMax;
        p.epsilon = eps;
        p.r_lo = r_lo;
        p.r_hi = r_hi;
        return p;
    }
    static ProfilePiece mollified_join(double r_lo, double r_hi) {
        ProfilePiece p;
        p.kind = PieceKind::MollifiedJoin;
        p.r_lo = r_lo;
        p.r_hi = r_hi;
        p.width = r_hi - r_lo;
        return p;
    }
};

struct ValidationCheck {
    std::string name;
    bool pass = false;
    std::string detail;
};

struct ValidationReport {
    bool valid = false;
    std::vector<ValidationCheck> checks;
};

// Piecewise Hawking mass function on [r0, inf). Construction checks structure
// only (tiling, parameter ranges); admissibility is checked by
// validate_profile so that inadmissible functions can still be represented.
class AdmissibleProfile {
  public:
    AdmissibleProfile(int n, double r0, std::vector<ProfilePiece> pieces)
        : n_(n), r0_(r0), pieces_(std::move(pieces)) {
        check_structure();
        precompute_joins();
        if (pieces_.back().kind == PieceKind::Constant)
            tail_mass_ = pieces_.back().value;
    }

    int n() const { return n_; }
    double r0() const { return r0_; }
    const std::vector<ProfilePiece>& pieces() const { return pieces_; }
    std::optional<double> tail_mass() const { return tail_mass_; }

    // m_H(r); exact piecewise evaluation, pieces join continuously by
    // construction.
    double value(double r) const {
        const ProfilePiece& p = piece_at(r);
        switch (p.kind) {
            case PieceKind::Constant:
                return p.value;
            case PieceKind::FractionOfMax:
                return 0.5 * ipow(r, n_ - 2) * (1.0 - p.epsilon);
            case PieceKind::MollifiedJoin:
                return hermite(p, join_data_[index_of(p)], r);
        }
        return 0.0;
    }

    // dm_H/dr. Throws CornerDerivative exactly at a kink of a non-mollified
    // profile; callers wanting one-sided values pass the side explicitly.
    double slope(double r) const {
        if (r < r0_) throw OutOfDomain("slope: r below horizon radius");
        const std::size_t k = piece_index(r);
        if (r == pieces_[k].r_lo && k > 0) {
            const double sl = slope_in_piece(k - 1, r);
            const double sr = slope_in_piece(k, r);
            if (std::fabs(sl - sr) > 1e-9 * (1.0 + std::max(std::fabs(sl), std::fabs(sr))))
                throw CornerDerivative("slope: kink at r = " + std::to_string(r));
        }
        return slope_in_piece(k, r);
    }

    double slope(double r, Side side) const {
        if (r < r0_) throw OutOfDomain("slope: r below horizon radius");
        std::size_t k = piece_index(r);
        if (side == Side::Left && k > 0 && r == pieces_[k].r_lo) --k;
        return slope_in_piece(k, r);
    }

    std::size_t piece_index(double r) const {
        if (r < r0_) throw OutOfDomain("profile evaluated at r below horizon radius");
        // pieces are [r_lo, r_hi); a shared endpoint belongs to the right piece
        std::size_t k = pieces_.size() - 1;
        for (std::size_t i = 0; i + 1 < pieces_.size(); ++i) {
            if (r < pieces_[i].r_hi) {
                k = i;
                break;
            }
        }
        return k;
    }

    // Finite interior piece boundaries, for quadrature panel splitting.
    std::vector<double> breakpoints() const {
        std::vector<double> b;
        for (std::size_t i = 0; i + 1 < pieces_.size(); ++i) b.push_back(pieces_[i].r_hi);
        return b;
    }

    double last_finite_breakpoint() const {
        const auto b = breakpoints();
        return b.empty() ? r0_ : b.back();
    }

    bool is_kink(double r) const {
        for (std::size_t i = 0; i + 1 < pieces_.size(); ++i) {
            if (r == pieces_[i].r_hi) {
                const double sl = slope_in_piece(i, r);
                const double sr = slope_in_piece(i + 1, r);
                return std::fabs(sl - sr) >
                       1e-9 * (1.0 + std::max(std::fabs(sl), std::fabs(sr)));
            }
        }
        return false;
    }

  private:
    struct JoinData {
        double va = 0, sa = 0, vb = 0, sb = 0;
    };

    void check_structure() {
        if (n_ < 3) throw MalformedPieces("dimension n must be >= 3");
        if (!(r0_ > 0.0) || !std::isfinite(r0_))
            throw MalformedPieces("horizon radius r0 must be positive and finite");
        if (pieces_.empty()) throw MalformedPieces("profile has no pieces");
        if (pieces_.front().r_lo != r0_)
            throw MalformedPieces("first piece must start at r0");
        for (std::size_t i = 0; i < pieces_.size(); ++i) {
            const ProfilePiece& p = pieces_[i];
            if (!(p.r_lo < p.r_hi))
                throw MalformedPieces("piece has r_lo >= r_hi");
            if (i + 1 < pieces_.size()) {
                if (!std::isfinite(p.r_hi))
                    throw MalformedPieces("only the last piece may extend to infinity");
                if (p.r_hi != pieces_[i + 1].r_lo)
                    throw MalformedPieces("pieces do not tile [r0, inf): gap or overlap");
            }
            switch (p.kind) {
                case PieceKind::Constant:
                    if (!std::isfinite(p.value) || p.value <= 0.0)
                        throw MalformedPieces("constant piece needs a positive finite mass");
                    break;
                case PieceKind::FractionOfMax:
                    if (!(p.epsilon > 0.0 && p.epsilon < 1.0))
                        throw MalformedPieces("fraction_of_max piece needs epsilon in (0,1)");
                    break;
                case PieceKind::MollifiedJoin:
                    if (i == 0 || i + 1 == pieces_.size())
                        throw MalformedPieces("mollified_join cannot be the first or last piece");
                    if (pieces_[i - 1].kind == PieceKind::MollifiedJoin ||
                        pieces_[i + 1].kind == PieceKind::MollifiedJoin)
                        throw MalformedPieces("mollified_join needs non-join neighbours");
                    if (!std::isfinite(p.r_hi))
                        throw MalformedPieces("mollified_join must be finite");
                    if (std::fabs(p.width - (p.r_hi - p.r_lo)) >
                        1e-9 * (p.r_hi - p.r_lo))
                        throw MalformedPieces("mollified_join width must equal r_hi - r_lo");
                    break;
            }
        }
        if (std::isfinite(pieces_.back().r_hi))
            throw MalformedPieces("last piece must extend to infinity");
    }

    void precompute_joins() {
        join_data_.assign(pieces_.size(), JoinData{});
        for (std::size_t i = 0; i < pieces_.size(); ++i) {
            if (pieces_[i].kind != PieceKind::MollifiedJoin) continue;
            JoinData j;
            j.va = eval_in_piece(i - 1, pieces_[i].r_lo);
            j.sa = slope_in_piece(i - 1, pieces_[i].r_lo);
            j.vb = eval_in_piece(i + 1, pieces_[i].r_hi);
            j.sb = slope_in_piece(i + 1, pieces_[i].r_hi);
            join_data_[i] = j;
        }
    }

    std::size_t index_of(const ProfilePiece& p) const {
        return static_cast<std::size_t>(&p - pieces_.data());
    }

    const ProfilePiece& piece_at(double r) const { return pieces_[piece_index(r)]; }

    double eval_in_piece(std::size_t k, double r) const {
        const ProfilePiece& p = pieces_[k];
        switch (p.kind) {
            case PieceKind::Constant:
                return p.value;
            case PieceKind::FractionOfMax:
                return 0.5 * ipow(r, n_ - 2) * (1.0 - p.epsilon);
            case PieceKind::MollifiedJoin:
                return hermite(p, join_data_[k], r);
        }
        return 0.0;
    }

    double slope_in_piece(std::size_t k, double r) const {
        const ProfilePiece& p = pieces_[k];
        switch (p.kind) {
            case PieceKind::Constant:
                return 0.0;
            case PieceKind::FractionOfMax:
                return 0.5 * (n_ - 2) * ipow(r, n_ - 3) * (1.0 - p.epsilon);
            case PieceKind::MollifiedJoin:
                return hermite_slope(p, join_data_[k], r);
        }
        return 0.0;
    }

    static double hermite(const ProfilePiece& p, const JoinData& j, double r) {
        const double h = p.r_hi - p.r_lo;
        const double t = (r - p.r_lo) / h;
        const double t2 = t * t, t3 = t2 * t;
        return j.va * (2 * t3 - 3 * t2 + 1) + h * j.sa * (t3 - 2 * t2 + t) +
               j.vb * (-2 * t3 + 3 * t2) + h * j.sb * (t3 - t2);
    }

    static double hermite_slope(const ProfilePiece& p, const JoinData& j, double r) {
        const double h = p.r_hi - p.r_lo;
        const double t = (r - p.r_lo) / h;
        const double t2 = t * t;
        return (j.va * (6 * t2 - 6 * t) + h * j.sa * (3 * t2 - 4 * t + 1) +
                j.vb * (-6 * t2 + 6 * t) + h * j.sb * (3 * t2 - 2 * t)) /
               h;
    }

    int n_;
    double r0_;
    std::vector<ProfilePiece> pieces_;
    std::vector<JoinData> join_data_;
    std::optional<double> tail_mass_;
};

inline double eval_m_hawking(const AdmissibleProfile& p, double r) { return p.value(r); }
inline double eval_dm_dr(const AdmissibleProfile& p, double r) { return p.slope(r); }
inline double eval_dm_dr(const AdmissibleProfile& p, double r, Side side) {
    return p.slope(r, side);
}

// Checks the four admissibility invariants:
//   (i)   m_H(r0) = (1/2) r0^{n-2}
//   (ii)  m_H nondecreasing on [r0, inf)
//   (iii) m_H(r) < (1/2) r^{n-2} for r > r0
//   (iv)  m_H continuous
// Analytic slope signs decide (ii) for constant and critical-slope pieces;
// mollified joins are sampled on grid_per_piece points.
inline ValidationReport validate_profile(const AdmissibleProfile& p,
                                         int grid_per_piece = 10000) {
    const int pw = p.n() - 2;
    ValidationReport rep;

    const double target = 0.5 * ipow(p.r0(), pw);
    const double bval = p.value(p.r0());
    {
        ValidationCheck c{"boundary_condition", false, ""};
        c.pass = std::fabs(bval - target) <= 1e-12 * std::max(1.0, target);
        if (!c.pass)
            c.detail = "m_H(r0) = " + std::to_string(bval) + ", required " +
                       std::to_string(target);
        rep.checks.push_back(c);
    }

    auto sample_hi = [&](const ProfilePiece& pc) {
        return std::isfinite(pc.r_hi) ? pc.r_hi
                                      : std::max(10.0 * p.r0(), 10.0 * pc.r_lo);
    };

    {
        ValidationCheck c{"monotone", true, ""};
        for (const ProfilePiece& pc : p.pieces()) {
            if (pc.kind == PieceKind::MollifiedJoin) {
                const double h = pc.r_hi - pc.r_lo;
                for (int k = 0; k <= grid_per_piece && c.pass; ++k) {
                    const double r = pc.r_lo + h * k / grid_per_piece;
                    if (p.slope(r, Side::Right) < -1e-12 * (1.0 + target)) {
                        c.pass = false;
                        c.detail = "decreasing near r = " + std::to_string(r);
                    }
                }
            }
            // Constant and FractionOfMax have slope >= 0 identically.
        }
        // piece-to-piece: values must not drop across boundaries
        for (std::size_t i = 0; i + 1 < p.pieces().size() && c.pass; ++i) {
            const double b = p.pieces()[i].r_hi;
            const double vl = p.value(b * (1.0 - 1e-13));
            const double vr = p.value(b);
            if (vr < vl - 1e-12 * (1.0 + std::fabs(vl))) {
                c.pass = false;
                c.detail = "value drops across r = " + std::to_string(b);
            }
        }
        rep.checks.push_back(c);
    }

    {
        ValidationCheck c{"subcritical", true, ""};
        for (const ProfilePiece& pc : p.pieces()) {
            if (pc.kind == PieceKind::FractionOfMax) continue; // below max by epsilon
            const double hi = sample_hi(pc);
            for (int k = 0; k <= grid_per_piece && c.pass; ++k) {
                const double r = pc.r_lo + (hi - pc.r_lo) * k / grid_per_piece;
                if (r <= p.r0()) continue; // equality holds at the horizon
                const double cap = 0.5 * ipow(r, pw);
                if (p.value(r) >= cap) {
                    c.pass = false;
                    c.detail = "m_H(r) >= r^{n-2}/2 at r = " + std::to_string(r);
                }
            }
            if (!c.pass) break;
        }
        rep.checks.push_back(c);
    }

    {
        ValidationCheck c{"continuous", true, ""};
        for (std::size_t i = 0; i + 1 < p.pieces().size(); ++i) {
            const double b = p.pieces()[i].r_hi;
            // evaluate the left piece at its endpoint directly
            const AdmissibleProfile& pp = p;
            const double vl = [&] {
                const ProfilePiece& lp = pp.pieces()[i];
                switch (lp.kind) {
                    case PieceKind::Constant:
                        return lp.value;
                    case PieceKind::FractionOfMax:
                        return 0.5 * ipow(b, pw) * (1.0 - lp.epsilon);
                    case PieceKind::MollifiedJoin:
                        return pp.value(b * (1.0 - 1e-15)); // join endpoints match by construction
                }
                return 0.0;
            }();
            const double vr = p.value(b);
            if (std::fabs(vl - vr) > 1e-12 * std::max(1.0, std::fabs(vr))) {
                c.pass = false;
                c.detail = "jump at r = " + std::to_string(b);
                break;
            }
        }
        rep.checks.push_back(c);
    }

    rep.valid = true;
    for (const auto& c : rep.checks) rep.valid = rep.valid && c.pass;
    return rep;
}

// ---------------------------------------------------------------------------
// Generators
// ---------------------------------------------------------------------------

// Constant profile m_H = m, horizon at r0 = (2m)^{1/(n-2)}.
inline AdmissibleProfile schwarzschild_profile(int n, double m) {
    if (!(m > 0.0)) throw InfeasibleParameters("schwarzschild_profile: mass must be positive");
    const double r0 = std::pow(2.0 * m, 1.0 / (n - 2));
    return AdmissibleProfile(n, r0, {ProfilePiece::constant(m, r0, kInf)});
}

// Three-piece deep-well profile: constant / (1/2) r^{n-2}(1-eps) / constant,
// with eps chosen by bisection on the closed-form separation bound
//   B(eps) = (r0/sqrt(eps)) ((1+delta)^{1/(n-2)} - 1) / (1-eps)^{1/(n-2)}
// so that B(eps) > L, subject to rbar_eps <= r1 = (A1/omega_{n-1})^{1/(n-1)}.
inline AdmissibleProfile deep_well_profile(int n, double A0, double A1, double L,
                                           double delta) {
    if (!(A0 > 0.0) || !(A1 > A0))
        throw InfeasibleParameters("deep_well_profile: need 0 < A0 < A1");
    if (!(L > 0.0)) throw InfeasibleParameters("deep_well_profile: need L > 0");
    if (!(delta > 0.0 && delta < 1.0))
        throw InfeasibleParameters("deep_well_profile: need delta in (0,1)");

    const int pw = n - 2;
    const double omega = unit_sphere_area(n);
    const double r0 = std::pow(A0 / omega, 1.0 / (n - 1));
    const double r1 = std::pow(A1 / omega, 1.0 / (n - 1));

    // rbar_eps <= r1  <=>  eps <= 1 - (1+delta) (r0/r1)^{n-2}
    const double eps_max = 1.0 - (1.0 + delta) * ipow(r0, pw) / ipow(r1, pw);
    if (!(eps_max > 0.0))
        throw InfeasibleParameters(
            "deep_well_profile: (1+delta) A0^{(n-2)/(n-1)} must not exceed A1^{(n-2)/(n-1)}");

    const double coeff = r0 * (std::pow(1.0 + delta, 1.0 / pw) - 1.0);
    auto bound = [&](double eps) {
        return coeff / (std::sqrt(eps) * std::pow(1.0 - eps, 1.0 / pw));
    };

    // B decreases on (0, (n-2)/n]; stay within the decreasing branch.
    const double cap = std::min(eps_max, static_cast<double>(n - 2) / n);
    const double target = L * (1.0 + 1e-6);
    double eps;
    if (bound(cap) >= target) {
        eps = cap;
    } else {
        double lo = cap;
        while (bound(lo) < target) {
            lo *= 0.25;
            if (lo < 1e-300)
                throw InfeasibleParameters("deep_well_profile: separation bound underflow");
        }
        double hi = cap; // bound(lo) >= target > bound(hi)
        while (hi - lo > 1e-12 * lo) {
            const double mid = 0.5 * (lo + hi);
            if (bound(mid) >= target)
                lo = mid;
            else
                hi = mid;
        }
        eps = lo;
    }

    const double r_under = r0 * std::pow(1.0 - eps, -1.0 / pw);
    const double r_over = r0 * std::pow((1.0 + delta) / (1.0 - eps), 1.0 / pw);
    const double m0 = 0.5 * ipow(r0, pw);
    return AdmissibleProfile(
        n, r0,
        {ProfilePiece::constant(m0, r0, r_under),
         ProfilePiece::fraction_of_max(eps, r_under, r_over),
         ProfilePiece::constant(m0 * (1.0 + delta), r_over, kInf)});
}

// Sharp-turn profile: exactly m0 on [r0, 2 r0], a brief C^1 turn of maximal
// derivative 1.5*slope centred at 2.5 r0, then constant m_j. The turn width
// is (m_j - m0)/slope.
inline AdmissibleProfile sharp_turn_profile(int n, double m0, double m_j, double slope) {
    if (!(m0 > 0.0) || m_j < m0)
        throw InfeasibleParameters("sharp_turn_profile: need m_j >= m0 > 0");
    const int pw = n - 2;
    const double r0 = std::pow(2.0 * m0, 1.0 / pw);
    if (m_j == m0)
        return AdmissibleProfile(n, r0, {ProfilePiece::constant(m0, r0, kInf)});
    if (!(slope > 0.0)) throw InfeasibleParameters("sharp_turn_profile: need slope > 0");

    const double w = (m_j - m0) / slope;
    if (w > r0)
        throw InfeasibleParameters("sharp_turn_profile: turn of width (m_j-m0)/slope "
                                   "does not fit inside (2 r0, 3 r0)");
    const double a = 2.5 * r0 - 0.5 * w;
    const double b = 2.5 * r0 + 0.5 * w;
    if (!(m_j < 0.5 * ipow(a, pw)))
        throw InfeasibleParameters("sharp_turn_profile: m_j breaks sub-criticality at the turn");

    return AdmissibleProfile(n, r0,
                             {ProfilePiece::constant(m0, r0, a),
                              ProfilePiece::mollified_join(a, b),
                              ProfilePiece::constant(m_j, b, kInf)});
}

// Replace each interior kink by a C^1 mollified join of at most the given
// width (clamped so joins stay inside their neighbours).
inline AdmissibleProfile mollify(const AdmissibleProfile& p, double width) {
    if (!(width > 0.0)) throw InfeasibleParameters("mollify: width must be positive");
    const auto& pieces = p.pieces();
    std::vector<ProfilePiece> out;
    out.push_back(pieces[0]);
    for (std::size_t i = 0; i + 1 < pieces.size(); ++i) {
        const double c = pieces[i].r_hi;
        if (!p.is_kink(c)) {
            out.push_back(pieces[i + 1]);
            continue;
        }
        const double left_len = out.back().r_hi - out.back().r_lo;
        const double right_len =
            (std::isfinite(pieces[i + 1].r_hi) ? pieces[i + 1].r_hi : 10 * c) -
            pieces[i + 1].r_lo;
        const double w = std::min({width, left_len, right_len});
        const double a = c - 0.5 * w;
        const double b = c + 0.5 * w;
        out.back().r_hi = a;
        out.push_back(ProfilePiece::mollified_join(a, b));
        ProfilePiece right = pieces[i + 1];
        right.r_lo = b;
        out.push_back(right);
    }
    return AdmissibleProfile(p.n(), p.r0(), std::move(out));
}

} // namespace rotsym
