#pragma once

#include <cmath>

#include "rotsym/errors.hpp"

namespace rotsym {

// Safeguarded Newton on a bracket [lo, hi] with f(lo) <= 0 <= f(hi) up to sign.
// Falls back to bisection whenever the Newton step leaves the bracket or
// fails to shrink it fast enough. Suited to the monotone inversions here
// (s(r), z(r), z_sch), whose derivatives blow up at one endpoint.
template <class F, class DF>
double newton_bisect(F&& f, DF&& df, double lo, double hi, double xtol_rel,
                     int max_iter = 200) {
    double flo = f(lo);
    double fhi = f(hi);
    if (flo == 0.0) return lo;
    if (fhi == 0.0) return hi;
    if ((flo > 0.0) == (fhi > 0.0))
        throw NumericalDomain("newton_bisect: root not bracketed");

    if (flo > 0.0) {
        std::swap(lo, hi);
        std::swap(flo, fhi);
    }
    // invariant: f(lo) < 0 < f(hi); lo/hi may be in either order on the axis

    double x = 0.5 * (lo + hi);
    double step_prev = std::fabs(hi - lo);
    for (int it = 0; it < max_iter; ++it) {
        const double fx = f(x);
        if (fx == 0.0) return x;
        if (fx < 0.0)
            lo = x;
        else
            hi = x;

        const double width = std::fabs(hi - lo);
        if (width <= xtol_rel * (1.0 + std::fabs(x))) return x;

        const double d = df(x);
        double x_next;
        const double newton = (d != 0.0 && std::isfinite(d)) ? x - fx / d : x;
        const bool inside = (newton > std::min(lo, hi)) && (newton < std::max(lo, hi));
        if (inside && std::fabs(newton - x) < 0.5 * step_prev) {
            x_next = newton;
            step_prev = std::fabs(newton - x);
        } else {
            x_next = 0.5 * (lo + hi);
            step_prev = 0.5 * width;
        }
        x = x_next;
    }
    return x;
}

template <class F>
double bisect(F&& f, double lo, double hi, double xtol_rel, int max_iter = 400) {
    double flo = f(lo);
    if (flo == 0.0) return lo;
    double fhi = f(hi);
    if (fhi == 0.0) return hi;
    if ((flo > 0.0) == (fhi > 0.0))
        throw NumericalDomain("bisect: root not bracketed");
    for (int it = 0; it < max_iter; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (std::fabs(hi - lo) <= xtol_rel * (1.0 + std::fabs(mid))) return mid;
        const double fm = f(mid);
        if (fm == 0.0) return mid;
        if ((fm > 0.0) == (fhi > 0.0)) {
            hi = mid;
            fhi = fm;
        } else {
            lo = mid;
            flo = fm;
        }
    }
    return 0.5 * (lo + hi);
}

} // namespace rotsym
