#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "rotsym/errors.hpp"

namespace rotsym {

namespace detail {

// Gauss 7 / Kronrod 15 pair on [-1,1]. Nodes are strictly interior, so the
// integrand is never evaluated at panel endpoints.
struct GK15 {
    static constexpr double xk[8] = {
        0.991455371120812639206854697526329,
        0.949107912342758524526189684047851,
        0.864864423359769072789712788640926,
        0.741531185599394439863864773280788,
        0.586087235467691130294144838258730,
        0.405845151377397166906606412076961,
        0.207784955007898467600689403773245,
        0.000000000000000000000000000000000};
    static constexpr double wk[8] = {
        0.022935322010529224963732008058970,
        0.063092092629978553290700663189204,
        0.104790010322250183839876322541518,
        0.140653259715525918745189590510238,
        0.169004726639267902826583426598550,
        0.190350578064785409913256402421014,
        0.204432940075298892414161999234649,
        0.209482141084727828012999174891714};
    // Gauss-7 weights, aligned with the odd-index Kronrod nodes.
    static constexpr double wg[4] = {
        0.129484966168869693270611432679082,
        0.279705391489276667901467771423780,
        0.381830050505118944950369775488975,
        0.417959183673469387755102040816327};
};

} // namespace detail

// One GK15 panel; returns the Kronrod value, stores |K15 - G7| in err.
template <class F>
double gk15_panel(F&& f, double a, double b, double& err) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);

    double fc = f(c);
    double k15 = detail::GK15::wk[7] * fc;
    double g7 = detail::GK15::wg[3] * fc;
    for (int i = 0; i < 7; ++i) {
        const double dx = h * detail::GK15::xk[i];
        const double fsum = f(c - dx) + f(c + dx);
        k15 += detail::GK15::wk[i] * fsum;
        if (i % 2 == 1) g7 += detail::GK15::wg[i / 2] * fsum;
    }
    k15 *= h;
    g7 *= h;
    err = std::fabs(k15 - g7);
    return k15;
}

// Globally adaptive quadrature: bisect the panel with the largest error
// estimate until sum(err) <= max(abs_tol, rel_tol*|sum(val)|). The |K-G|
// estimate is conservative for the smooth integrands this library produces.
template <class F>
double integrate(F&& f, double a, double b, double rel_tol = 1e-10,
                 double abs_tol = 0.0, int max_panels = 4000) {
    if (a == b) return 0.0;

    struct Panel {
        double a, b, val, err;
    };
    std::vector<Panel> heap;
    auto cmp = [](const Panel& p, const Panel& q) { return p.err < q.err; };

    double err0;
    double v0 = gk15_panel(f, a, b, err0);
    heap.push_back({a, b, v0, err0});
    double total_val = v0;
    double total_err = err0;

    while (total_err > std::max(abs_tol, rel_tol * std::fabs(total_val))) {
        if (static_cast<int>(heap.size()) >= max_panels) {
            // Rounding noise in the integrand can pin the error estimate just
            // above a tight tolerance. Accept the noise-limited result; a
            // genuinely divergent integral still carries a large error here.
            if (total_err <= 1e-8 * std::fabs(total_val)) return total_val;
            throw QuadratureFailure("adaptive quadrature: panel budget exhausted");
        }
        std::pop_heap(heap.begin(), heap.end(), cmp);
        Panel worst = heap.back();
        heap.pop_back();

        const double mid = 0.5 * (worst.a + worst.b);
        if (mid <= worst.a || mid >= worst.b)
            throw QuadratureFailure("adaptive quadrature: panel underflow before tolerance met");

        double el, er;
        const double vl = gk15_panel(f, worst.a, mid, el);
        const double vr = gk15_panel(f, mid, worst.b, er);
        total_val += vl + vr - worst.val;
        total_err += el + er - worst.err;

        heap.push_back({worst.a, mid, vl, el});
        std::push_heap(heap.begin(), heap.end(), cmp);
        heap.push_back({mid, worst.b, vr, er});
        std::push_heap(heap.begin(), heap.end(), cmp);
    }
    return total_val;
}

// integrate f over [a,b] splitting at the given interior breakpoints
// (values outside (a,b) are ignored). Keeps panels off profile kinks.
template <class F>
double integrate_split(F&& f, double a, double b, const std::vector<double>& breaks,
                       double rel_tol = 1e-10) {
    std::vector<double> cuts;
    cuts.push_back(a);
    for (double c : breaks)
        if (c > a && c < b) cuts.push_back(c);
    cuts.push_back(b);
    std::sort(cuts.begin(), cuts.end());

    double sum = 0.0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i)
        sum += integrate(f, cuts[i], cuts[i + 1], rel_tol);
    return sum;
}

} // namespace rotsym
