#pragma once

#include <cmath>
#include <cstdint>

namespace rotsym {

inline double sqr(double x) { return x * x; }

// Integer power by repeated multiplication. Deterministic, exact for small p,
// used everywhere r^{n-2} or r^{n-1} appears so that identical inputs give
// bitwise identical powers.
inline double ipow(double x, int p) {
    double acc = 1.0;
    double base = x;
    for (int e = p; e > 0; e >>= 1) {
        if (e & 1) acc *= base;
        base *= base;
    }
    return acc;
}

// Sum_{i=0}^{p-1} a^i b^{p-1-i}, so that a^p - b^p = (a-b) * pow_diff_sum(a,b,p).
// Keeps horizon-adjacent radicands free of catastrophic cancellation.
inline double pow_diff_sum(double a, double b, int p) {
    double sum = 0.0;
    double ai = 1.0;
    for (int i = 0; i < p; ++i) {
        sum += ai * ipow(b, p - 1 - i);
        ai *= a;
    }
    return sum;
}

// Area of the unit (n-1)-sphere in R^n: omega_{n-1} = 2 pi^{n/2} / Gamma(n/2).
// Evaluated with exact rational coefficients times powers of pi, e.g.
// n=3 -> 4 pi, n=4 -> 2 pi^2, n=5 -> 8 pi^2 / 3.
inline double unit_sphere_area(int n) {
    if (n % 2 == 0) {
        const int k = n / 2; // Gamma(k) = (k-1)!
        double fact = 1.0;
        for (int j = 2; j < k; ++j) fact *= j;
        return 2.0 * ipow(M_PI, k) / fact;
    }
    const int k = (n - 1) / 2; // Gamma(k + 1/2) = sqrt(pi) * prod_{j=1}^{k} (j - 1/2)
    double prod = 1.0;
    for (int j = 1; j <= k; ++j) prod *= (j - 0.5);
    return 2.0 * ipow(M_PI, k) / prod;
}

// Portable deterministic uniform double in [0,1) from a 64-bit state word.
inline double canonical_u01(std::uint64_t word) {
    return static_cast<double>(word >> 11) * 0x1.0p-53;
}

} // namespace rotsym
