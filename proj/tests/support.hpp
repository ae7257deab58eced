#ifndef PVELL_TESTS_SUPPORT_HPP
#define PVELL_TESTS_SUPPORT_HPP

// Shared test oracles, independent of the library code paths they check.

#include <cmath>
#include <complex>
#include <functional>

namespace oracle {

using cplx = std::complex<double>;

// Complete elliptic integral K(k) via the arithmetic-geometric mean,
// complex modulus (principal branches).  K = pi / (2 agm(1-k, 1+k)).
inline cplx agm(cplx x, cplx y) {
    for (int i = 0; i < 200; ++i) {
        if (std::abs(x - y) <= 1e-15 * (std::abs(x) + std::abs(y))) break;
        cplx a = (x + y) / 2.0;
        cplx g = std::sqrt(x * y);
        if (std::abs(a - g) > std::abs(a + g)) g = -g;  // keep the right AGM branch
        x = a;
        y = g;
    }
    return (x + y) / 2.0;
}

inline cplx ellK(cplx k) {
    const double pi = 3.141592653589793238462643;
    return pi / (2.0 * agm(1.0 - k, 1.0 + k));
}

// E(k) via AGM companion sequence: E = K (1 - sum 2^{n-1} c_n^2).
inline cplx ellE(cplx k) {
    cplx a = 1.0, b = std::sqrt(1.0 - k * k), c = k;
    cplx s = c * c / 2.0;
    double p = 1.0;
    for (int i = 1; i < 200; ++i) {
        cplx an = (a + b) / 2.0;
        cplx g = std::sqrt(a * b);
        if (std::abs(an - g) > std::abs(an + g)) g = -g;
        c = (a - b) / 2.0;
        a = an;
        b = g;
        p *= 2.0;
        s += p * c * c / 2.0;
        if (std::abs(c) < 1e-16) break;
    }
    return ellK(k) * (1.0 - s);
}

// Central finite difference of a complex map.
inline cplx fdiff(const std::function<cplx(cplx)>& f, cplx z, double h = 1e-6) {
    return (f(z + h) - f(z - h)) / (2.0 * h);
}

inline cplx fdiff2(const std::function<cplx(cplx)>& f, cplx z, double h = 1e-5) {
    return (f(z + h) - 2.0 * f(z) + f(z - h)) / (h * h);
}

}  // namespace oracle

#endif
