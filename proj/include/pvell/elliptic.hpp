#ifndef PVELL_ELLIPTIC_HPP
#define PVELL_ELLIPTIC_HPP

#include <cmath>

#include "pvell/theta.hpp"
#include "pvell/types.hpp"

namespace pvell {

// sn value tagged with pole proximity: near the pole lattice the value is the
// (large) quotient but at_pole is set instead of silently overflowing.
struct SnResult {
    cplx value{};
    bool at_pole = false;
};

// Jacobi sn with complex modulus k = A^{1/2}, built on the theta context of
// tau0 = Omega_b/Omega_a.  Convention: 4 K_quarter = Omega_a, 2i Kprime_half = Omega_b.
//
// sn(u) = c_sn e^{2 pi i v} theta(v+nu0) theta(v+nu0+1/2) / (theta(v) theta(v+1/2)),
// v = u/Omega_a, nu0 = (1+tau0)/2.  The shift pair places the zeros of sn at
// u = 0 mod (2K, 2iK') and the poles at u = iK' mod (2K, 2iK'); c_sn enforces
// sn'(0) = 1 and is fixed in closed form from the same theta data.
struct EllipticContext {
    cplx k{};
    cplx K_quarter{};     // Omega_a / 4
    cplx Kprime_half{};   // Omega_b / (2i)
    ThetaContext theta_ctx;
    cplx c_sn{};
    cplx Omega_a{};
    cplx Omega_b{};
    cplx nu0{};
    double pole_fuzz = 1e-9;

    EllipticContext() = default;

    EllipticContext(cplx Omega_a_, cplx Omega_b_, cplx k_, double tol = 1e-12)
        : k(k_), Omega_a(Omega_a_), Omega_b(Omega_b_) {
        K_quarter = Omega_a / 4.0;
        Kprime_half = Omega_b / (2.0 * iunit);
        cplx tau0 = Omega_b / Omega_a;
        theta_ctx = ThetaContext(tau0, tol);
        nu0 = (1.0 + tau0) / 2.0;
        c_sn = Omega_a * theta(cplx{0.0}, theta_ctx) * theta(cplx{0.5}, theta_ctx) /
               (theta_prime(nu0, theta_ctx) * theta(nu0 + 0.5, theta_ctx));
    }

    static EllipticContext from(const BoutrouxData& bd, double tol = 1e-12) {
        return EllipticContext(bd.Omega_a, bd.Omega_b, bd.k, tol);
    }
};

namespace detail {

struct SnParts {
    cplx e, n1, n2, d1, d2;  // exp factor and the four theta values at reduced v
    cplx v;
};

inline SnParts sn_parts(cplx u, const EllipticContext& ell) {
    cplx ur = lattice_reduce(u, ell.Omega_a, ell.Omega_b);
    SnParts p;
    p.v = ur / ell.Omega_a;
    p.e = std::exp(2.0 * pi * iunit * p.v);
    p.n1 = theta(p.v + ell.nu0, ell.theta_ctx);
    p.n2 = theta(p.v + ell.nu0 + 0.5, ell.theta_ctx);
    p.d1 = theta(p.v, ell.theta_ctx);
    p.d2 = theta(p.v + 0.5, ell.theta_ctx);
    return p;
}

}  // namespace detail

// sn(u; k).  Pole detection is through the denominator theta factors.
inline SnResult jacobi_sn(cplx u, const EllipticContext& ell) {
    auto p = detail::sn_parts(u, ell);
    SnResult r;
    double dscale = std::abs(theta(cplx{0.0}, ell.theta_ctx));
    if (std::abs(p.d1) < 1e-7 * dscale || std::abs(p.d2) < 1e-7 * dscale) r.at_pole = true;
    r.value = ell.c_sn * p.e * p.n1 * p.n2 / (p.d1 * p.d2);
    return r;
}

// d sn/du, by the product-rule derivative of the theta quotient (stable at the
// zeros of sn, tagged at the poles like sn itself).
inline SnResult jacobi_sn_deriv(cplx u, const EllipticContext& ell) {
    auto p = detail::sn_parts(u, ell);
    const auto& ctx = ell.theta_ctx;
    cplx n1p = theta_prime(p.v + ell.nu0, ctx);
    cplx n2p = theta_prime(p.v + ell.nu0 + 0.5, ctx);
    cplx d1p = theta_prime(p.v, ctx);
    cplx d2p = theta_prime(p.v + 0.5, ctx);
    cplx N = p.e * p.n1 * p.n2;
    cplx Np = p.e * (2.0 * pi * iunit * p.n1 * p.n2 + n1p * p.n2 + p.n1 * n2p);
    cplx D = p.d1 * p.d2;
    cplx Dp = d1p * p.d2 + p.d1 * d2p;
    SnResult r;
    double dscale = std::abs(theta(cplx{0.0}, ctx));
    if (std::abs(p.d1) < 1e-7 * dscale || std::abs(p.d2) < 1e-7 * dscale) r.at_pole = true;
    r.value = ell.c_sn * (Np * D - N * Dp) / (D * D) / ell.Omega_a;
    return r;
}

}  // namespace pvell

#endif
