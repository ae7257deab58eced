#ifndef PVELL_THETA_HPP
#define PVELL_THETA_HPP

#include <algorithm>
#include <cmath>

#include "pvell/types.hpp"

namespace pvell {

// Context for the theta series  theta(z, tau) = sum_n exp(pi i tau n^2 + 2 pi i z n).
// N is the base truncation for lattice-reduced arguments; evaluation at larger
// |Im z| widens the truncation and is rejected past a hard cap.
struct ThetaContext {
    cplx tau{};
    cplx q{};
    int N = 0;
    double tol = 1e-12;

    static constexpr int hard_cap = 64;

    ThetaContext() = default;

    explicit ThetaContext(cplx tau_, double tol_ = 1e-12) : tau(tau_), tol(tol_) {
        if (!(std::imag(tau) > 0.0))
            throw domain_error("ThetaContext: Im tau must be positive");
        q = std::exp(iunit * pi * tau);
        // |q|^{N^2} < tol  =>  N > sqrt(log tol / log |q|)
        double nq = std::sqrt(std::log(tol) / std::log(std::abs(q)));
        N = std::min(hard_cap, (int)std::ceil(nq) + 2);
    }

    // Truncation needed at argument z (series terms carry e^{2 pi |Im z| n}).
    int terms_for(cplx z) const {
        double extra = std::abs(std::imag(z)) / std::imag(tau);
        int n = (int)std::ceil(extra) + N;
        if (n > hard_cap)
            throw domain_error("theta: argument too far from the real axis; lattice-reduce first");
        return n;
    }
};

namespace detail {

// d-th z-derivative of the theta series, summed directly.
inline cplx theta_series(cplx z, const ThetaContext& ctx, int d) {
    const int nmax = ctx.terms_for(z);
    const cplx e = std::exp(2.0 * pi * iunit * z);
    const cplx einv = 1.0 / e;
    const cplx q2 = ctx.q * ctx.q;
    cplx qn = ctx.q;        // q^{2n-1} running factor
    cplx qsq = 1.0;         // q^{n^2}
    cplx ep = 1.0, em = 1.0;
    cplx sum = (d == 0) ? cplx{1.0, 0.0} : cplx{0.0, 0.0};
    const double sgn = (d % 2 == 0) ? 1.0 : -1.0;
    for (int n = 1; n <= nmax; ++n) {
        qsq *= qn;
        qn *= q2;
        ep *= e;
        em *= einv;
        cplx coef = 1.0;
        for (int j = 0; j < d; ++j) coef *= 2.0 * pi * iunit * double(n);
        sum += qsq * coef * (ep + sgn * em);
    }
    return sum;
}

}  // namespace detail

// theta(z, tau), truncated series with tail below ctx.tol.
inline cplx theta(cplx z, const ThetaContext& ctx) { return detail::theta_series(z, ctx, 0); }

// d/dz theta(z, tau), termwise.
inline cplx theta_prime(cplx z, const ThetaContext& ctx) { return detail::theta_series(z, ctx, 1); }

inline cplx theta_d2(cplx z, const ThetaContext& ctx) { return detail::theta_series(z, ctx, 2); }
inline cplx theta_d3(cplx z, const ThetaContext& ctx) { return detail::theta_series(z, ctx, 3); }

// Reduce z by the (1, tau) lattice; logderiv picks up -2 pi i per +tau step.
inline cplx theta_lattice_reduce(cplx z, const ThetaContext& ctx, long& n_tau) {
    n_tau = std::lround(std::imag(z) / std::imag(ctx.tau));
    cplx z0 = z - double(n_tau) * ctx.tau;
    z0 -= std::round(std::real(z0));
    return z0;
}

// theta'/theta with lattice reduction; single-valued meromorphic.
// Throws near_theta_zero close to the zeros z = 1/2 + tau/2 mod (1, tau).
inline cplx theta_logderiv(cplx z, const ThetaContext& ctx) {
    long n;
    cplx z0 = theta_lattice_reduce(z, ctx, n);
    cplx t0 = theta(z0, ctx);
    cplx t1 = theta_prime(z0, ctx);
    if (std::abs(t0) < ctx.tol * std::abs(t1))
        throw near_theta_zero("theta_logderiv: argument within tolerance of a theta zero");
    return t1 / t0 - 2.0 * pi * iunit * double(n);
}

// (theta'/theta)'  (z-derivative of the logderiv; lattice-shift term drops).
inline cplx theta_logderiv_prime(cplx z, const ThetaContext& ctx) {
    long n;
    cplx z0 = theta_lattice_reduce(z, ctx, n);
    cplx t0 = theta(z0, ctx);
    cplx t1 = theta_prime(z0, ctx);
    if (std::abs(t0) < ctx.tol * std::max(1.0, std::abs(t1)))
        throw near_theta_zero("theta_logderiv_prime: near a theta zero");
    cplx t2 = theta_d2(z0, ctx);
    cplx l = t1 / t0;
    return t2 / t0 - l * l;
}

// (theta'/theta)''
inline cplx theta_logderiv_second(cplx z, const ThetaContext& ctx) {
    long n;
    cplx z0 = theta_lattice_reduce(z, ctx, n);
    cplx t0 = theta(z0, ctx);
    cplx t1 = theta_prime(z0, ctx);
    if (std::abs(t0) < ctx.tol * std::max(1.0, std::abs(t1)))
        throw near_theta_zero("theta_logderiv_second: near a theta zero");
    cplx t2 = theta_d2(z0, ctx);
    cplx t3 = theta_d3(z0, ctx);
    cplx l = t1 / t0;
    return t3 / t0 - 3.0 * t2 * t1 / (t0 * t0) + 2.0 * l * l * l;
}

// |theta| relative to scale, used to screen arguments near theta zeros.
inline bool near_theta_zero_at(cplx z, const ThetaContext& ctx, double rel) {
    long n;
    cplx z0 = theta_lattice_reduce(z, ctx, n);
    return std::abs(theta(z0, ctx)) < rel;
}

}  // namespace pvell

#endif
