#ifndef PVELL_TYPES_HPP
#define PVELL_TYPES_HPP

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace pvell {

using cplx = std::complex<double>;

inline constexpr double pi = 3.141592653589793238462643383279502884;
inline const cplx iunit{0.0, 1.0};

// Numerical failures (non-convergence, step collapse, quadrature trouble).
struct numerical_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Precondition violations (bad arguments, invalid contexts).
struct domain_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct near_theta_zero : numerical_error {
    using numerical_error::numerical_error;
};

struct branch_point_proximity : numerical_error {
    using numerical_error::numerical_error;
};

struct non_convergence : numerical_error {
    using numerical_error::numerical_error;
};

struct step_collapse : numerical_error {
    using numerical_error::numerical_error;
};

// e^{i phi}
inline cplx ray_dir(double phi) { return std::exp(iunit * phi); }

// Decompose z = a*w1 + b*w2 over the reals (w1, w2 R-linearly independent).
inline void lattice_coords(cplx z, cplx w1, cplx w2, double& a, double& b) {
    const double d = std::imag(std::conj(w1) * w2);
    b = std::imag(std::conj(w1) * z) / d;
    a = -std::imag(std::conj(w2) * z) / d;
}

// Reduce z modulo the lattice w1 Z + w2 Z to coefficients in [-1/2, 1/2).
// Returns the reduced point; (m, n) receive the subtracted integers.
inline cplx lattice_reduce(cplx z, cplx w1, cplx w2, long& m, long& n) {
    double a, b;
    lattice_coords(z, w1, w2, a, b);
    m = std::lround(a);
    n = std::lround(b);
    return z - double(m) * w1 - double(n) * w2;
}

inline cplx lattice_reduce(cplx z, cplx w1, cplx w2) {
    long m, n;
    return lattice_reduce(z, w1, w2, m, n);
}

// Distance from z to the lattice p + w1 Z + w2 Z.
inline double lattice_distance(cplx z, cplx p, cplx w1, cplx w2) {
    cplx r = lattice_reduce(z - p, w1, w2);
    double best = std::abs(r);
    for (int i = -1; i <= 1; ++i)
        for (int j = -1; j <= 1; ++j)
            best = std::min(best, std::abs(r - double(i) * w1 - double(j) * w2));
    return best;
}

// The three P_V parameters and the derived coefficients of (P_V).
struct PainleveParams {
    cplx theta0{};
    cplx theta1{};
    cplx theta_inf{};

    cplx a_theta() const { cplx s = theta0 - theta1 + theta_inf; return s * s / 8.0; }
    cplx b_theta() const { cplx s = theta0 - theta1 - theta_inf; return s * s / 8.0; }
    cplx c_theta() const { return 1.0 - theta0 - theta1; }
};

// Boutroux curve data for one ray direction phi.
struct BoutrouxData {
    double phi = 0.0;
    cplx A{};        // modulus squared, the Boutroux solution A_phi
    cplx k{};        // A^{1/2}, normalized 0 <= Re k <= 1
    cplx Omega_a{};  // = 4K
    cplx Omega_b{};  // = 2iK'
    cplx E_a{};      // second-kind period over cycle a
    cplx E_b{};      // second-kind period over cycle b
    cplx tau0{};     // Omega_b / Omega_a
    cplx nome{};     // exp(i pi tau0)
    double residual_a = 0.0;  // Re(e^{i phi} E_a)
    double residual_b = 0.0;  // Re(e^{i phi} E_b)
};

}  // namespace pvell

#endif
