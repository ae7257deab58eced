#ifndef PVELL_CURVE_HPP
#define PVELL_CURVE_HPP

#include <array>
#include <cmath>
#include <optional>
#include <vector>

#include "pvell/gauss.hpp"
#include "pvell/types.hpp"

namespace pvell {

// Branch-consistent evaluation of w(A,z) = sqrt((1-z^2)(A-z^2)) on the upper
// sheet of Pi*, cut along [-1,-k] u [k,1] with k = A^{1/2}, 0 <= Re k <= 1.
// The branch is anchored at z = iR by z^{-1} sqrt(A-z^2) -> i, z^{-1} sqrt(1-z^2) -> i
// and carried along paths by stepwise sign continuation.
struct CurveBranch {
    cplx A{};
    cplx k{};
    double safety = 1e-3;  // branch-point proximity radius

    explicit CurveBranch(cplx A_, double safety_ = 1e-3) : A(A_), safety(safety_) {
        k = std::sqrt(A);
        if (std::real(k) < 0.0) k = -k;
    }

    std::array<cplx, 4> branch_points() const { return {k, -k, cplx{1.0}, cplx{-1.0}}; }

    double dist_to_branch_points(cplx z) const {
        double d = 1e300;
        for (cplx b : branch_points()) d = std::min(d, std::abs(z - b));
        return d;
    }

    // sqrt((1-z^2)(A-z^2)) with the principal square root; sign is meaningless
    // until continued.
    cplx w_unsigned(cplx z) const { return std::sqrt((1.0 - z * z) * (A - z * z)); }

    // Anchor value at z = iR, R large: w ~ -z^2 = R^2 (> 0).
    cplx anchor_point() const { return iunit * (4.0 * (1.0 + std::abs(A)) + 6.0); }

    cplx anchor_value() const {
        cplx z = anchor_point();
        return -z * z * std::sqrt(1.0 - 1.0 / (z * z)) * std::sqrt(1.0 - A / (z * z));
    }
};

namespace detail {

inline double seg_point_dist(cplx a, cplx b, cplx p) {
    cplx d = b - a;
    double L2 = std::norm(d);
    if (L2 == 0.0) return std::abs(p - a);
    double t = std::clamp(std::real(std::conj(d) * (p - a)) / L2, 0.0, 1.0);
    return std::abs(p - (a + t * d));
}

inline double seg_seg_dist(cplx a1, cplx b1, cplx a2, cplx b2) {
    // segments in the plane; fine-grained sampling is enough at our scales
    double d = 1e300;
    const int n = 16;
    for (int i = 0; i <= n; ++i) {
        double t = double(i) / n;
        d = std::min(d, seg_point_dist(a2, b2, a1 + t * (b1 - a1)));
        d = std::min(d, seg_point_dist(a1, b1, a2 + t * (b2 - a2)));
    }
    return d;
}

// Continue w along the straight segment from (z0, w0) to z1; subdivides until
// each step is small relative to the distance to the nearest branch point.
inline cplx continue_segment(const CurveBranch& c, cplx z0, cplx w0, cplx z1, int depth = 0) {
    double L = std::abs(z1 - z0);
    double dmin = std::min(c.dist_to_branch_points(z0), c.dist_to_branch_points(z1));
    cplx mid = (z0 + z1) / 2.0;
    dmin = std::min(dmin, c.dist_to_branch_points(mid));
    if (dmin < c.safety)
        throw branch_point_proximity("w continuation path within safety radius of a branch point");
    if (L > 0.5 * dmin && depth < 48) {
        cplx wm = continue_segment(c, z0, w0, mid, depth + 1);
        return continue_segment(c, mid, wm, z1, depth + 1);
    }
    cplx cand = c.w_unsigned(z1);
    return (std::abs(cand - w0) <= std::abs(-cand - w0)) ? cand : -cand;
}

// Path from `from` to `to` avoiding the two cuts by `clear`; waypoints are
// pushed out sideways from whichever cut blocks the straight segment.
inline void route_avoiding_cuts(const CurveBranch& c, cplx from, cplx to, double clear,
                                std::vector<cplx>& out, int depth = 0) {
    const std::array<std::pair<cplx, cplx>, 2> cuts = {
        std::make_pair(c.k, cplx{1.0}), std::make_pair(-c.k, cplx{-1.0})};
    for (const auto& [p, q] : cuts) {
        if (seg_seg_dist(from, to, p, q) < clear && depth < 8) {
            cplx mid = (p + q) / 2.0;
            cplx dir = (q - p) / std::abs(q - p);
            cplx nrm = iunit * dir;
            double push = std::abs(q - p) / 2.0 + 3.0 * clear;
            cplx w1 = mid + push * nrm;
            cplx w2 = mid - push * nrm;
            cplx wp = (std::abs(w1 - from) + std::abs(w1 - to) <= std::abs(w2 - from) + std::abs(w2 - to))
                          ? w1 : w2;
            // if the better side still collides with the other cut, take the other
            bool ok = true;
            for (const auto& [p2, q2] : cuts)
                if (seg_seg_dist(from, wp, p2, q2) < clear || seg_seg_dist(wp, to, p2, q2) < clear)
                    ok = false;
            if (!ok) wp = (wp == w1) ? w2 : w1;
            route_avoiding_cuts(c, from, wp, clear, out, depth + 1);
            route_avoiding_cuts(c, wp, to, clear, out, depth + 1);
            return;
        }
    }
    out.push_back(to);
}

}  // namespace detail

// Upper-sheet value of w at z, by continuation from the anchor along a path
// that stays off the cuts.
inline cplx w_branch(const CurveBranch& c, cplx z) {
    if (c.dist_to_branch_points(z) < c.safety)
        throw branch_point_proximity("w_branch: z within safety radius of a branch point");
    std::vector<cplx> path{c.anchor_point()};
    double clear = std::max(2.0 * c.safety, 0.02);
    detail::route_avoiding_cuts(c, c.anchor_point(), z, clear, path);
    cplx w = c.anchor_value();
    for (size_t i = 1; i < path.size(); ++i)
        w = detail::continue_segment(c, path[i - 1], w, path[i]);
    return w;
}

// Closed polyline realizing a homology cycle; w is tracked continuously along
// it (through the cuts where the cycle passes between sheets).
struct CyclePath {
    char id = 'a';
    std::vector<cplx> nodes;  // closed: nodes.front() == nodes.back()
    int gl_order = 32;
};

// Cycle a: stadium around the segment [-k, k] (passes through both cuts; the
// tracked branch returns to itself).  Cycle b: stadium around the cut [-1,-k],
// traversed clockwise so that Omega_b = +2iK' for real A in (0,1).
inline std::pair<CyclePath, CyclePath> build_cycles(const CurveBranch& c) {
    const cplx k = c.k;
    double gmin = 1e300;
    auto bps = c.branch_points();
    for (size_t i = 0; i < bps.size(); ++i)
        for (size_t j = i + 1; j < bps.size(); ++j)
            gmin = std::min(gmin, std::abs(bps[i] - bps[j]));
    if (gmin < 2.0 * std::max(c.safety, 1e-2) || std::abs(k) < 5e-3)
        throw branch_point_proximity("build_cycles: branch points nearly collide (modulus degenerating)");

    auto stadium = [&](cplx pa, cplx pb, double d, bool clockwise) {
        cplx e = (pb - pa) / std::abs(pb - pa);
        cplx n = iunit * e;
        std::vector<cplx> nodes;
        const int nseg = 24, ncap = 24;
        for (int i = 0; i <= nseg; ++i)
            nodes.push_back(pa + d * n + (pb - pa) * (double(i) / nseg));
        for (int i = 1; i <= ncap; ++i) {
            double th = pi * double(i) / ncap;
            nodes.push_back(pb + d * (std::cos(th) * n + std::sin(th) * e));
        }
        for (int i = 1; i <= nseg; ++i)
            nodes.push_back(pb - d * n + (pa - pb) * (double(i) / nseg));
        for (int i = 1; i <= ncap; ++i) {
            double th = pi * double(i) / ncap;
            nodes.push_back(pa + d * (-std::cos(th) * n - std::sin(th) * e));
        }
        if (clockwise) std::reverse(nodes.begin(), nodes.end());
        return nodes;
    };

    double d_spec = std::max(0.05, 0.1 * gmin);
    // clearance must not reach the outer branch points +-1
    double d_a = std::min({d_spec, 0.4 * std::abs(1.0 - k), 0.4 * std::abs(1.0 + k)});
    CyclePath a;
    a.id = 'a';
    a.nodes = stadium(-k, k, d_a, false);

    double d_b = std::min({d_spec, 0.4 * std::abs(1.0 - k), 0.4 * (2.0 * std::abs(k))});
    CyclePath b;
    b.id = 'b';
    b.nodes = stadium(cplx{-1.0}, -k, d_b, true);
    return {a, b};
}

// One cycle's periods: Omega = oint dz/w and E = oint (A - z^2)/w dz, with w
// tracked continuously.  Composite Gauss-Legendre per edge; edges are split
// until shorter than their distance to the nearest branch point, then the
// order is doubled for an error estimate.
struct PeriodPair {
    cplx Omega{};
    cplx E{};
    double err = 0.0;
};

inline PeriodPair integrate_cycle(const CurveBranch& c, const CyclePath& cyc, cplx w_start,
                                  double tol = 1e-12) {
    // split edges
    std::vector<cplx> pts;
    pts.push_back(cyc.nodes.front());
    for (size_t i = 1; i < cyc.nodes.size(); ++i) {
        cplx a = cyc.nodes[i - 1], b = cyc.nodes[i];
        double dmin = std::min(c.dist_to_branch_points(a), c.dist_to_branch_points(b));
        int parts = std::max(1, (int)std::ceil(std::abs(b - a) / (0.8 * dmin)));
        for (int j = 1; j <= parts; ++j) pts.push_back(a + (b - a) * (double(j) / parts));
    }

    auto run = [&](int order) {
        const auto& gr = gauss_rule(order);
        cplx w_prev = w_start;
        cplx om{}, en{};
        for (size_t i = 1; i < pts.size(); ++i) {
            cplx a = pts[i - 1], b = pts[i];
            cplx mid = (a + b) / 2.0, half = (b - a) / 2.0;
            cplx so{}, se{};
            for (int j = 0; j < order; ++j) {
                cplx z = mid + half * gr.x[j];
                cplx cand = c.w_unsigned(z);
                cplx w = (std::abs(cand - w_prev) <= std::abs(-cand - w_prev)) ? cand : -cand;
                w_prev = w;
                so += gr.w[j] / w;
                se += gr.w[j] * (c.A - z * z) / w;
            }
            om += so * half;
            en += se * half;
        }
        // closure check: continue to the start node once more
        cplx cand = c.w_unsigned(pts.front());
        cplx w_end = (std::abs(cand - w_prev) <= std::abs(-cand - w_prev)) ? cand : -cand;
        return std::tuple{om, en, std::abs(w_end - w_start)};
    };

    auto [om1, en1, cl1] = run(cyc.gl_order);
    auto [om2, en2, cl2] = run(2 * cyc.gl_order);
    double err = std::max(std::abs(om1 - om2), std::abs(en1 - en2));
    if (err > tol) {
        auto [om3, en3, cl3] = run(4 * cyc.gl_order);
        err = std::max(std::abs(om2 - om3), std::abs(en2 - en3));
        om2 = om3;
        en2 = en3;
        if (err > 100.0 * tol)
            throw numerical_error("integrate_cycle: quadrature refinement not converging");
    }
    if (cl2 > 1e-6 * std::abs(w_start))
        throw numerical_error("integrate_cycle: branch did not close along the cycle");
    return {om2, en2, err};
}

// All four periods of the curve.
struct Periods {
    cplx Omega_a{}, Omega_b{}, E_a{}, E_b{};
    double err = 0.0;
};

inline Periods periods(const CurveBranch& c, double tol = 1e-12) {
    auto [ca, cb] = build_cycles(c);
    cplx wa = w_branch(c, ca.nodes.front());
    cplx wb = w_branch(c, cb.nodes.front());
    auto pa = integrate_cycle(c, ca, wa, tol);
    auto pb = integrate_cycle(c, cb, wb, tol);
    return {pa.Omega, pb.Omega, pa.E, pb.E, std::max(pa.err, pb.err)};
}

// Boutroux residual (Re e^{i phi} E_a, Re e^{i phi} E_b).
inline std::pair<double, double> boutroux_residual(double phi, const CurveBranch& c,
                                                   double tol = 1e-12) {
    Periods p = periods(c, tol);
    cplx e = ray_dir(phi);
    return {std::real(e * p.E_a), std::real(e * p.E_b)};
}

namespace detail {

inline BoutrouxData make_boutroux_data(double phi, cplx A, const Periods& p) {
    BoutrouxData bd;
    bd.phi = phi;
    bd.A = A;
    bd.k = std::sqrt(A);
    if (std::real(bd.k) < 0.0) bd.k = -bd.k;
    bd.Omega_a = p.Omega_a;
    bd.Omega_b = p.Omega_b;
    bd.E_a = p.E_a;
    bd.E_b = p.E_b;
    bd.tau0 = p.Omega_b / p.Omega_a;
    if (!(std::imag(bd.tau0) > 0.0))
        throw numerical_error("BoutrouxData: Im tau0 <= 0 (orientation violated)");
    bd.nome = std::exp(iunit * pi * bd.tau0);
    cplx e = ray_dir(phi);
    bd.residual_a = std::real(e * p.E_a);
    bd.residual_b = std::real(e * p.E_b);
    return bd;
}

}  // namespace detail

// Damped Newton on (Re A, Im A) -> boutroux_residual, Jacobian by central
// differences.  Without a seed, a coarse grid search over
// Re A in [-1,2] x Im A in [-2,2] supplies one.
inline BoutrouxData solve_boutroux(double phi, std::optional<cplx> seed = std::nullopt,
                                   double res_tol = 1e-11) {
    if (!(std::abs(phi) > 0.0 && std::abs(phi) < pi / 2.0))
        throw domain_error("solve_boutroux: need 0 < |phi| < pi/2");

    auto resid = [&](cplx A, double qtol) -> std::pair<double, double> {
        CurveBranch c(A);
        return boutroux_residual(phi, c, qtol);
    };

    cplx A0;
    if (seed) {
        A0 = *seed;
    } else {
        double best = 1e300;
        const int ngrid = 41;
        for (int i = 0; i < ngrid; ++i) {
            for (int j = 0; j < ngrid; ++j) {
                cplx A{-1.0 + 3.0 * i / (ngrid - 1), -2.0 + 4.0 * j / (ngrid - 1)};
                if (std::abs(A) < 0.06 || std::abs(A - 1.0) < 0.06) continue;
                try {
                    auto [r1, r2] = resid(A, 1e-6);
                    double r = r1 * r1 + r2 * r2;
                    if (r < best) {
                        best = r;
                        A0 = A;
                    }
                } catch (const numerical_error&) {
                } catch (const domain_error&) {
                }
            }
        }
        if (best == 1e300) throw non_convergence("solve_boutroux: grid search found no viable seed");
    }

    cplx A = A0;
    auto [r1, r2] = resid(A, 1e-12);
    double rn = std::hypot(r1, r2);
    for (int iter = 0; iter < 60 && rn > res_tol; ++iter) {
        if (std::abs(A) < 0.01 || std::abs(A - 1.0) < 0.01)
            throw non_convergence("solve_boutroux: modulus degenerating during iteration");
        double h = std::max(1e-7, 1e-7 * std::abs(A));
        auto [ra1, ra2] = resid(A + h, 1e-12);
        auto [rb1, rb2] = resid(A - h, 1e-12);
        auto [rc1, rc2] = resid(A + iunit * h, 1e-12);
        auto [rd1, rd2] = resid(A - iunit * h, 1e-12);
        double j11 = (ra1 - rb1) / (2 * h), j12 = (rc1 - rd1) / (2 * h);
        double j21 = (ra2 - rb2) / (2 * h), j22 = (rc2 - rd2) / (2 * h);
        double det = j11 * j22 - j12 * j21;
        if (std::abs(det) < 1e-300) throw non_convergence("solve_boutroux: singular Jacobian");
        double dx = (-r1 * j22 + r2 * j12) / det;
        double dy = (-j11 * r2 + j21 * r1) / det;
        double lam = 1.0;
        cplx Anew = A;
        double rn_new = rn;
        for (int halv = 0; halv < 40; ++halv) {
            Anew = A + lam * cplx{dx, dy};
            try {
                auto [n1, n2] = resid(Anew, 1e-12);
                rn_new = std::hypot(n1, n2);
                if (rn_new < rn) break;
            } catch (const numerical_error&) {
            }
            lam /= 2.0;
        }
        if (!(rn_new < rn)) throw non_convergence("solve_boutroux: damping failed to reduce residual");
        A = Anew;
        rn = rn_new;
    }
    if (rn > res_tol) throw non_convergence("solve_boutroux: residual above tolerance after max iterations");

    CurveBranch c(A);
    Periods p = periods(c, 1e-13);
    return detail::make_boutroux_data(phi, A, p);
}

// Sequential continuation along a sorted phi grid, seeding each solve with the
// previous A.  Aborts at the first failure, returning the prefix.
inline std::vector<BoutrouxData> continue_in_phi(const std::vector<double>& phi_grid) {
    std::vector<BoutrouxData> out;
    std::optional<cplx> seed;
    for (double phi : phi_grid) {
        try {
            BoutrouxData bd = solve_boutroux(phi, seed);
            seed = bd.A;
            out.push_back(bd);
        } catch (const numerical_error&) {
            break;
        }
    }
    return out;
}

}  // namespace pvell

#endif
