#ifndef PVELL_GAUSS_HPP
#define PVELL_GAUSS_HPP

#include <cmath>
#include <map>
#include <vector>

namespace pvell {

// Gauss-Legendre rule on [-1, 1], nodes/weights computed by Newton iteration
// on P_n and cached per order.
struct GaussRule {
    std::vector<double> x;
    std::vector<double> w;
};

inline const GaussRule& gauss_rule(int n) {
    static std::map<int, GaussRule> cache;
    auto it = cache.find(n);
    if (it != cache.end()) return it->second;

    GaussRule r;
    r.x.resize(n);
    r.w.resize(n);
    const int m = (n + 1) / 2;
    for (int i = 0; i < m; ++i) {
        double z = std::cos(3.141592653589793 * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p1 = 1.0, p2 = 0.0;
            for (int j = 0; j < n; ++j) {
                double p3 = p2;
                p2 = p1;
                p1 = ((2.0 * j + 1.0) * z * p2 - j * p3) / (j + 1.0);
            }
            pp = n * (z * p1 - p2) / (z * z - 1.0);
            double z1 = z;
            z = z1 - p1 / pp;
            if (std::abs(z - z1) < 1e-15) break;
        }
        r.x[i] = -z;
        r.x[n - 1 - i] = z;
        r.w[i] = 2.0 / ((1.0 - z * z) * pp * pp);
        r.w[n - 1 - i] = r.w[i];
    }
    return cache.emplace(n, std::move(r)).first->second;
}

}  // namespace pvell

#endif
