#include <catch2/catch_amalgamated.hpp>

#include "pvell/theta.hpp"
#include "support.hpp"

using namespace pvell;
using Catch::Approx;

static const cplx tau{0.2, 1.1};

TEST_CASE("theta periodicity and quasi-periodicity") {
    ThetaContext ctx(tau);
    cplx z{0.31, 0.27};
    REQUIRE(std::abs(theta(z + 1.0, ctx) - theta(z, ctx)) < 1e-12);

    cplx lhs = theta(z + tau, ctx);
    cplx rhs = std::exp(-pi * iunit * (tau + 2.0 * z)) * theta(z, ctx);
    REQUIRE(std::abs(lhs - rhs) < 1e-12 * std::abs(rhs));
}

TEST_CASE("theta value at tau = i") {
    // direct series summation at q = e^{ -pi }, >= 30 terms
    ThetaContext ctx(cplx{0.0, 1.0});
    REQUIRE(std::abs(theta(cplx{0.0}, ctx) - 1.0864348112133080146) < 1e-12);
}

TEST_CASE("theta rejects invalid context and far arguments") {
    REQUIRE_THROWS_AS(ThetaContext(cplx{0.3, -0.2}), domain_error);
    ThetaContext ctx(tau);
    REQUIRE_THROWS_AS(theta(cplx{0.0, 200.0}, ctx), domain_error);
}

TEST_CASE("theta_prime matches finite differences") {
    ThetaContext ctx(tau);
    cplx z{0.3, 0.1};
    REQUIRE(std::abs(theta_prime(cplx{0.0}, ctx)) < 1e-13);
    REQUIRE(std::abs(theta_prime(z + 1.0, ctx) - theta_prime(z, ctx)) < 1e-12);
    cplx fd = oracle::fdiff([&](cplx w) { return theta(w, ctx); }, z, 1e-5);
    REQUIRE(std::abs(theta_prime(z, ctx) - fd) < 1e-8);
}

TEST_CASE("theta higher derivatives match finite differences") {
    ThetaContext ctx(tau);
    cplx z{0.17, -0.05};
    cplx fd2 = oracle::fdiff2([&](cplx w) { return theta(w, ctx); }, z, 1e-4);
    REQUIRE(std::abs(theta_d2(z, ctx) - fd2) < 1e-6);
    cplx fd3 = oracle::fdiff([&](cplx w) { return theta_d2(w, ctx); }, z, 1e-5);
    REQUIRE(std::abs(theta_d3(z, ctx) - fd3) < 1e-6);
}

TEST_CASE("theta_logderiv lattice behaviour") {
    ThetaContext ctx(tau);
    cplx z{0.23, 0.12};
    REQUIRE(std::abs(theta_logderiv(cplx{0.0}, ctx)) < 1e-13);
    REQUIRE(std::abs(theta_logderiv(z + 1.0, ctx) - theta_logderiv(z, ctx)) < 1e-11);
    cplx d = theta_logderiv(z + tau, ctx) - (theta_logderiv(z, ctx) - 2.0 * pi * iunit);
    REQUIRE(std::abs(d) < 1e-11);
    // zero of theta at (1 + tau)/2
    REQUIRE_THROWS_AS(theta_logderiv((1.0 + tau) / 2.0, ctx), near_theta_zero);
}

TEST_CASE("theta_logderiv derivative chain") {
    ThetaContext ctx(tau);
    cplx z{0.29, 0.07};
    cplx fd = oracle::fdiff([&](cplx w) { return theta_logderiv(w, ctx); }, z, 1e-5);
    REQUIRE(std::abs(theta_logderiv_prime(z, ctx) - fd) < 1e-8);
    cplx fd2 = oracle::fdiff([&](cplx w) { return theta_logderiv_prime(w, ctx); }, z, 1e-5);
    REQUIRE(std::abs(theta_logderiv_second(z, ctx) - fd2) < 1e-7);
}

TEST_CASE("quasi-periodicity residual over the fundamental cell") {
    ThetaContext ctx(tau);
    double worst = 0.0;
    for (int i = 0; i < 20; ++i) {
        for (int j = 0; j < 20; ++j) {
            cplx z = cplx(i / 20.0, 0.0) + tau * (j / 20.0);
            double scale = std::abs(theta(z, ctx)) + 1e-30;
            worst = std::max(worst, std::abs(theta(z + 1.0, ctx) - theta(z, ctx)) / scale);
            cplx rhs = std::exp(-pi * iunit * (tau + 2.0 * z)) * theta(z, ctx);
            worst = std::max(worst, std::abs(theta(z + tau, ctx) - rhs) / (std::abs(rhs) + 1e-30));
        }
    }
    REQUIRE(worst < 1e-10);
}
