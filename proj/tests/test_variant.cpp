#include <cmath>
#include <numbers>

#include "common.hpp"
#include "doctest.h"
#include "zvdl/fixpoint.hpp"
#include "zvdl/variant.hpp"

using namespace zvdl;
using std::numbers::pi;

TEST_CASE("RaySpec validation") {
    CHECK(RaySpec::positive_real().is_real());
    CHECK_THROWS_AS(RaySpec(Complex(2.0, 0.0)), Error);
    CHECK_THROWS_AS(RaySpec(Complex(-1.0, 0.0)), Error);
    const RaySpec r = RaySpec::from_angle(pi / 3);
    CHECK(std::abs(std::abs(r.u()) - 1.0) < 1e-15);
    CHECK(std::abs(r.at(2.0) - 2.0 * r.u()) == 0.0);
}

TEST_CASE("v closed forms") {
    CHECK(std::abs(v(0.0, 2.0) - pi * pi / 6) < 1e-13);
    CHECK(std::abs(v(Complex(3.0, -4.0), 0.0) - (-0.5)) < 1e-14);
    CHECK(std::abs(v(1.0, 2.0) - pi * pi * std::exp(2.0) / 6) < 1e-11);
    CHECK(is_overflow(v(1.0, 800.0)));
}

TEST_CASE("v_deriv") {
    CHECK(std::abs(v_deriv(0.0, 0.0) - (-0.5 * std::log(2 * pi))) < 1e-12);
    CHECK(std::abs(v_deriv(1.0, 0.0) - (-0.5 * std::log(2 * pi) - 0.5)) < 1e-12);
    std::uniform_real_distribution<double> u(-2.0, 2.0), t(-30.0, 30.0);
    const double h = 1e-6;
    for (int k = 0; k < 20; ++k) {
        const Complex z(u(testing::rng()), u(testing::rng()));
        const Complex s(u(testing::rng()), t(testing::rng()));
        if (std::abs(s - 1.0) < 0.2) continue;
        const Complex fd = (v(z, s + h) - v(z, s - h)) / (2 * h);
        CHECK(std::abs(v_deriv(z, s) - fd) <= 1e-6 * std::max(1.0, std::abs(fd)));
    }
}

TEST_CASE("v_g") {
    CHECK(v_g(GenericFunction::identity(), 0.0, Complex(5.0, 2.0)) == Complex(5.0, 2.0));
    const Complex z(0.4, -0.3), s(0.2, 9.0);
    CHECK(v_g(GenericFunction::zeta(), z, s) == v(z, s));
    const auto shifted = GenericFunction::with_finite_difference([](Complex w) { return w - 3.0; });
    CHECK(v_g(shifted, 0.0, 3.0) == 0.0);
    CHECK(std::abs(shifted.deriv(Complex(7.0, 1.0)) - 1.0) < 1e-9);
}

TEST_CASE("fix_residual") {
    CHECK(std::abs(fix_residual(0.0, -0.295905)) < 1e-5);
    CHECK(std::abs(fix_residual(0.0, 0.0) - (-0.5)) < 1e-14);
    const Complex phi = newton_fixpoint(1.0, Complex(0.5, 14.0));
    CHECK(std::abs(fix_residual(1.0, phi)) < 1e-10);
    // the scaled residual differs by the factor e^{-zs}
    const Complex z(0.7, 0.1), s(1.5, 3.0);
    CHECK(std::abs(scaled_fix_residual(z, s) - std::exp(-z * s) * fix_residual(z, s)) < 1e-13);
}
