#pragma once

#include <functional>

#include "zvdl/zeta.hpp"

namespace zvdl {

/// Unit direction u of the ray R_u = {x u : x >= 0}; u = -1 is excluded.
class RaySpec {
public:
    /// Throws Errc::invalid_argument unless ||u| - 1| <= 1e-12 and u != -1.
    explicit RaySpec(Complex u);

    static RaySpec positive_real() { return RaySpec(Complex(1.0, 0.0)); }
    /// u = exp(i angle), normalised exactly.
    static RaySpec from_angle(double angle);

    Complex u() const noexcept { return u_; }
    Complex at(double x) const noexcept { return x * u_; }
    bool is_real() const noexcept { return u_ == Complex(1.0, 0.0); }

private:
    Complex u_;
};

/// A function g together with its derivative. Both handles must be safe to
/// call concurrently.
class GenericFunction {
public:
    using Fn = std::function<Complex(Complex)>;

    GenericFunction(Fn value, Fn deriv) : value_(std::move(value)), deriv_(std::move(deriv)) {}

    /// Derivative by central differences with step h.
    static GenericFunction with_finite_difference(Fn value, double h = 1e-6);
    static GenericFunction zeta(const EvalParams& p = {});
    static GenericFunction identity();

    Complex operator()(Complex s) const { return value_(s); }
    Complex deriv(Complex s) const { return deriv_(s); }

private:
    Fn value_;
    Fn deriv_;
};

/// Re(z s) above this makes e^{zs} an overflow.
inline constexpr double kExpOverflow = 700.0;

/// V_z(s) = zeta(s) e^{zs}. Returns overflow_sentinel() when Re(zs) > 700.
Complex v(Complex z, Complex s, const EvalParams& p = {});

/// d/ds V_z(s) = e^{zs} (zeta'(s) + z zeta(s)).
Complex v_deriv(Complex z, Complex s, const EvalParams& p = {});

/// V^g_z(s) = g(s) e^{zs}; v_g(GenericFunction::zeta(), z, s) == v(z, s).
Complex v_g(const GenericFunction& g, Complex z, Complex s);
Complex v_g_deriv(const GenericFunction& g, Complex z, Complex s);

/// V_z(s) - s. Zero exactly on the fixed-point set of V_z.
Complex fix_residual(Complex z, Complex s, const EvalParams& p = {});

/// zeta(s) - s e^{-zs} = e^{-zs} (V_z(s) - s). Same zeros as fix_residual but
/// does not amplify zeta's rounding error by e^{Re(zs)}.
Complex scaled_fix_residual(Complex z, Complex s, const EvalParams& p = {});

}  // namespace zvdl
