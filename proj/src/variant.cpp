#include "zvdl/variant.hpp"

#include <cmath>
#include <sstream>

#include "zvdl/error.hpp"

namespace zvdl {
namespace {

Complex times_exp(Complex value, Complex w) {
    if (is_overflow(value)) return overflow_sentinel();
    if (w.real() > kExpOverflow) return overflow_sentinel();
    return value * std::exp(w);
}

}  // namespace

RaySpec::RaySpec(Complex u) : u_(u) {
    if (std::abs(std::abs(u) - 1.0) > 1e-12) {
        std::ostringstream os;
        os << "ray direction must have unit modulus, got |u| = " << std::abs(u);
        throw Error(Errc::invalid_argument, os.str());
    }
    if (std::abs(u + 1.0) < 1e-12) {
        throw Error(Errc::invalid_argument, "u = -1 is excluded");
    }
}

RaySpec RaySpec::from_angle(double angle) {
    const Complex u = std::polar(1.0, angle);
    return RaySpec(u / std::abs(u));
}

GenericFunction GenericFunction::with_finite_difference(Fn value, double h) {
    Fn deriv = [value, h](Complex s) { return (value(s + h) - value(s - h)) / (2.0 * h); };
    return GenericFunction(std::move(value), std::move(deriv));
}

GenericFunction GenericFunction::zeta(const EvalParams& p) {
    return GenericFunction([p](Complex s) { return zvdl::zeta(s, p); },
                           [p](Complex s) { return zvdl::zeta_deriv(s, p); });
}

GenericFunction GenericFunction::identity() {
    return GenericFunction([](Complex s) { return s; }, [](Complex) { return Complex(1.0, 0.0); });
}

Complex v(Complex z, Complex s, const EvalParams& p) { return times_exp(zeta(s, p), z * s); }

Complex v_deriv(Complex z, Complex s, const EvalParams& p) {
    const ZetaValue zv = zeta_with_deriv(s, p);
    return times_exp(zv.deriv + z * zv.value, z * s);
}

Complex v_g(const GenericFunction& g, Complex z, Complex s) { return times_exp(g(s), z * s); }

Complex v_g_deriv(const GenericFunction& g, Complex z, Complex s) {
    return times_exp(g.deriv(s) + z * g(s), z * s);
}

Complex fix_residual(Complex z, Complex s, const EvalParams& p) {
    const Complex value = v(z, s, p);
    if (is_overflow(value)) return value;
    return value - s;
}

Complex scaled_fix_residual(Complex z, Complex s, const EvalParams& p) {
    const Complex w = -z * s;
    if (w.real() > kExpOverflow) return overflow_sentinel();
    return zeta(s, p) - s * std::exp(w);
}

}  // namespace zvdl
