#pragma once

#include <complex>
#include <limits>
#include <optional>
#include <vector>

namespace zvdl {

using Complex = std::complex<double>;

/// Marks a value that left the representable / escape range. Both parts are +inf.
inline Complex overflow_sentinel() noexcept {
    constexpr double inf = std::numeric_limits<double>::infinity();
    return {inf, inf};
}
inline bool is_overflow(Complex c) noexcept { return !std::isfinite(c.real()) || !std::isfinite(c.imag()); }

/// Controls for the Euler-Maclaurin evaluator.
///
/// em_terms is the cutoff N (the first N-1 terms of the Dirichlet series are
/// summed directly). When unset, N = max(20, ceil(|Im s|) + 10) is used at the
/// point where the Euler-Maclaurin sum is actually evaluated. bernoulli_order
/// is the largest Bernoulli index 2p used by the correction terms.
struct EvalParams {
    std::optional<int> em_terms;
    int bernoulli_order = 20;
    double target_abs_err = 1e-12;

    /// Throws Errc::invalid_argument unless em_terms >= 10, bernoulli_order is
    /// even in [2, 30] and target_abs_err >= 1e-14.
    void validate() const;
    int cutoff_for(Complex s) const;
};

inline constexpr double kPoleGuard = 1e-12;
inline constexpr double kDefaultEscape = 1e6;

/// Riemann zeta. Euler-Maclaurin for Re s >= 0.5, functional equation below.
/// Throws Errc::pole inside |s - 1| < 1e-12 and Errc::accuracy_not_reached if
/// the truncation estimate exceeds max(target_abs_err, 1e-12 |zeta(s)|).
Complex zeta(Complex s, const EvalParams& p = {});

/// Analytic derivative (term-wise differentiated Euler-Maclaurin, and the
/// differentiated reflection formula for Re s < 0.5).
Complex zeta_deriv(Complex s, const EvalParams& p = {});

struct ZetaValue {
    Complex value;
    Complex deriv;
};

/// zeta and zeta' from a single pass; what the Newton solvers use.
ZetaValue zeta_with_deriv(Complex s, const EvalParams& p = {});

/// Forced code paths. zeta_euler_maclaurin is valid everywhere but loses
/// accuracy for Re s << 0; zeta_reflected always goes through the functional
/// equation. Used to cross-check the two routes.
ZetaValue zeta_euler_maclaurin(Complex s, const EvalParams& p = {});
ZetaValue zeta_reflected(Complex s, const EvalParams& p = {});

/// log Gamma continued from the positive real axis (Stirling with upward
/// shift, reflection for Re s < 0.5). Only exp(log_gamma) is branch-free;
/// the imaginary part is correct modulo 2 pi. Throws Errc::pole at
/// non-positive integers.
Complex log_gamma(Complex s);

/// Digamma function psi = Gamma'/Gamma.
Complex digamma(Complex s);

/// n-fold iterate of zeta. Returns overflow_sentinel() once an iterate leaves
/// the disk of radius escape (or is not finite); throws Errc::pole if an
/// iterate lands in the pole guard disk.
Complex zeta_iterate(Complex s, int n, const EvalParams& p = {}, double escape = kDefaultEscape);

/// Riemann-Siegel theta, theta(t) = Im log Gamma(1/4 + it/2) - (t/2) log pi.
/// Only defined modulo 2 pi here; see hardy_z.
double riemann_siegel_theta(double t);

/// Hardy's function Z(t) = exp(i theta(t)) zeta(1/2 + it), real for real t.
double hardy_z(double t, const EvalParams& p = {});

/// Taylor coefficients c_0..c_degree of zeta about center, from the
/// trapezoid rule for the Cauchy integral on a circle of the given radius.
/// Throws Errc::pole if the circle comes within 0.5 of s = 1.
std::vector<Complex> zeta_taylor(Complex center, int degree, double radius = 0.25, int nodes = 64);

}  // namespace zvdl
