#pragma once

// High-precision reference values for the tests. Built on MPFR through
// boost::multiprecision and deliberately sharing no code with the library:
// zeta comes from the Borwein alternating series (not Euler-Maclaurin), the
// gamma function from a shifted Stirling series with MPFR Bernoulli numbers.

#include <boost/math/special_functions/bernoulli.hpp>
#include <boost/multiprecision/mpfr.hpp>
#include <cmath>
#include <complex>
#include <vector>

namespace oracle {

using Real = boost::multiprecision::number<boost::multiprecision::mpfr_float_backend<80>>;

struct HC {
    Real re, im;
};

inline HC operator+(const HC& a, const HC& b) { return {a.re + b.re, a.im + b.im}; }
inline HC operator-(const HC& a, const HC& b) { return {a.re - b.re, a.im - b.im}; }
inline HC operator*(const HC& a, const HC& b) { return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re}; }
inline HC operator*(const Real& a, const HC& b) { return {a * b.re, a * b.im}; }
inline HC operator/(const HC& a, const HC& b) {
    const Real d = b.re * b.re + b.im * b.im;
    return {(a.re * b.re + a.im * b.im) / d, (a.im * b.re - a.re * b.im) / d};
}

inline HC hexp(const HC& z) {
    const Real m = exp(z.re);
    return {m * cos(z.im), m * sin(z.im)};
}

inline HC hlog(const HC& z) { return {log(sqrt(z.re * z.re + z.im * z.im)), atan2(z.im, z.re)}; }

inline HC hsin(const HC& z) { return {sin(z.re) * cosh(z.im), cos(z.re) * sinh(z.im)}; }

inline HC from(std::complex<double> z) { return {Real(z.real()), Real(z.imag())}; }

inline std::complex<double> to_double(const HC& z) {
    return {static_cast<double>(z.re), static_cast<double>(z.im)};
}

inline Real pi() { return boost::math::constants::pi<Real>(); }

/// log Gamma(z) up to a multiple of 2 pi i; Re z > 0.
inline HC log_gamma(HC z) {
    HC shift{Real(0), Real(0)};
    while (z.re < 60) {
        shift = shift + hlog(z);
        z.re += 1;
    }
    HC sum = (z - HC{Real(0.5), Real(0)}) * hlog(z) - z;
    sum.re += log(2 * pi()) / 2;
    const HC zz = z * z;
    HC zpow = z;
    for (int k = 1; k <= 30; ++k) {
        const Real b = boost::math::bernoulli_b2n<Real>(k);
        sum = sum + HC{b / (Real(2 * k) * (2 * k - 1)), Real(0)} / zpow;
        zpow = zpow * zz;
    }
    return sum - shift;
}

/// Borwein's series; Re s >= 1/2, s != 1.
inline HC zeta_borwein(const HC& s) {
    const double t = std::abs(static_cast<double>(s.im));
    const int n = static_cast<int>(std::ceil((M_PI * t + 40.0 * std::log(10.0) + std::log(1.0 + 2.0 * t)) /
                                             std::log(3.0 + std::sqrt(8.0)))) + 10;
    std::vector<Real> d(n + 1);
    Real term = 1, acc = 1;
    d[0] = 1;
    for (int i = 0; i < n; ++i) {
        term *= Real(4) * (n + i) * (n - i) / (Real(2 * i + 1) * (2 * i + 2));
        acc += term;
        d[i + 1] = acc;
    }
    HC sum{Real(0), Real(0)};
    for (int k = 0; k < n; ++k) {
        const HC pw = hexp(Real(-1) * (s * HC{log(Real(k + 1)), Real(0)}));
        const Real w = (d[k] - d[n]) / d[n];
        sum = sum + (k % 2 == 0 ? w : Real(-w)) * pw;
    }
    const HC one_minus = HC{Real(1), Real(0)} - hexp((HC{Real(1), Real(0)} - s) * HC{log(Real(2)), Real(0)});
    return Real(-1) * (sum / one_minus);
}

/// zeta(s) for any s != 1; the functional equation covers Re s < 1/2.
inline HC zeta(const HC& s) {
    if (s.re == 0 && s.im == 0) return {Real(-0.5), Real(0)};
    if (s.re >= 0.5) return zeta_borwein(s);
    const HC one{Real(1), Real(0)};
    const HC w = one - s;
    const HC factor = hexp(s * HC{log(Real(2)), Real(0)} + (s - one) * HC{log(pi()), Real(0)} + log_gamma(w)) *
                      hsin((pi() / 2) * s);
    return factor * zeta_borwein(w);
}

inline std::complex<double> zeta(std::complex<double> s) { return to_double(zeta(from(s))); }

/// Riemann-Siegel theta and Z in high precision.
inline Real theta(const Real& t) {
    const HC lg = log_gamma(HC{Real(0.25), t / 2});
    return lg.im - t / 2 * log(pi());
}

inline Real hardy_z(const Real& t) {
    const HC z = zeta(HC{Real(0.5), t});
    const Real th = theta(t);
    return z.re * cos(th) - z.im * sin(th);
}

/// Zeros of Z on [t0, t1] by a sign scan with the given step, each bisected to tol.
inline std::vector<double> zeros_by_bisection(double t0, double t1, double step, double tol = 1e-13) {
    std::vector<double> out;
    Real a = t0;
    Real za = hardy_z(a);
    for (double tb = t0 + step; tb <= t1 + 1e-12; tb += step) {
        Real b = tb;
        Real zb = hardy_z(b);
        if (sign(za) != sign(zb)) {
            Real lo = a, hi = b, zlo = za;
            while (hi - lo > tol) {
                const Real mid = (lo + hi) / 2;
                const Real zm = hardy_z(mid);
                if (sign(zm) == sign(zlo)) {
                    lo = mid;
                    zlo = zm;
                } else {
                    hi = mid;
                }
            }
            out.push_back(static_cast<double>((lo + hi) / 2));
        }
        a = b;
        za = zb;
    }
    return out;
}

}  // namespace oracle
