#include "zvdl/zeta.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <sstream>

#include "zvdl/error.hpp"

namespace zvdl {
namespace {

using std::numbers::pi;
constexpr Complex kI{0.0, 1.0};

// B_2, B_4, ..., B_30.
constexpr std::array<double, 15> kBernoulli2k = {
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
    -3617.0 / 510.0,
    43867.0 / 798.0,
    -174611.0 / 330.0,
    854513.0 / 138.0,
    -236364091.0 / 2730.0,
    8553103.0 / 6.0,
    -23749461029.0 / 870.0,
    8615841276005.0 / 14322.0,
};

// B_2k / (2k)!, built once.
const std::array<double, 15>& bernoulli_over_factorial() {
    static const std::array<double, 15> table = [] {
        std::array<double, 15> t{};
        double fact = 1.0;
        for (std::size_t k = 1; k <= t.size(); ++k) {
            fact *= static_cast<double>((2 * k - 1) * (2 * k));
            t[k - 1] = kBernoulli2k[k - 1] / fact;
        }
        return t;
    }();
    return table;
}

void check_pole(Complex s) {
    if (std::abs(s - 1.0) < kPoleGuard) {
        std::ostringstream os;
        os << "zeta has a simple pole at s = 1 (s = " << s << ")";
        throw Error(Errc::pole, os.str());
    }
}

// log sin(w) and log cos(w), stable when |Im w| is large. Imaginary parts are
// only meaningful modulo 2 pi.
Complex log_sin(Complex w) {
    const double b = w.imag();
    if (b > 15.0) {
        return -kI * w + Complex(-std::numbers::ln2, pi / 2) + std::log(1.0 - std::exp(2.0 * kI * w));
    }
    if (b < -15.0) {
        return kI * w + Complex(-std::numbers::ln2, -pi / 2) + std::log(1.0 - std::exp(-2.0 * kI * w));
    }
    return std::log(std::sin(w));
}

Complex log_cos(Complex w) {
    const double b = w.imag();
    if (b > 15.0) {
        return -kI * w - std::numbers::ln2 + std::log(1.0 + std::exp(2.0 * kI * w));
    }
    if (b < -15.0) {
        return kI * w - std::numbers::ln2 + std::log(1.0 + std::exp(-2.0 * kI * w));
    }
    return std::log(std::cos(w));
}

struct EmResult {
    ZetaValue z;
    double error_estimate;
};

// Euler-Maclaurin with cutoff n and Bernoulli terms up to B_{2p}.
EmResult euler_maclaurin(Complex s, int n, int order) {
    const auto& coef = bernoulli_over_factorial();
    const int p = order / 2;

    Complex sum = 0.0;
    Complex dsum = 0.0;
    for (int k = 1; k < n; ++k) {
        const double lk = std::log(static_cast<double>(k));
        const Complex term = std::exp(-s * lk);
        sum += term;
        dsum -= lk * term;
    }

    const double nn = static_cast<double>(n);
    const double ln = std::log(nn);
    const Complex n_ms = std::exp(-s * ln);  // N^{-s}
    const Complex sm1 = s - 1.0;

    sum += nn * n_ms / sm1 + 0.5 * n_ms;
    dsum += -ln * nn * n_ms / sm1 - nn * n_ms / (sm1 * sm1) - 0.5 * ln * n_ms;

    // T_k = c_k P_k(s) N^{-s-2k+1}, P_k = s (s+1) ... (s+2k-2).
    Complex poly = s;
    Complex dpoly = 1.0;
    Complex npow = n_ms / nn;  // N^{-s-1}
    Complex last = 0.0;
    for (int k = 1; k <= p; ++k) {
        const Complex term = coef[k - 1] * poly * npow;
        sum += term;
        dsum += coef[k - 1] * (dpoly - ln * poly) * npow;
        last = term;
        // advance to P_{k+1} = P_k (s+2k-1)(s+2k)
        for (int j = 2 * k - 1; j <= 2 * k; ++j) {
            dpoly = dpoly * (s + double(j)) + poly;
            poly *= (s + double(j));
        }
        npow /= nn * nn;
    }
    // The remainder after the last correction is bounded by the first omitted
    // term times |s + 2p + 1| / (Re s + 2p + 1).
    double est = std::abs(last);
    if (p < static_cast<int>(coef.size())) {
        const Complex next = coef[p] * poly * npow;
        est = std::abs(next) * std::abs(s + double(2 * p + 1)) / std::max(1.0, s.real() + 2 * p + 1);
    }
    return {{sum, dsum}, est};
}

// Plain Dirichlet series when Re s is large enough for a handful of terms.
ZetaValue dirichlet_direct(Complex s) {
    const double sigma = s.real();
    Complex sum = 1.0;
    Complex dsum = 0.0;
    for (int k = 2;; ++k) {
        const double lk = std::log(static_cast<double>(k));
        const Complex term = std::exp(-s * lk);
        sum += term;
        dsum -= lk * term;
        // tail sum_{n>k} n^{-sigma} <= k^{1-sigma} / (sigma - 1)
        if (std::exp((1.0 - sigma) * lk) / (sigma - 1.0) < 1e-18) break;
    }
    return {sum, dsum};
}

constexpr double kDirectThreshold = 20.0;

EmResult zeta_right(Complex s, const EvalParams& p) {
    if (s.real() >= kDirectThreshold && !p.em_terms) {
        return {dirichlet_direct(s), 0.0};
    }
    return euler_maclaurin(s, p.cutoff_for(s), p.bernoulli_order);
}

void check_accuracy(Complex s, Complex value, double est, const EvalParams& p) {
    const double allowed = std::max(p.target_abs_err, 1e-12 * std::abs(value));
    if (est > allowed) {
        std::ostringstream os;
        os << "truncation estimate " << est << " exceeds " << allowed << " at s = " << s
           << "; raise em_terms or bernoulli_order";
        throw Error(Errc::accuracy_not_reached, os.str());
    }
}

// Functional equation zeta(s) = chi(s) zeta(1-s) and its derivative
//   chi'(s) = chi(s) (log 2pi - psi(1-s)) + (pi/2) A(s) cos(pi s/2),
// with A(s) = 2^s pi^{s-1} Gamma(1-s). Everything is assembled in logs so
// that |Im s| in the hundreds neither overflows nor underflows.
EmResult reflect(Complex s, const EvalParams& p) {
    const Complex t = 1.0 - s;
    const EmResult inner = zeta_right(t, p);
    const Complex log_a = s * std::numbers::ln2 + (s - 1.0) * std::log(pi) + log_gamma(t);
    const Complex half = 0.5 * pi * s;
    const Complex chi = std::exp(log_a + log_sin(half));
    const Complex a_cos = std::exp(log_a + log_cos(half));
    const Complex dchi = chi * (std::log(2.0 * pi) - digamma(t)) + 0.5 * pi * a_cos;

    const Complex value = chi * inner.z.value;
    const Complex deriv = dchi * inner.z.value - chi * inner.z.deriv;
    return {{value, deriv}, std::abs(chi) * inner.error_estimate};
}

EmResult evaluate(Complex s, const EvalParams& p) {
    check_pole(s);
    p.validate();
    // chi(s) zeta(1-s) is 0 * pole at s = 0, so a small disk around the
    // origin stays on the direct route.
    if (s.real() >= 0.5 || std::abs(s) < 0.25) return zeta_right(s, p);
    return reflect(s, p);
}

}  // namespace

void EvalParams::validate() const {
    if (em_terms && *em_terms < 10) {
        throw Error(Errc::invalid_argument, "em_terms must be >= 10");
    }
    if (bernoulli_order < 2 || bernoulli_order > 30 || bernoulli_order % 2 != 0) {
        throw Error(Errc::invalid_argument, "bernoulli_order must be even and in [2, 30]");
    }
    if (!(target_abs_err >= 1e-14)) {
        throw Error(Errc::invalid_argument, "target_abs_err must be >= 1e-14");
    }
}

int EvalParams::cutoff_for(Complex s) const {
    if (em_terms) return *em_terms;
    return std::max(20, static_cast<int>(std::ceil(std::abs(s.imag()))) + 10);
}

ZetaValue zeta_with_deriv(Complex s, const EvalParams& p) {
    const EmResult r = evaluate(s, p);
    check_accuracy(s, r.z.value, r.error_estimate, p);
    return r.z;
}

Complex zeta(Complex s, const EvalParams& p) { return zeta_with_deriv(s, p).value; }

Complex zeta_deriv(Complex s, const EvalParams& p) { return zeta_with_deriv(s, p).deriv; }

ZetaValue zeta_euler_maclaurin(Complex s, const EvalParams& p) {
    check_pole(s);
    p.validate();
    return euler_maclaurin(s, p.cutoff_for(s), p.bernoulli_order).z;
}

ZetaValue zeta_reflected(Complex s, const EvalParams& p) {
    check_pole(s);
    p.validate();
    return reflect(s, p).z;
}

Complex log_gamma(Complex s) {
    if (s.imag() == 0.0 && s.real() <= 0.0 && std::abs(s.real() - std::round(s.real())) < 1e-14) {
        std::ostringstream os;
        os << "Gamma has a pole at " << s.real();
        throw Error(Errc::pole, os.str());
    }
    if (s.real() < 0.5) {
        return std::log(pi) - log_sin(pi * s) - log_gamma(1.0 - s);
    }
    // Shift until Stirling's series is accurate, then undo the shift.
    Complex w = s;
    Complex prod = 1.0;
    while (std::abs(w) < 15.0) {
        prod *= w;
        w += 1.0;
    }
    const Complex inv = 1.0 / w;
    const Complex inv2 = inv * inv;
    Complex series = 0.0;
    Complex pw = inv;
    for (int k = 1; k <= 10; ++k) {
        series += kBernoulli2k[k - 1] / double(2 * k * (2 * k - 1)) * pw;
        pw *= inv2;
    }
    const Complex stirling = (w - 0.5) * std::log(w) - w + 0.5 * std::log(2.0 * pi) + series;
    return stirling - std::log(prod);
}

Complex digamma(Complex s) {
    if (s.real() < 0.5) {
        // psi(s) = psi(1-s) - pi cot(pi s)
        const Complex w = pi * s;
        Complex cot;
        if (w.imag() > 15.0) {
            const Complex e = std::exp(2.0 * kI * w);
            cot = kI * (e + 1.0) / (e - 1.0);
        } else if (w.imag() < -15.0) {
            const Complex e = std::exp(-2.0 * kI * w);
            cot = -kI * (e + 1.0) / (e - 1.0);
        } else {
            cot = std::cos(w) / std::sin(w);
        }
        return digamma(1.0 - s) - pi * cot;
    }
    Complex w = s;
    Complex shift = 0.0;
    while (std::abs(w) < 15.0) {
        shift += 1.0 / w;
        w += 1.0;
    }
    const Complex inv = 1.0 / w;
    const Complex inv2 = inv * inv;
    Complex series = 0.0;
    Complex pw = inv2;
    for (int k = 1; k <= 10; ++k) {
        series += kBernoulli2k[k - 1] / double(2 * k) * pw;
        pw *= inv2;
    }
    return std::log(w) - 0.5 * inv - series - shift;
}

Complex zeta_iterate(Complex s, int n, const EvalParams& p, double escape) {
    if (n < 0) throw Error(Errc::invalid_argument, "iteration count must be non-negative");
    Complex w = s;
    for (int k = 0; k < n; ++k) {
        if (is_overflow(w) || std::abs(w) > escape) return overflow_sentinel();
        w = zeta(w, p);
    }
    if (is_overflow(w) || std::abs(w) > escape) return overflow_sentinel();
    return w;
}

double riemann_siegel_theta(double t) {
    return log_gamma(Complex(0.25, 0.5 * t)).imag() - 0.5 * t * std::log(pi);
}

double hardy_z(double t, const EvalParams& p) {
    const double theta = riemann_siegel_theta(t);
    const Complex z = zeta(Complex(0.5, t), p);
    return (std::polar(1.0, theta) * z).real();
}

std::vector<Complex> zeta_taylor(Complex center, int degree, double radius, int nodes) {
    if (degree < 0 || nodes <= degree || radius <= 0.0) {
        throw Error(Errc::invalid_argument, "zeta_taylor needs radius > 0 and nodes > degree >= 0");
    }
    if (std::abs(center - 1.0) < radius + 0.5) {
        throw Error(Errc::pole, "Taylor circle too close to s = 1");
    }
    std::vector<Complex> samples(nodes);
    for (int j = 0; j < nodes; ++j) {
        samples[j] = zeta(center + std::polar(radius, 2.0 * pi * j / nodes));
    }
    std::vector<Complex> coeffs(degree + 1);
    double rk = 1.0;
    for (int k = 0; k <= degree; ++k) {
        Complex acc = 0.0;
        for (int j = 0; j < nodes; ++j) {
            acc += samples[j] * std::polar(1.0, -2.0 * pi * double(j) * k / nodes);
        }
        coeffs[k] = acc / (double(nodes) * rk);
        rk *= radius;
    }
    return coeffs;
}

}  // namespace zvdl
