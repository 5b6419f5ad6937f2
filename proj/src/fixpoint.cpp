#include "zvdl/fixpoint.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace zvdl {
namespace {

using std::numbers::pi;
constexpr double kTwoPiHi = 6.283185307179586;
constexpr double kTwoPiLo = 2.4492935982947064e-16;
constexpr int kDampingLimit = 10;

struct Eval {
    Complex f;
    Complex df;
};

// F = V_z(s) - s, or G = zeta(s) - s e^{-zs} when Re(zs) > 0.
Eval fixpoint_equation(Complex z, Complex s, const EvalParams& p) {
    const ZetaValue zv = zeta_with_deriv(s, p);
    const Complex zs = z * s;
    if (zs.real() > 0.0) {
        const Complex e = std::exp(-zs);
        return {zv.value - s * e, zv.deriv - e * (1.0 - zs)};
    }
    const Complex e = std::exp(zs);
    return {zv.value * e - s, e * (zv.deriv + z * zv.value) - 1.0};
}

// Newton with a leash: gives up once the iterate strays further than leash
// from the seed (keeps evaluations away from huge |Im s|).
std::optional<NewtonResult> try_newton(Complex z, Complex seed, const NewtonConfig& cfg, double leash,
                                       Errc* why = nullptr) {
    Complex s = seed;
    auto fail = [&](Errc code) -> std::optional<NewtonResult> {
        if (why) *why = code;
        return std::nullopt;
    };
    try {
        Eval e = fixpoint_equation(z, s, cfg.eval);
        if (std::abs(e.f) <= residual_bound(cfg, s)) return NewtonResult{s, 0, std::abs(e.f)};
        for (int it = 1; it <= cfg.max_iter; ++it) {
            if (std::abs(e.df) < 1e-14) return fail(Errc::derivative_singular);
            // backtracking: take the largest step 2^-k that lowers |F|
            Complex step = e.f / e.df;
            bool accepted = false;
            for (int k = 0; k <= kDampingLimit && !accepted; ++k, step *= 0.5) {
                const Complex trial = s - step;
                if (std::abs(trial - seed) > leash || std::abs(trial - 1.0) < kPoleGuard) continue;
                const Eval te = fixpoint_equation(z, trial, cfg.eval);
                if (!is_overflow(te.f) && std::isfinite(std::abs(te.f)) && std::abs(te.f) < std::abs(e.f)) {
                    s = trial;
                    e = te;
                    accepted = true;
                }
            }
            if (!accepted) return fail(Errc::no_convergence);
            if (std::abs(e.f) <= residual_bound(cfg, s)) {
                // one polishing step; quadratic convergence makes it nearly free
                if (std::abs(e.df) >= 1e-14) {
                    const Complex polished = s - e.f / e.df;
                    const Eval pe = fixpoint_equation(z, polished, cfg.eval);
                    if (std::abs(pe.f) <= std::abs(e.f)) return NewtonResult{polished, it + 1, std::abs(pe.f)};
                }
                return NewtonResult{s, it, std::abs(e.f)};
            }
        }
    } catch (const Error& err) {
        return fail(err.code() == Errc::pole ? Errc::no_convergence : err.code());
    }
    return fail(Errc::no_convergence);
}

// Local model of the fixed-point equation near a zero lambda of zeta:
//   zeta(lambda + w) = c1 w Q(w),  Q(w) = 1 + q2 w + q3 w^2 + ...
// and V_{xu}(lambda + w) = lambda + w becomes, with L = log w,
//   L = log(lambda + w) - log c1 - log Q(w) - x u w - x u lambda   (mod 2 pi i).
class LocalModel {
public:
    LocalModel(Complex lambda, Complex u, std::vector<Complex> taylor)
        : lambda_(lambda), ulambda_(u * lambda), u_(u) {
        c1_ = taylor.at(1);
        log_c1_ = std::log(c1_);
        for (std::size_t k = 2; k < taylor.size(); ++k) q_.push_back(taylor[k] / c1_);
    }

    Complex center() const { return lambda_; }

    struct Solution {
        Complex log_offset;
        double residual;
    };

    std::optional<Solution> solve(double x) const {
        const Complex base(-x * ulambda_.real(), -mul_mod_2pi(x, ulambda_.imag()));
        const Complex z = x * u_;
        Complex L = std::log(lambda_) - log_c1_ + base;
        double last = 0.0;
        for (int it = 0; it < 40; ++it) {
            const Complex w = L.real() < -700.0 ? Complex(0.0) : std::exp(L);
            Complex q = 1.0, dq = 0.0, wk = 1.0;
            for (std::size_t k = 0; k < q_.size(); ++k) {
                dq += double(k + 1) * q_[k] * wk;
                wk *= w;
                q += q_[k] * wk;
            }
            Complex h = L - (std::log(lambda_ + w) - log_c1_ - std::log(q) - z * w + base);
            h.imag(std::remainder(h.imag(), 2.0 * pi));
            const Complex dh = 1.0 - w * (1.0 / (lambda_ + w) - dq / q - z);
            const Complex step = h / dh;
            L -= step;
            last = std::abs(h);
            if (std::abs(step) <= 4e-16 * std::max(1.0, std::abs(L))) {
                L.imag(std::remainder(L.imag(), 2.0 * pi));
                const double scale = std::abs(c1_) * std::exp(std::max(L.real(), -745.0));
                return Solution{L, scale * last};
            }
        }
        return std::nullopt;
    }

private:
    Complex lambda_;
    Complex ulambda_;
    Complex u_;
    Complex c1_;
    Complex log_c1_;
    std::vector<Complex> q_;
};

std::optional<LocalModel> try_enter_model(Complex phi, const RaySpec& ray, const NewtonConfig& cfg,
                                          const TraceOptions& opts) {
    try {
        const ZetaValue zv = zeta_with_deriv(phi, cfg.eval);
        if (std::abs(zv.deriv) == 0.0 || std::abs(zv.value / zv.deriv) > opts.model_radius) return std::nullopt;
        const Complex lambda = refine_zero(phi, cfg.eval);
        if (std::abs(phi - lambda) >= opts.model_radius) return std::nullopt;
        if (std::abs(zeta(lambda, cfg.eval)) > 1e-10) return std::nullopt;
        if (std::abs(lambda - 1.0) < 1.0) return std::nullopt;
        return LocalModel(lambda, ray.u(), zeta_taylor(lambda, opts.taylor_degree, 0.25, 64));
    } catch (const Error&) {
        return std::nullopt;
    }
}

}  // namespace

Progression::Progression(double dx_, int count_) : dx(dx_), count(count_) {
    if (!(dx > 0.0) || !std::isfinite(dx)) throw Error(Errc::invalid_argument, "progression step must be > 0");
    if (count < 1) throw Error(Errc::invalid_argument, "progression needs at least one member");
}

void NewtonConfig::validate() const {
    if (!(tol >= 1e-13)) throw Error(Errc::invalid_argument, "Newton tol must be >= 1e-13");
    if (max_iter < 1 || step_halving_limit < 1) {
        throw Error(Errc::invalid_argument, "max_iter and step_halving_limit must be positive");
    }
    eval.validate();
}

double mul_mod_2pi(double a, double b) {
    const double p = a * b;
    const double e = std::fma(a, b, -p);
    const double k = std::nearbyint(p / kTwoPiHi);
    double r = std::fma(-k, kTwoPiHi, p);
    r = std::fma(-k, kTwoPiLo, r) + e;
    return std::remainder(r, kTwoPiHi);
}

double residual_bound(const NewtonConfig& cfg, Complex s) { return cfg.tol * std::max(1.0, std::abs(s)); }

double fixpoint_residual(Complex z, Complex s, const EvalParams& p) {
    return std::abs(fixpoint_equation(z, s, p).f);
}

NewtonResult newton_fixpoint_detailed(Complex z, Complex seed, const NewtonConfig& cfg) {
    cfg.validate();
    Errc why = Errc::no_convergence;
    const auto r = try_newton(z, seed, cfg, std::numeric_limits<double>::infinity(), &why);
    if (!r) {
        std::ostringstream os;
        os << "Newton from seed " << seed << " for z = " << z << " failed";
        throw Error(why, os.str());
    }
    return *r;
}

Complex newton_fixpoint(Complex z, Complex seed, const NewtonConfig& cfg) {
    return newton_fixpoint_detailed(z, seed, cfg).root;
}

std::vector<Complex> zeta_fixpoints_in_region(Complex center, double width, double height, double grid_step,
                                              const NewtonConfig& cfg) {
    cfg.validate();
    if (!(width > 0.0 && height > 0.0 && grid_step > 0.0)) {
        throw Error(Errc::invalid_argument, "region and grid step must be positive");
    }
    const double x0 = center.real() - width / 2, x1 = center.real() + width / 2;
    const double y0 = center.imag() - height / 2, y1 = center.imag() + height / 2;
    const double leash = 2.0 * std::hypot(width, height);
    const int nx = static_cast<int>(std::floor(width / grid_step + 1e-9));
    const int ny = static_cast<int>(std::floor(height / grid_step + 1e-9));

    std::vector<Complex> found;
    for (int i = 0; i <= nx; ++i) {
        for (int j = 0; j <= ny; ++j) {
            const Complex seed(x0 + i * grid_step, y0 + j * grid_step);
            if (std::abs(seed - 1.0) < kPoleGuard) continue;
            const auto r = try_newton(Complex(0.0), seed, cfg, leash);
            if (!r || r->residual > residual_bound(cfg, r->root)) continue;
            const Complex s = r->root;
            if (s.real() < x0 || s.real() > x1 || s.imag() < y0 || s.imag() > y1) continue;
            const bool dup = std::any_of(found.begin(), found.end(),
                                         [&](Complex f) { return std::abs(f - s) <= 10.0 * residual_bound(cfg, s); });
            if (!dup) found.push_back(s);
        }
    }
    std::sort(found.begin(), found.end(), [](Complex a, Complex b) {
        return a.imag() != b.imag() ? a.imag() < b.imag() : a.real() < b.real();
    });
    return found;
}

namespace {

// Scans Hardy's Z upward from t = 10 until `done` says stop.
template <typename Done>
std::vector<Complex> scan_zeros(Done done) {
    constexpr double step = 0.05;
    std::vector<Complex> zeros;
    double t = 10.0;
    double zt = hardy_z(t);
    while (!done(zeros, t)) {
        const double t2 = t + step;
        const double z2 = hardy_z(t2);
        if (zt == 0.0) {
            zeros.emplace_back(0.5, t);
        } else if ((zt < 0.0) != (z2 < 0.0)) {
            double lo = t, hi = t2, flo = zt;
            while (hi - lo > 1e-12) {
                const double mid = 0.5 * (lo + hi);
                const double fm = hardy_z(mid);
                if (fm == 0.0) {
                    lo = hi = mid;
                    break;
                }
                if ((fm < 0.0) == (flo < 0.0)) {
                    lo = mid;
                    flo = fm;
                } else {
                    hi = mid;
                }
            }
            zeros.emplace_back(0.5, 0.5 * (lo + hi));
        }
        t = t2;
        zt = z2;
    }
    return zeros;
}

}  // namespace

std::vector<Complex> riemann_zeros(int count) {
    if (count < 1 || count > kMaxZeroIndex) {
        std::ostringstream os;
        os << "zero index must be in [1, " << kMaxZeroIndex << "], got " << count;
        throw Error(Errc::out_of_range, os.str());
    }
    return scan_zeros([count](const std::vector<Complex>& z, double) { return static_cast<int>(z.size()) >= count; });
}

std::vector<Complex> riemann_zeros_below(double t_max) {
    auto zeros = scan_zeros([t_max](const std::vector<Complex>&, double t) { return t >= t_max; });
    while (!zeros.empty() && zeros.back().imag() > t_max) zeros.pop_back();
    return zeros;
}

Complex riemann_zero(int n) { return riemann_zeros(n).back(); }

NearestFixpoint nearest_fixpoint_to_zero(Complex rho, const NewtonConfig& cfg, double half_width, double grid_step) {
    NearestFixpoint out;
    out.candidates = zeta_fixpoints_in_region(rho, 2 * half_width, 2 * half_width, grid_step, cfg);
    if (out.candidates.empty()) {
        std::ostringstream os;
        os << "no zeta fixed point within half-width " << half_width << " of " << rho;
        throw Error(Errc::none_found, os.str());
    }
    std::vector<Complex> ranked = out.candidates;
    std::sort(ranked.begin(), ranked.end(), [&](Complex a, Complex b) {
        const double da = std::abs(a - rho), db = std::abs(b - rho);
        return da != db ? da < db : a.imag() < b.imag();
    });
    out.psi = ranked.front();
    if (ranked.size() > 1 && std::abs(ranked[1] - rho) - std::abs(ranked[0] - rho) < 1e-3) {
        out.ambiguous = true;
        std::ostringstream os;
        os << "psi_rho not unique: " << ranked[0] << " and " << ranked[1] << " are equidistant from " << rho;
        out.warnings.push_back(os.str());
    }
    return out;
}

Complex refine_zero(Complex seed, const EvalParams& p) {
    Complex s = seed;
    double prev = HUGE_VAL;
    for (int it = 0; it < 60; ++it) {
        const ZetaValue zv = zeta_with_deriv(s, p);
        if (zv.value == 0.0) return s;
        const Complex step = zv.value / zv.deriv;
        const double size = std::abs(step);
        // stop at the rounding floor: tiny steps, or steps that stopped shrinking
        if (prev < 1e-10 && size >= prev) return s;
        s -= step;
        if (size <= 1e-15 * std::max(1.0, std::abs(s))) return s;
        prev = size;
    }
    throw Error(Errc::no_convergence, "Newton on zeta did not converge");
}

std::vector<Complex> FixedPointSequence::phis() const {
    std::vector<Complex> out;
    out.reserve(points.size());
    for (const auto& p : points) out.push_back(p.phi);
    return out;
}

std::vector<Complex> FixedPointSequence::log_offsets_about(Complex c) const {
    std::vector<Complex> out;
    out.reserve(points.size());
    const bool own = center && *center == c;
    for (const auto& p : points) {
        if (own && p.log_offset) {
            out.push_back(*p.log_offset);
            continue;
        }
        if (p.phi == c) throw Error(Errc::point_at_center, "trace point coincides with the center");
        out.push_back(std::log(p.phi - c));
    }
    return out;
}

FixedPointSequence trace_ray(const RaySpec& ray, const Progression& prog, Complex start, const NewtonConfig& cfg,
                             const TraceOptions& opts) {
    cfg.validate();
    if (opts.target && !ray.is_real() && !(opts.target->imag() * ray.u().imag() < 0.0)) {
        throw Error(Errc::invalid_argument, "a target zero on a non-real ray needs Im rho * Im u < 0");
    }
    const double start_res = fixpoint_residual(Complex(0.0), start, cfg.eval);
    if (start_res > residual_bound(cfg, start)) {
        std::ostringstream os;
        os << "start " << start << " is not a zeta fixed point (residual " << start_res << ")";
        throw Error(Errc::invalid_argument, os.str());
    }

    FixedPointSequence seq(ray, prog);
    seq.target = opts.target;
    seq.points.push_back({0.0, start, start_res, std::nullopt});

    const double leash = 25.0;
    std::optional<LocalModel> model;

    auto broken = [&](const std::string& msg) {
        seq.model_start = model ? seq.model_start : seq.points.size();
        if (model) seq.center = model->center();
        return TraceError(Errc::trace_broken, msg, seq);
    };

    for (int n = 1; n < prog.count; ++n) {
        const double x = prog.at(n);
        if (model) {
            const auto sol = model->solve(x);
            if (!sol) throw broken("local model failed to converge at x = " + std::to_string(x));
            const Complex w = sol->log_offset.real() < -745.0 ? Complex(0.0) : std::exp(sol->log_offset);
            seq.points.push_back({x, model->center() + w, sol->residual, sol->log_offset});
            continue;
        }

        const TracePoint& prev = seq.points.back();
        std::optional<NewtonResult> best = try_newton(ray.at(x), prev.phi, cfg, leash);
        if (!best) {
            // bisect the step: intermediate x values are solved but not recorded
            for (int level = 1; level <= cfg.step_halving_limit && !best; ++level) {
                const int pieces = 1 << level;
                Complex s = prev.phi;
                bool ok = true;
                for (int k = 1; k <= pieces && ok; ++k) {
                    const double xi = prev.x + (x - prev.x) * k / pieces;
                    const auto r = try_newton(ray.at(xi), s, cfg, leash);
                    if (!r) {
                        ok = false;
                    } else {
                        s = r->root;
                        if (k == pieces) best = r;
                    }
                }
            }
        }
        if (opts.target) {
            const auto alt = try_newton(ray.at(x), *opts.target, cfg, leash);
            if (alt && (!best || std::abs(alt->root - *opts.target) < std::abs(best->root - *opts.target))) {
                best = alt;
            }
        }
        if (!best) {
            std::ostringstream os;
            os << "continuation failed at x = " << x << " after " << cfg.step_halving_limit << " halvings";
            throw broken(os.str());
        }
        seq.points.push_back({x, best->root, best->residual, std::nullopt});

        if (!opts.target || std::abs(best->root - *opts.target) < 1.0) {
            model = try_enter_model(best->root, ray, cfg, opts);
            if (model) seq.model_start = seq.points.size();
        }
    }

    if (model) {
        seq.center = model->center();
        for (std::size_t i = 0; i < seq.model_start; ++i) {
            auto& p = seq.points[i];
            if (p.phi != *seq.center) p.log_offset = std::log(p.phi - *seq.center);
        }
    } else {
        seq.model_start = seq.points.size();
    }

    int still = 0;
    for (std::size_t i = 1; i < seq.points.size(); ++i) {
        still = std::abs(seq.points[i].phi - seq.points[i - 1].phi) < 1e-12 ? still + 1 : 0;
    }
    seq.converged = still >= 5;
    if (seq.converged && seq.target) {
        const Complex t = *seq.target;
        seq.converged = std::abs(seq.points.back().phi - t) < std::abs(seq.points.front().phi - t);
    }

    for (std::size_t i = 0; i < seq.points.size(); ++i) {
        if (seq.points[i].residual > residual_bound(cfg, seq.points[i].phi)) {
            std::ostringstream os;
            os << "residual " << seq.points[i].residual << " at n = " << i << " exceeds tol " << cfg.tol;
            throw TraceError(Errc::residual_degraded, os.str(), seq);
        }
    }
    return seq;
}

}  // namespace zvdl
