#include "zvdl/harness.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace zvdl {
namespace {

constexpr double kCauchyStep = 1e-12;
constexpr int kCauchyRun = 5;

Complex require_limit(const FixedPointSequence& seq) {
    const auto lim = limit_estimate(seq);
    if (!lim) throw Error(Errc::not_converged, "last 5 increments are not all below 1e-12");
    return *lim;
}

double distance_to_nearest_zero(Complex lambda) {
    double best = HUGE_VAL;
    if (lambda.real() < 0.0) {
        const double k = std::max(1.0, std::nearbyint(-lambda.real() / 2.0));
        best = std::abs(lambda - Complex(-2.0 * k, 0.0));
    }
    const double t = std::abs(lambda.imag());
    if (t > 1.0) {
        for (Complex rho : riemann_zeros_below(t + 1.0)) {
            best = std::min(best, std::abs(Complex(lambda.real(), t) - rho));
        }
    }
    return best;
}

std::string describe(const Error& e) { return std::string(e.what()); }

nlohmann::json pair(Complex c) { return nlohmann::json::array({c.real(), c.imag()}); }

}  // namespace

std::optional<Complex> limit_estimate(const FixedPointSequence& seq) {
    const auto& p = seq.points;
    if (p.size() < static_cast<std::size_t>(kCauchyRun) + 1) return std::nullopt;
    for (std::size_t i = p.size() - kCauchyRun; i < p.size(); ++i) {
        if (!(std::abs(p[i].phi - p[i - 1].phi) < kCauchyStep)) return std::nullopt;
    }
    return p.back().phi;
}

std::string_view to_string(TheoremVerdict v) {
    switch (v) {
        case TheoremVerdict::consistent: return "consistent";
        case TheoremVerdict::hypothesis_not_met: return "hypothesis-not-met";
        case TheoremVerdict::inconsistent: return "inconsistent";
    }
    return "?";
}

std::string_view to_string(CorollaryVerdict v) {
    switch (v) {
        case CorollaryVerdict::riemann_zero: return "riemann-zero";
        case CorollaryVerdict::the_point_one: return "the-point-one";
        case CorollaryVerdict::neither: return "neither";
    }
    return "?";
}

Theorem1Report check_theorem1(const FixedPointSequence& seq, const GenericFunction& g, double tol) {
    if (seq.points.size() < 20) throw Error(Errc::too_short, "theorem check needs at least 20 points");
    Theorem1Report r;
    r.limit_lambda = require_limit(seq);
    const double P = seq.ray.u().real(), Q = seq.ray.u().imag();
    r.hypothesis_value = r.limit_lambda.real() * P - r.limit_lambda.imag() * Q;

    std::vector<std::size_t> eligible;
    r.d_series.reserve(seq.points.size());
    for (std::size_t i = 0; i < seq.points.size(); ++i) {
        const auto& pt = seq.points[i];
        const double d = pt.phi.real() * P - pt.phi.imag() * Q;
        r.d_series.push_back(d);
        if (pt.x * d <= std::log(1e3)) eligible.push_back(i);
    }

    const std::size_t samples = std::min<std::size_t>(5, eligible.size());
    for (std::size_t k = 0; k < samples; ++k) {
        const std::size_t i = eligible[samples == 1 ? 0 : k * (eligible.size() - 1) / (samples - 1)];
        const auto& pt = seq.points[i];
        try {
            ModulusCheck m;
            m.index = i;
            m.lhs = std::abs(pt.phi);
            m.rhs = std::abs(g(pt.phi)) * std::exp(pt.x * r.d_series[i]);
            m.rel_err = std::abs(m.lhs - m.rhs) / std::max(m.lhs, 1e-300);
            r.max_modulus_rel_err = std::max(r.max_modulus_rel_err, m.rel_err);
            r.modulus_checks.push_back(m);
        } catch (const Error&) {
            // g undefined at this point; nothing to compare
        }
    }

    r.g_at_limit = std::abs(g(r.limit_lambda));
    if (!(r.hypothesis_value > 0.0)) {
        r.verdict = TheoremVerdict::hypothesis_not_met;
    } else {
        r.verdict = r.g_at_limit <= tol ? TheoremVerdict::consistent : TheoremVerdict::inconsistent;
    }
    return r;
}

CorollaryVerdict check_corollary(const FixedPointSequence& seq, double tol) {
    const Complex lambda = require_limit(seq);
    if (std::abs(lambda - 1.0) <= 1e-6) return CorollaryVerdict::the_point_one;
    if (std::abs(zeta(lambda)) > tol) return CorollaryVerdict::neither;
    return distance_to_nearest_zero(lambda) <= kZeroDistanceTol ? CorollaryVerdict::riemann_zero
                                                                : CorollaryVerdict::neither;
}

Question1Report check_question1(const FixedPointSequence& seq) {
    const Complex last = require_limit(seq);
    const Complex limit = seq.center ? *seq.center : last;
    Question1Report r;
    r.sigma_estimate = limit.real();
    r.gap_to_half = std::abs(r.sigma_estimate - 0.5);

    std::vector<double> logs;
    logs.reserve(seq.points.size());
    for (const auto& pt : seq.points) {
        if (seq.center && pt.log_offset) {
            const Complex L = *pt.log_offset;
            logs.push_back(L.real() + std::log(std::abs(std::cos(L.imag()))));
        } else {
            logs.push_back(std::log(std::abs(pt.phi.real() - r.sigma_estimate)));
        }
    }
    try {
        r.decay_of_re_parts = decay_test_log(logs);
    } catch (const Error&) {
        r.decay_of_re_parts.reset();
    }
    return r;
}

AnomalyMetrics anomaly_metrics(const PolarTrace& trace) {
    if (trace.theta.size() < 500) throw Error(Errc::too_short, "anomaly metrics need at least 500 points");
    const std::size_t n = trace.delta.size();
    const std::size_t tail = std::max<std::size_t>(1, n / 10);
    double sum = 0.0;
    for (std::size_t i = n - tail; i < n; ++i) sum += trace.delta[i];
    AnomalyMetrics m;
    m.delta_limit = sum / double(tail);
    m.winding_points = static_cast<long>(std::ceil(2.0 * std::numbers::pi / m.delta_limit));
    return m;
}

AnomalyMetrics anomaly_metrics(const FixedPointSequence& seq, Complex center) {
    require_limit(seq);
    if (seq.points.size() < 500) throw Error(Errc::too_short, "anomaly metrics need at least 500 points");
    return anomaly_metrics(unwrap_theta(CenteredPoints::from_sequence(seq, center)));
}

bool ConjectureReport::all_hold() const {
    if (!converged || error || !nearly_uniform || !nearly_uniform->verdict || nearly_log.empty()) return false;
    return std::all_of(nearly_log.begin(), nearly_log.end(), [](const auto& kv) { return kv.second.verdict; });
}

ConjectureReport conjecture2_from_trace(int zero_index, Complex rho, const FixedPointSequence& seq,
                                        const std::vector<int>& Ks) {
    ConjectureReport r;
    r.zero_index = zero_index;
    r.target_zero = rho;
    r.ray = seq.ray;
    r.prog = seq.prog;
    r.psi_initial = seq.points.front().phi;
    r.center = seq.center && std::abs(*seq.center - rho) < 1e-9 ? *seq.center : rho;

    const auto& last = seq.points.back();
    r.limit = limit_estimate(seq);
    r.limit_gap = r.center == seq.center && last.log_offset ? std::exp(last.log_offset->real())
                                                            : std::abs(last.phi - r.center);
    r.converged = seq.converged && r.limit && r.limit_gap < 1e-6;

    std::ostringstream errs;
    try {
        const PolarTrace trace = unwrap_theta(CenteredPoints::from_sequence(seq, r.center));
        for (int K : Ks) {
            try {
                r.nearly_log[K] = classify_nearly_logarithmic(trace, K);
            } catch (const Error& e) {
                errs << "K=" << K << ": " << describe(e) << "; ";
            }
        }
        try {
            r.nearly_uniform = classify_nearly_uniform(trace);
        } catch (const Error& e) {
            errs << "uniform: " << describe(e) << "; ";
        }
        if (r.converged && trace.theta.size() >= 500) r.anomaly = anomaly_metrics(trace);
    } catch (const Error& e) {
        errs << describe(e) << "; ";
    }
    if (r.converged) {
        try {
            r.sigma_gap = check_question1(seq).gap_to_half;
        } catch (const Error& e) {
            errs << describe(e) << "; ";
        }
    }
    if (!errs.str().empty()) r.error = errs.str();
    return r;
}

ConjectureReport run_conjecture2(int zero_index, const RaySpec& ray, const Progression& prog,
                                 const NewtonConfig& cfg, const std::vector<int>& Ks) {
    const Complex rho = riemann_zero(zero_index);
    if (!ray.is_real() && !(rho.imag() * ray.u().imag() < 0.0)) {
        throw Error(Errc::invalid_argument, "conjecture 2 needs Im rho * Im u < 0 when u != 1");
    }
    NearestFixpoint nf;
    try {
        nf = nearest_fixpoint_to_zero(rho, cfg);
    } catch (const Error& e) {
        if (e.code() != Errc::none_found) throw;
        ConjectureReport r;
        r.zero_index = zero_index;
        r.target_zero = rho;
        r.ray = ray;
        r.prog = prog;
        r.error = describe(e);
        return r;
    }
    TraceOptions opts;
    opts.target = rho;
    try {
        ConjectureReport r = conjecture2_from_trace(zero_index, rho, trace_ray(ray, prog, nf.psi, cfg, opts), Ks);
        r.warnings = nf.warnings;
        return r;
    } catch (const TraceError& e) {
        ConjectureReport r;
        if (e.partial().points.size() >= 2) r = conjecture2_from_trace(zero_index, rho, e.partial(), Ks);
        r.zero_index = zero_index;
        r.target_zero = rho;
        r.ray = ray;
        r.prog = prog;
        r.psi_initial = nf.psi;
        r.warnings = nf.warnings;
        r.converged = false;
        r.error = describe(e) + (r.error ? "; " + *r.error : std::string());
        return r;
    }
}

nlohmann::json to_json(const ConjectureReport& r) {
    nlohmann::json j;
    j["zero_index"] = r.zero_index;
    j["u"] = pair(r.ray.u());
    j["prog"] = {{"dx", r.prog.dx}, {"count", r.prog.count}};
    j["converged"] = r.converged;
    j["limit"] = r.limit ? pair(*r.limit) : nlohmann::json(nullptr);
    j["limit_gap"] = r.limit_gap;
    nlohmann::json nl = nlohmann::json::object();
    for (const auto& [K, v] : r.nearly_log) nl[std::to_string(K)] = v.verdict;
    j["nearly_log"] = nl;
    j["nearly_uniform"] = r.nearly_uniform ? nlohmann::json(r.nearly_uniform->verdict) : nlohmann::json(nullptr);
    j["delta_limit"] = r.anomaly ? nlohmann::json(r.anomaly->delta_limit) : nlohmann::json(nullptr);
    j["winding_points"] = r.anomaly ? nlohmann::json(r.anomaly->winding_points) : nlohmann::json(nullptr);
    j["sigma_gap"] = r.sigma_gap ? nlohmann::json(*r.sigma_gap) : nlohmann::json(nullptr);
    if (r.error) j["error"] = *r.error;
    return j;
}

nlohmann::json to_json(const Theorem1Report& r) {
    nlohmann::json j;
    j["limit"] = pair(r.limit_lambda);
    j["hypothesis_value"] = r.hypothesis_value;
    j["g_at_limit"] = r.g_at_limit;
    j["verdict"] = std::string(to_string(r.verdict));
    j["max_modulus_rel_err"] = r.max_modulus_rel_err;
    return j;
}

}  // namespace zvdl
