#include "zvdl/spiral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace zvdl {
namespace {

using std::numbers::pi;
constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr double kTwoPiHi = 6.283185307179586;
constexpr double kTwoPiLo = 2.4492935982947064e-16;

double principal(double a) {
    a = std::remainder(a, 2.0 * pi);
    return a <= -pi ? pi : a;
}

double direct_resolution(Complex z, Complex c, Complex L) {
    return 4.0 * kEps * ((std::abs(z) + std::abs(c)) / std::abs(z - c) + pi + std::abs(L.real()));
}

double model_resolution(Complex L) { return 4.0 * kEps * (pi + std::abs(L.real())); }

struct Fit {
    LinearModel model;
    double x_mean = 0.0;
    double y_mean = 0.0;
};

Fit ols(const double* x, const double* y, std::size_t n) {
    Fit f;
    for (std::size_t i = 0; i < n; ++i) {
        f.x_mean += x[i];
        f.y_mean += y[i];
    }
    f.x_mean /= double(n);
    f.y_mean /= double(n);
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double dx = x[i] - f.x_mean, dy = y[i] - f.y_mean;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    if (sxx == 0.0) throw Error(Errc::degenerate, "all abscissae equal");
    f.model.m = sxy / sxx;
    f.model.b = f.y_mean - f.model.m * f.x_mean;
    double ssr = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double r = (y[i] - f.y_mean) - f.model.m * (x[i] - f.x_mean);
        ssr += r * r;
    }
    f.model.r_squared = syy == 0.0 ? 1.0 : std::clamp(1.0 - ssr / syy, 0.0, 1.0);
    return f;
}

DecayReport resolved_decay(const std::vector<double>& raw, const std::vector<double>& floor) {
    std::vector<double> series(raw.size());
    std::size_t resolved = 0;
    for (std::size_t i = 0; i < raw.size(); ++i) {
        const double v = raw[i];
        series[i] = std::isfinite(v) && v <= floor[i] ? 0.0 : v;
        if (std::isfinite(series[i]) && series[i] > 0.0) ++resolved;
    }
    if (series.size() < 10) throw Error(Errc::too_short, "decay test needs at least 10 entries");
    if (resolved < 3) {
        DecayReport r;
        r.slope = r.intercept = -std::numeric_limits<double>::infinity();
        r.r_squared = 1.0;
        r.is_exponential_decay = true;
        r.at_resolution = true;
        r.dropped = series.size() - resolved;
        r.used = resolved;
        return r;
    }
    return decay_test(series);
}

}  // namespace

CenteredPoints CenteredPoints::from_points(const std::vector<Complex>& points, Complex center) {
    CenteredPoints out;
    out.center = center;
    out.log_offsets.reserve(points.size());
    out.resolution.reserve(points.size());
    for (Complex z : points) {
        if (z == center) throw Error(Errc::point_at_center, "point coincides with the center");
        const Complex L = std::log(z - center);
        out.log_offsets.push_back(L);
        out.resolution.push_back(direct_resolution(z, center, L));
    }
    return out;
}

CenteredPoints CenteredPoints::from_sequence(const FixedPointSequence& seq, Complex center) {
    CenteredPoints out;
    out.center = center;
    out.log_offsets = seq.log_offsets_about(center);
    const bool own = seq.center && *seq.center == center;
    out.resolution.reserve(out.log_offsets.size());
    for (std::size_t i = 0; i < out.log_offsets.size(); ++i) {
        const Complex L = out.log_offsets[i];
        out.resolution.push_back(own && i >= seq.model_start ? model_resolution(L)
                                                              : direct_resolution(seq.points[i].phi, center, L));
    }
    return out;
}

std::vector<Complex> CenteredPoints::points() const {
    std::vector<Complex> out;
    out.reserve(log_offsets.size());
    for (Complex L : log_offsets) out.push_back(center + std::exp(L));
    return out;
}

PolarTrace unwrap_theta(const CenteredPoints& pts) {
    const std::size_t n = pts.size();
    if (n < 2) throw Error(Errc::too_short, "unwrapping needs at least 2 points");
    PolarTrace t;
    t.center = pts.center;
    t.theta.resize(n);
    t.log_r.resize(n);
    t.delta.resize(n - 1);
    t.big_delta.resize(n >= 3 ? n - 2 : 0);
    t.resolution = pts.resolution;
    if (t.resolution.size() != n) t.resolution.assign(n, 0.0);

    // theta_n = a_n + 2 pi k_n with integer k_n, so theta carries only one rounding
    double a_prev = principal(pts.log_offsets[0].imag());
    double k = 0.0;
    t.theta[0] = a_prev;
    t.log_r[0] = pts.log_offsets[0].real();
    for (std::size_t i = 1; i < n; ++i) {
        const double a = principal(pts.log_offsets[i].imag());
        double d = std::remainder(a - a_prev, 2.0 * pi);
        if (d <= 0.0) d += 2.0 * pi;
        k += std::nearbyint((a_prev + d - a) / (2.0 * pi));
        t.delta[i - 1] = d;
        t.theta[i] = std::fma(k, kTwoPiHi, a) + k * kTwoPiLo;
        if (!(t.theta[i] > t.theta[i - 1])) t.theta[i] = std::nextafter(t.theta[i - 1], HUGE_VAL);
        t.log_r[i] = pts.log_offsets[i].real();
        a_prev = a;
    }
    for (std::size_t i = 0; i + 1 < t.delta.size(); ++i) t.big_delta[i] = std::abs(t.delta[i] - t.delta[i + 1]);
    return t;
}

PolarTrace unwrap_theta(const std::vector<Complex>& points, Complex center) {
    return unwrap_theta(CenteredPoints::from_points(points, center));
}

LinearModel fit_line(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size()) throw Error(Errc::invalid_argument, "fit_line: length mismatch");
    if (x.size() < 2) throw Error(Errc::too_short, "fit_line needs at least 2 points");
    LinearModel m = ols(x.data(), y.data(), x.size()).model;
    m.K = static_cast<int>(x.size()) - 1;
    return m;
}

LinearModel window_fit(const PolarTrace& trace, int h, int K) {
    if (K < 2 || h < 0 || static_cast<std::size_t>(h + K) >= trace.theta.size()) {
        throw Error(Errc::window_out_of_range, "window [h, h+K] must lie inside the trace with K >= 2");
    }
    LinearModel m = ols(trace.theta.data() + h, trace.log_r.data() + h, static_cast<std::size_t>(K) + 1).model;
    m.h = h;
    m.K = K;
    return m;
}

std::vector<double> d_h_series(const PolarTrace& trace, int K, std::vector<double>* resolution) {
    const std::size_t n = trace.theta.size();
    if (K < 2 || n < static_cast<std::size_t>(K) + 2) {
        throw Error(Errc::window_out_of_range, "d_h needs K >= 2 and at least K + 2 points");
    }
    const std::size_t count = n - static_cast<std::size_t>(K);
    std::vector<double> out(count);
    if (resolution) resolution->assign(count, 0.0);
    for (std::size_t h = 0; h < count; ++h) {
        const Fit f = ols(trace.theta.data() + h, trace.log_r.data() + h, static_cast<std::size_t>(K) + 1);
        const std::size_t i = h + K;
        const double lr = trace.log_r[i];
        if (lr == 0.0) {
            out[h] = std::numeric_limits<double>::quiet_NaN();
            continue;
        }
        const double m = f.model.m;
        const double resid = (lr - f.y_mean) - m * (trace.theta[i] - f.x_mean);
        out[h] = std::abs(resid) / std::abs(lr);
        if (resolution) {
            const double worst = *std::max_element(trace.resolution.begin() + h, trace.resolution.begin() + i + 1);
            (*resolution)[h] =
                (64.0 * kEps * (std::abs(m * trace.theta[i]) + std::abs(lr)) + 8.0 * worst * (1.0 + std::abs(m))) /
                std::abs(lr);
        }
    }
    return out;
}

DecayReport decay_test_log(const std::vector<double>& log_series) {
    if (log_series.size() < 10) throw Error(Errc::too_short, "decay test needs at least 10 entries");
    std::vector<double> x, y;
    for (std::size_t i = 0; i < log_series.size(); ++i) {
        if (std::isfinite(log_series[i])) {
            x.push_back(double(i));
            y.push_back(log_series[i]);
        }
    }
    if (x.empty()) throw Error(Errc::all_nonpositive, "no positive entries to fit");
    if (x.size() < 3) throw Error(Errc::too_short, "fewer than 3 positive entries");
    const LinearModel m = ols(x.data(), y.data(), x.size()).model;
    DecayReport r;
    r.slope = m.m;
    r.intercept = m.b;
    r.r_squared = m.r_squared;
    r.is_exponential_decay = r.slope < kDecaySlope && r.r_squared >= kDecayRSquared;
    r.used = x.size();
    r.dropped = log_series.size() - x.size();
    return r;
}

DecayReport decay_test(const std::vector<double>& series) {
    std::vector<double> logs(series.size());
    for (std::size_t i = 0; i < series.size(); ++i) {
        logs[i] = std::isfinite(series[i]) && series[i] > 0.0 ? std::log(series[i]) : -HUGE_VAL;
    }
    return decay_test_log(logs);
}

Verdict classify_nearly_logarithmic(const PolarTrace& trace, int K) {
    std::vector<double> floor;
    const std::vector<double> raw = d_h_series(trace, K, &floor);
    const DecayReport r = resolved_decay(raw, floor);
    return {r.is_exponential_decay, r};
}

Verdict classify_nearly_logarithmic(const std::vector<Complex>& points, Complex center, int K) {
    return classify_nearly_logarithmic(unwrap_theta(points, center), K);
}

Verdict classify_nearly_uniform(const PolarTrace& trace) {
    const auto& bd = trace.big_delta;
    std::vector<double> floor(bd.size());
    const auto& res = trace.resolution;
    for (std::size_t i = 0; i < bd.size(); ++i) {
        floor[i] = 16.0 * (res[i] + 2.0 * res[i + 1] + res[i + 2] + 4.0 * kEps * pi);
    }
    const DecayReport r = resolved_decay(bd, floor);
    return {r.is_exponential_decay, r};
}

Verdict classify_nearly_uniform(const std::vector<Complex>& points, Complex center) {
    return classify_nearly_uniform(unwrap_theta(points, center));
}

CenteredPoints coarsen(const CenteredPoints& pts, int filter_index) {
    CenteredPoints out;
    out.center = pts.center;
    out.log_offsets = coarsen(pts.log_offsets, filter_index);
    out.resolution = pts.resolution.size() == pts.size() ? coarsen(pts.resolution, filter_index)
                                                        : std::vector<double>(out.log_offsets.size(), 0.0);
    return out;
}

CoarseningSweep coarsening_sweep(const CenteredPoints& pts, const std::vector<int>& filter_indices) {
    CoarseningSweep s;
    s.filter_indices = filter_indices;
    for (int f : filter_indices) {
        const PolarTrace t = unwrap_theta(coarsen(pts, f));
        LinearModel m = fit_line(t.theta, t.log_r);
        s.models.push_back(m);
    }
    for (std::size_t i = 0; i + 1 < s.models.size(); ++i) {
        s.slope_diffs.push_back(std::abs(s.models[i].m - s.models[i + 1].m));
        s.intercept_diffs.push_back(std::abs(s.models[i].b - s.models[i + 1].b));
    }
    return s;
}

Eversion eversion_embed(const CenteredPoints& pts) {
    Eversion e;
    e.points.reserve(pts.size());
    for (std::size_t i = 0; i < pts.size(); ++i) {
        const Complex L = pts.log_offsets[i];
        if (L.real() == 0.0) e.on_center.push_back(i);
        e.points.push_back(pts.center + std::polar(std::abs(L.real()), L.imag()));
    }
    return e;
}

Eversion eversion_embed(const std::vector<Complex>& points, Complex center) {
    return eversion_embed(CenteredPoints::from_points(points, center));
}

double polygon_length(const std::vector<Complex>& points) {
    if (points.size() < 2) throw Error(Errc::too_short, "polygon needs at least 2 points");
    double len = 0.0;
    for (std::size_t i = 1; i < points.size(); ++i) len += std::abs(points[i] - points[i - 1]);
    return len;
}

double fraction_decreasing(const std::vector<double>& series) {
    if (series.size() < 2) throw Error(Errc::too_short, "need at least 2 entries");
    std::size_t dec = 0;
    for (std::size_t i = 0; i + 1 < series.size(); ++i) dec += series[i + 1] < series[i];
    return double(dec) / double(series.size() - 1);
}

}  // namespace zvdl
