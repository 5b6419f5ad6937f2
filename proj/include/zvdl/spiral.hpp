#pragma once

#include <cstddef>
#include <vector>

#include "zvdl/fixpoint.hpp"
#include "zvdl/zeta.hpp"

namespace zvdl {

/// Points z_n about a center gamma, stored as L_n = log(z_n - gamma) so that
/// offsets far below the resolution of z_n survive.
struct CenteredPoints {
    Complex center;
    std::vector<Complex> log_offsets;
    /// Rounding error of each log offset (absolute, in both components).
    std::vector<double> resolution;

    /// Throws Errc::point_at_center.
    static CenteredPoints from_points(const std::vector<Complex>& points, Complex center);
    /// Uses the sequence's own offsets when center is the zero it settled on.
    static CenteredPoints from_sequence(const FixedPointSequence& seq, Complex center);

    std::size_t size() const noexcept { return log_offsets.size(); }
    std::vector<Complex> points() const;
};

struct PolarTrace {
    Complex center;
    std::vector<double> theta;      ///< unwrapped, strictly increasing
    std::vector<double> log_r;
    std::vector<double> delta;      ///< theta[n+1] - theta[n], in (0, 2 pi]
    std::vector<double> big_delta;  ///< |delta[n] - delta[n+1]|
    /// Rounding error of the angle and log_r at each point.
    std::vector<double> resolution;
};

/// theta[0] is the principal argument in (-pi, pi]; each later theta is the
/// smallest value above its predecessor congruent to arg(z_n - gamma).
/// Throws Errc::point_at_center or Errc::too_short (fewer than 2 points).
PolarTrace unwrap_theta(const std::vector<Complex>& points, Complex center);
PolarTrace unwrap_theta(const CenteredPoints& pts);

struct LinearModel {
    double m = 0.0;
    double b = 0.0;
    double r_squared = 0.0;
    int h = 0;
    int K = 0;
};

/// Ordinary least squares of y on x.
LinearModel fit_line(const std::vector<double>& x, const std::vector<double>& y);

/// OLS of log_r on theta over indices h..h+K. Throws Errc::window_out_of_range
/// or Errc::degenerate.
LinearModel window_fit(const PolarTrace& trace, int h, int K);

/// d_h = |m theta_n + b - log r_n| / |log r_n| at n = h + K, for every h with
/// h + K inside the trace. Entries with log r_n = 0 are NaN. When resolution
/// is given it receives the rounding floor of each entry.
std::vector<double> d_h_series(const PolarTrace& trace, int K, std::vector<double>* resolution = nullptr);

struct DecayReport {
    double slope = 0.0;
    double intercept = 0.0;
    double r_squared = 0.0;
    bool is_exponential_decay = false;
    std::size_t used = 0;     ///< entries fitted
    std::size_t dropped = 0;  ///< nonpositive or non-finite entries skipped
    /// The whole series sat at or below its rounding floor: treated as decayed.
    bool at_resolution = false;
};

inline constexpr double kDecaySlope = -0.005;
inline constexpr double kDecayRSquared = 0.9;
inline constexpr int kDefaultWindow = 50;

/// OLS of log(series[n]) on n over the positive entries. Throws Errc::too_short
/// (fewer than 10 entries, or fewer than 3 positive) and Errc::all_nonpositive.
DecayReport decay_test(const std::vector<double>& series);
/// Same fit on precomputed logarithms; non-finite entries are dropped.
DecayReport decay_test_log(const std::vector<double>& log_series);

struct Verdict {
    bool verdict = false;
    DecayReport report;
};

/// decay_test on d_h after entries below their rounding floor are zeroed.
/// A series with fewer than 3 resolved entries counts as decayed.
Verdict classify_nearly_logarithmic(const PolarTrace& trace, int K = kDefaultWindow);
Verdict classify_nearly_logarithmic(const std::vector<Complex>& points, Complex center, int K = kDefaultWindow);

/// Same on big_delta; an identically zero big_delta counts as decayed.
Verdict classify_nearly_uniform(const PolarTrace& trace);
Verdict classify_nearly_uniform(const std::vector<Complex>& points, Complex center);

/// Every filter_index-th element starting at 0. Throws Errc::invalid_argument
/// for filter_index < 1 and Errc::empty_result for an empty input.
template <typename T>
std::vector<T> coarsen(const std::vector<T>& items, int filter_index);

CenteredPoints coarsen(const CenteredPoints& pts, int filter_index);

struct CoarseningSweep {
    std::vector<int> filter_indices;
    std::vector<LinearModel> models;
    std::vector<double> slope_diffs;      ///< |m_i - m_{i+1}|
    std::vector<double> intercept_diffs;  ///< |b_i - b_{i+1}|
};

/// One full-length fit of log r on the re-unwrapped theta per coarsening.
CoarseningSweep coarsening_sweep(const CenteredPoints& pts, const std::vector<int>& filter_indices);

struct Eversion {
    std::vector<Complex> points;
    std::vector<std::size_t> on_center;  ///< indices with r = 1
};

/// phi -> gamma + |log r| (phi - gamma) / r: distance from the center becomes
/// |log r|, so points closer to the center land farther out.
Eversion eversion_embed(const CenteredPoints& pts);
Eversion eversion_embed(const std::vector<Complex>& points, Complex center);

/// Sum of |p_{k+1} - p_k|. Throws Errc::too_short.
double polygon_length(const std::vector<Complex>& points);

/// Fraction of consecutive pairs with series[i+1] < series[i].
double fraction_decreasing(const std::vector<double>& series);

template <typename T>
std::vector<T> coarsen(const std::vector<T>& items, int filter_index) {
    if (filter_index < 1) throw Error(Errc::invalid_argument, "filter index must be >= 1");
    if (items.empty()) throw Error(Errc::empty_result, "nothing to coarsen");
    std::vector<T> out;
    out.reserve(items.size() / filter_index + 1);
    for (std::size_t i = 0; i < items.size(); i += static_cast<std::size_t>(filter_index)) out.push_back(items[i]);
    return out;
}

}  // namespace zvdl
