#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "zvdl/fixpoint.hpp"
#include "zvdl/spiral.hpp"
#include "zvdl/variant.hpp"

namespace zvdl {

/// Last point of the sequence if its last 5 increments are all below 1e-12.
std::optional<Complex> limit_estimate(const FixedPointSequence& seq);

enum class TheoremVerdict { consistent, hypothesis_not_met, inconsistent };
std::string_view to_string(TheoremVerdict v);

struct ModulusCheck {
    std::size_t index = 0;
    double lhs = 0.0;  ///< |phi_n|
    double rhs = 0.0;  ///< |g(phi_n)| e^{x_n D_n}
    double rel_err = 0.0;
};

struct Theorem1Report {
    Complex limit_lambda;
    double hypothesis_value = 0.0;  ///< Re lambda Re u - Im lambda Im u
    std::vector<double> d_series;   ///< D_n = a_n P - b_n Q
    double g_at_limit = 0.0;
    TheoremVerdict verdict = TheoremVerdict::hypothesis_not_met;
    /// |phi_n| = |g(phi_n)| e^{x_n D_n} at up to 5 indices where |g(phi_n)| is
    /// resolvable in double precision (e^{x_n D_n} <= 1e3).
    std::vector<ModulusCheck> modulus_checks;
    double max_modulus_rel_err = 0.0;
};

/// Throws Errc::too_short (< 20 points) and Errc::not_converged.
Theorem1Report check_theorem1(const FixedPointSequence& seq, const GenericFunction& g, double tol = 1e-6);

enum class CorollaryVerdict { riemann_zero, the_point_one, neither };
std::string_view to_string(CorollaryVerdict v);

inline constexpr double kZeroDistanceTol = 1e-4;

/// riemann-zero when |lambda - 1| > 1e-6, |zeta(lambda)| <= tol and lambda lies
/// within 1e-4 of a scanned nontrivial zero (or its conjugate) or a trivial
/// zero -2k. Throws Errc::not_converged.
CorollaryVerdict check_corollary(const FixedPointSequence& seq, double tol = 1e-6);

struct Question1Report {
    double sigma_estimate = 0.0;
    double gap_to_half = 0.0;
    /// Fit of log |Re phi_n - sigma| against n; empty when too few entries resolve.
    std::optional<DecayReport> decay_of_re_parts;
};

/// Throws Errc::not_converged. Reports only; never asserts sigma = 1/2.
Question1Report check_question1(const FixedPointSequence& seq);

struct AnomalyMetrics {
    double delta_limit = 0.0;  ///< mean of the last 10% of delta_n
    long winding_points = 0;   ///< ceil(2 pi / delta_limit)
};

/// Throws Errc::not_converged and Errc::too_short (< 500 points).
AnomalyMetrics anomaly_metrics(const FixedPointSequence& seq, Complex center);
AnomalyMetrics anomaly_metrics(const PolarTrace& trace);

struct ConjectureReport {
    int zero_index = 0;
    Complex target_zero;
    Complex center;  ///< target refined by Newton on zeta when the trace settled on it
    RaySpec ray = RaySpec::positive_real();
    Progression prog;
    Complex psi_initial;
    std::vector<std::string> warnings;
    bool converged = false;
    std::optional<Complex> limit;
    double limit_gap = 0.0;
    std::map<int, Verdict> nearly_log;
    std::optional<Verdict> nearly_uniform;
    std::optional<AnomalyMetrics> anomaly;
    std::optional<double> sigma_gap;
    std::optional<std::string> error;  ///< trace or statistics failure

    /// Converged, nearly logarithmic for every K and nearly uniform.
    bool all_hold() const;
};

/// Traces from psi_rho toward rho_n and runs both classifiers. Trace and
/// statistics failures, and a search box without fixed points, land in the
/// report. Throws Errc::invalid_argument when Im rho Im u < 0 fails on a
/// non-real ray.
ConjectureReport run_conjecture2(int zero_index, const RaySpec& ray, const Progression& prog,
                                 const NewtonConfig& cfg = {}, const std::vector<int>& Ks = {25, 50, 100});

/// Same, reusing a finished trace (avoids retracing for several reports).
ConjectureReport conjecture2_from_trace(int zero_index, Complex rho, const FixedPointSequence& seq,
                                        const std::vector<int>& Ks = {25, 50, 100});

nlohmann::json to_json(const ConjectureReport& r);
nlohmann::json to_json(const Theorem1Report& r);

}  // namespace zvdl
