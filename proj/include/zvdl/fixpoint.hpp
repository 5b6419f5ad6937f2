#pragma once

#include <optional>
#include <string>
#include <vector>

#include "zvdl/error.hpp"
#include "zvdl/variant.hpp"
#include "zvdl/zeta.hpp"

namespace zvdl {

/// Arithmetic progression X = (0, dx, 2 dx, ...) with `count` members.
struct Progression {
    double dx = 1.0;
    int count = 1;

    Progression() = default;
    /// Throws Errc::invalid_argument unless dx > 0 and count >= 1.
    Progression(double dx, int count);

    double at(int n) const noexcept { return n * dx; }
};

struct NewtonConfig {
    double tol = 1e-12;          ///< residual tolerance, relative to max(1, |s|)
    int max_iter = 60;
    int step_halving_limit = 8;  ///< continuation bisection depth
    EvalParams eval;

    /// Throws Errc::invalid_argument unless tol >= 1e-13 and the counts are positive.
    void validate() const;
};

struct NewtonResult {
    Complex root;
    int iterations = 0;
    double residual = 0.0;
};

/// Newton on s -> V_z(s) - s until |F| <= residual_bound (iterated in the scaled form zeta(s) - s e^{-zs}
/// when Re(zs) > 0; both have the same roots). A seed that already meets tol
/// is returned unchanged. Throws Errc::no_convergence or
/// Errc::derivative_singular (|F'| < 1e-14).
NewtonResult newton_fixpoint_detailed(Complex z, Complex seed, const NewtonConfig& cfg = {});
Complex newton_fixpoint(Complex z, Complex seed, const NewtonConfig& cfg = {});

/// Acceptance bound tol max(1, |s|): zeta's rounding grows with |s|, so an
/// absolute 1e-12 is out of reach at heights near 100.
double residual_bound(const NewtonConfig& cfg, Complex s);

/// Residual that the solvers drive to zero: |zeta(s) - s e^{-zs}| when
/// Re(zs) > 0, |V_z(s) - s| otherwise.
double fixpoint_residual(Complex z, Complex s, const EvalParams& p = {});

/// Zeta fixed points inside the axis-aligned box found by Newton from every
/// seed of a grid with spacing grid_step. Results are deduplicated (pairwise
/// distance > 10 tol) and sorted by imaginary then real part.
std::vector<Complex> zeta_fixpoints_in_region(Complex center, double width, double height, double grid_step,
                                              const NewtonConfig& cfg = {});

inline constexpr int kMaxZeroIndex = 200;

/// rho_1 .. rho_count on the critical line: sign changes of Hardy's Z on a
/// 0.05 grid, bisected to 1e-12 in t. Throws Errc::out_of_range past 200.
std::vector<Complex> riemann_zeros(int count);
Complex riemann_zero(int n);
/// Every zero with 0 < Im rho <= t_max, same scan.
std::vector<Complex> riemann_zeros_below(double t_max);

struct NearestFixpoint {
    Complex psi;
    std::vector<Complex> candidates;  ///< everything found in the search box
    bool ambiguous = false;           ///< runner-up within 1e-3 of the best distance
    std::vector<std::string> warnings;
};

/// psi_rho: the zeta fixed point closest to rho in a box of the given
/// half-width. Ties break on smaller Im psi. Throws Errc::none_found.
NearestFixpoint nearest_fixpoint_to_zero(Complex rho, const NewtonConfig& cfg = {}, double half_width = 6.0,
                                         double grid_step = 0.5);

struct TracePoint {
    double x = 0.0;
    Complex phi;
    double residual = 0.0;
    /// log(phi - center), only when the sequence has a center. Carries the
    /// offset beyond the resolution of phi itself.
    std::optional<Complex> log_offset;
};

/// A member of Phi_0 x Phi_{x_1 u} x ... traced along a ray.
struct FixedPointSequence {
    RaySpec ray;
    Progression prog;
    std::vector<TracePoint> points;
    std::optional<Complex> target;
    /// Zero of zeta the trace settled on; set once the local model took over.
    std::optional<Complex> center;
    std::size_t model_start = 0;  ///< first index solved in log-offset form (== size if none)
    bool converged = false;

    FixedPointSequence(RaySpec r, Progression p) : ray(r), prog(p) {}

    std::vector<Complex> phis() const;
    /// log(phi_n - c) for every point; uses the stored offsets when c is the
    /// sequence center. Throws Errc::point_at_center.
    std::vector<Complex> log_offsets_about(Complex c) const;
};

/// Thrown by trace_ray; carries whatever was traced before the failure.
class TraceError : public Error {
public:
    TraceError(Errc code, const std::string& what, FixedPointSequence partial)
        : Error(code, what), partial_(std::move(partial)) {}
    const FixedPointSequence& partial() const noexcept { return partial_; }

private:
    FixedPointSequence partial_;
};

struct TraceOptions {
    /// Zero the sequence should approach. When set, every x_n is also solved
    /// from the target and the solution nearest the target is kept.
    std::optional<Complex> target;
    /// Distance to a zero below which the log-offset model takes over.
    double model_radius = 1e-2;
    int taylor_degree = 12;
};

/// Traces fixed points of V_{x u} for x in prog, starting at start in Phi_0.
/// Throws TraceError (Errc::trace_broken or Errc::residual_degraded) and
/// Errc::invalid_argument for a bad start or a target violating
/// Im rho * Im u < 0 on a non-real ray.
FixedPointSequence trace_ray(const RaySpec& ray, const Progression& prog, Complex start, const NewtonConfig& cfg = {},
                             const TraceOptions& opts = {});

/// Newton on zeta itself (unconstrained in the plane).
Complex refine_zero(Complex seed, const EvalParams& p = {});

/// a*b reduced to [-pi, pi] with the product carried in double-double.
double mul_mod_2pi(double a, double b);

}  // namespace zvdl
