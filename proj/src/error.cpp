#include "zvdl/error.hpp"

namespace zvdl {

std::string_view to_string(Errc code) noexcept {
    switch (code) {
        case Errc::pole: return "pole";
        case Errc::accuracy_not_reached: return "accuracy-not-reached";
        case Errc::overflow: return "overflow";
        case Errc::no_convergence: return "no-convergence";
        case Errc::derivative_singular: return "derivative-singular";
        case Errc::out_of_range: return "out-of-range";
        case Errc::none_found: return "none-found";
        case Errc::trace_broken: return "trace-broken";
        case Errc::residual_degraded: return "residual-degraded";
        case Errc::point_at_center: return "point-at-center";
        case Errc::window_out_of_range: return "window-out-of-range";
        case Errc::degenerate: return "degenerate";
        case Errc::zero_denominator: return "zero-denominator";
        case Errc::too_short: return "too-short";
        case Errc::all_nonpositive: return "all-nonpositive";
        case Errc::empty_result: return "empty-result";
        case Errc::not_converged: return "not-converged";
        case Errc::invalid_argument: return "invalid-argument";
        case Errc::parse_error: return "parse-error";
        case Errc::io_failure: return "io-failure";
    }
    return "unknown";
}

}  // namespace zvdl
