#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace zvdl {

enum class Errc {
    pole,
    accuracy_not_reached,
    overflow,
    no_convergence,
    derivative_singular,
    out_of_range,
    none_found,
    trace_broken,
    residual_degraded,
    point_at_center,
    window_out_of_range,
    degenerate,
    zero_denominator,
    too_short,
    all_nonpositive,
    empty_result,
    not_converged,
    invalid_argument,
    parse_error,
    io_failure,
};

std::string_view to_string(Errc code) noexcept;

/// Single exception type for the library; callers branch on code().
class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

    Errc code() const noexcept { return code_; }

private:
    Errc code_;
};

}  // namespace zvdl
