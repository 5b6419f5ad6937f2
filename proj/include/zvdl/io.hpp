#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "zvdl/fixpoint.hpp"
#include "zvdl/spiral.hpp"

namespace zvdl {

/// Accepts "re,im", a bare real "re", or the a+bi forms ("1.5-2i", "3i", "-i").
/// Throws Errc::parse_error.
Complex parse_complex(const std::string& text);

/// "%.17g": enough digits for an exact double round trip.
std::string format_double(double v);

/// Filter index lists: "512,128,64,16", ranges "16..512" (descending when
/// written "512..16"), and powers "2^0..2^13" (each floor(2^n)). Throws Errc::parse_error.
std::vector<int> parse_filter_indices(const std::string& text);

/// Zero index ranges "1..10" or "3" or "1,2,5". Throws Errc::parse_error.
std::vector<int> parse_index_range(const std::string& text);

struct TraceFile {
    std::optional<int> zero_index;
    bool partial = false;
    FixedPointSequence seq{RaySpec::positive_real(), Progression{}};
};

/// Trace CSV: '#' header lines with the ray, progression, target, center and
/// flags, then n,x,phi_re,phi_im,residual,logoff_re,logoff_im (the last two
/// empty for points without a stored log offset).
void write_trace_csv(std::ostream& os, const FixedPointSequence& seq, std::optional<int> zero_index = std::nullopt,
                     bool partial = false);
/// Throws Errc::parse_error.
TraceFile read_trace_csv(std::istream& is);

/// n,theta,log_r,delta,big_delta,d_h with the window in a header comment.
/// delta, big_delta and d_h (indexed by h) are left empty past their ends.
void write_stats_csv(std::ostream& os, const PolarTrace& trace, int K);

}  // namespace zvdl
