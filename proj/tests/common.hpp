#pragma once

#include <list>
#include <random>

#include "zvdl/fixpoint.hpp"
#include "zvdl/harness.hpp"

namespace testing {

using zvdl::Complex;

/// Traced once per test binary; later calls reuse it.
inline const zvdl::FixedPointSequence& trace_of(int zero_index, double dx = 1.0, int count = 301) {
    struct Key {
        int n;
        double dx;
        int count;
    };
    static std::list<std::pair<Key, zvdl::FixedPointSequence>> cache;  // stable references
    for (const auto& [k, seq] : cache) {
        if (k.n == zero_index && k.dx == dx && k.count == count) return seq;
    }
    const Complex rho = zvdl::riemann_zero(zero_index);
    const auto nf = zvdl::nearest_fixpoint_to_zero(rho);
    zvdl::TraceOptions opts;
    opts.target = rho;
    cache.emplace_back(Key{zero_index, dx, count},
                       zvdl::trace_ray(zvdl::RaySpec::positive_real(), zvdl::Progression(dx, count), nf.psi, {}, opts));
    return cache.back().second;
}

/// Sequence with the given points, x_n = n, already settled (no model offsets).
inline zvdl::FixedPointSequence synthetic(const std::vector<Complex>& pts, Complex u = {1.0, 0.0}) {
    zvdl::FixedPointSequence seq(zvdl::RaySpec(u), zvdl::Progression(1.0, static_cast<int>(pts.size())));
    for (std::size_t n = 0; n < pts.size(); ++n) seq.points.push_back({double(n), pts[n], 0.0, std::nullopt});
    seq.model_start = pts.size();
    seq.converged = true;
    return seq;
}

inline std::mt19937_64& rng() {
    static std::mt19937_64 g(20240607);
    return g;
}

}  // namespace testing
