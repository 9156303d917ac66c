#pragma once

#include <cstdint>
#include <vector>

#include "maxplus/kernel.hpp"

namespace maxplus {

namespace detail {

/// In-place max-plus Floyd-Warshall. After the call, d[i*n+j] is the maximal
/// weight of a path i -> j of length >= 1 (assuming no positive cycles; with
/// positive cycles the affected entries are finite lower bounds whose
/// diagonal still exposes the divergence).
inline void floyd_warshall(std::vector<double>& d, std::size_t n) {
    for (std::size_t k = 0; k < n; ++k) {
        const double* __restrict dk = d.data() + k * n;
        for (std::size_t i = 0; i < n; ++i) {
            if (i == k) continue;
            const double dik = d[i * n + k];
            if (dik == kNegInf) continue;
            double* __restrict di = d.data() + i * n;
            for (std::size_t j = 0; j < n; ++j) di[j] = std::max(di[j], dik + dk[j]);
        }
    }
}

/// Floyd-Warshall with via-node tracking for path reconstruction.
/// via[i*n+j] = intermediate node index of the last improvement, or -1 for a
/// direct edge.
inline void floyd_warshall_tracked(std::vector<double>& d, std::vector<std::int32_t>& via,
                                   std::size_t n) {
    via.assign(n * n, -1);
    for (std::size_t k = 0; k < n; ++k) {
        const double* dk = d.data() + k * n;
        for (std::size_t i = 0; i < n; ++i) {
            if (i == k) continue;
            const double dik = d[i * n + k];
            if (dik == kNegInf) continue;
            double* di = d.data() + i * n;
            std::int32_t* vi = via.data() + i * n;
            for (std::size_t j = 0; j < n; ++j) {
                const double cand = dik + dk[j];
                if (cand > di[j]) {
                    di[j] = cand;
                    vi[j] = static_cast<std::int32_t>(k);
                }
            }
        }
    }
}

/// Index of a state on a strictly positive cycle, or n if none.
inline std::size_t positive_cycle_state(const std::vector<double>& aplus, std::size_t n,
                                        double tol) {
    for (std::size_t i = 0; i < n; ++i)
        if (aplus[i * n + i] != kNegInf && aplus[i * n + i] > tol) return i;
    return n;
}

} // namespace detail

/// Kleene closure with optimal-path reconstruction. Does not itself check
/// for divergence; kleene_plus/kleene_star wrap it with that check.
class TrackedClosure {
public:
    explicit TrackedClosure(const Kernel& a) : aplus_(a) {
        detail::floyd_warshall_tracked(aplus_.raw(), via_, a.size());
    }

    const Kernel& aplus() const { return aplus_; }

    /// A path i -> j of length >= 1 whose weight equals aplus(i, j).
    /// Returned as state indices including both endpoints.
    std::vector<std::size_t> path(std::size_t i, std::size_t j) const {
        if (aplus_.at(i, j).is_neg_inf())
            throw UnreachableError("no path " + aplus_.states().label(i) + " -> " +
                                   aplus_.states().label(j));
        std::vector<std::size_t> p{i};
        expand(i, j, p);
        return p;
    }

private:
    void expand(std::size_t i, std::size_t j, std::vector<std::size_t>& out) const {
        const std::int32_t k = via_[i * aplus_.size() + j];
        if (k < 0) {
            out.push_back(j); // direct edge
            return;
        }
        expand(i, static_cast<std::size_t>(k), out);
        expand(static_cast<std::size_t>(k), j, out);
    }

    Kernel aplus_;
    std::vector<std::int32_t> via_;
};

namespace detail {

[[noreturn]] inline void throw_divergent(const Kernel& a, std::size_t cycle_state) {
    // Rebuild with tracking only on the error path to recover a witness cycle.
    TrackedClosure tc(a);
    auto idx_path = tc.path(cycle_state, cycle_state);
    std::vector<std::string> cycle;
    cycle.reserve(idx_path.size());
    for (auto s : idx_path) cycle.push_back(a.states().label(s));
    throw DivergentStarError(std::move(cycle));
}

} // namespace detail

/// A+: maximal path weight over paths of length >= 1.
/// Throws DivergentStarError (with a witness cycle) if any entry is +inf,
/// i.e. a strictly positive cycle exists.
inline Kernel kleene_plus(const Kernel& a, double tol = kDefaultTol) {
    Kernel r = a;
    detail::floyd_warshall(r.raw(), a.size());
    const std::size_t bad = detail::positive_cycle_state(r.raw(), a.size(), tol);
    if (bad < a.size()) detail::throw_divergent(a, bad);
    return r;
}

/// A* = I (+) A+, with zero diagonal. Same divergence behavior as kleene_plus.
inline Kernel kleene_star(const Kernel& a, double tol = kDefaultTol) {
    Kernel r = kleene_plus(a, tol);
    const std::size_t n = r.size();
    for (std::size_t i = 0; i < n; ++i)
        r.raw()[i * n + i] = std::max(r.raw()[i * n + i], 0.0);
    return r;
}

/// Both closures from a single Floyd-Warshall run.
struct Closure {
    Kernel aplus;
    Kernel astar;
};

inline Closure closure(const Kernel& a, double tol = kDefaultTol) {
    Kernel plus = a;
    detail::floyd_warshall(plus.raw(), a.size());
    const std::size_t bad = detail::positive_cycle_state(plus.raw(), a.size(), tol);
    if (bad < a.size()) detail::throw_divergent(a, bad);
    Kernel star = plus;
    const std::size_t n = a.size();
    for (std::size_t i = 0; i < n; ++i)
        star.raw()[i * n + i] = std::max(star.raw()[i * n + i], 0.0);
    return {std::move(plus), std::move(star)};
}

} // namespace maxplus
