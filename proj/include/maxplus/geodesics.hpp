#pragma once

#include <string>
#include <vector>

#include "maxplus/harmonic.hpp"
#include "maxplus/martin.hpp"
#include "maxplus/measures.hpp"

namespace maxplus {

enum class GeodesicKind { Kernel, URelative, Metric };

inline std::string to_string(GeodesicKind k) {
    switch (k) {
        case GeodesicKind::Kernel: return "kernel";
        case GeodesicKind::URelative: return "u_relative";
        default: return "metric";
    }
}

/// A certified almost-geodesic: a path together with the least parameter
/// beta for which the defining inequality holds at every prefix.
struct GeodesicCertificate {
    std::vector<std::string> path;
    GeodesicKind kind = GeodesicKind::Kernel;
    double beta = 0.0;
    std::string reference; // basepoint label, or "u" for the u-relative kind

    // Filled by the witness construction.
    bool complete = true;      // false when the horizon ran out before the
                               // tail stabilized on a single column
    std::string target_point;  // Martin column of the final state
    double gap = 0.0;          // geodesic gap at (start, target_point)
    bool prefix_ok = true;     // beta <= delta0 + tol
};

namespace detail {

inline std::vector<std::size_t> path_indices(const StateList& states,
                                             const std::vector<std::string>& path) {
    if (path.empty()) throw DimensionMismatchError("empty path");
    std::vector<std::size_t> idx;
    idx.reserve(path.size());
    for (const auto& label : path) idx.push_back(states.index_of(label));
    return idx;
}

/// Prefix sums of step weights; throws BrokenPathError on a -inf step.
inline std::vector<double> prefix_weights(const Kernel& a,
                                          const std::vector<std::size_t>& path) {
    std::vector<double> prefix(path.size(), 0.0);
    for (std::size_t l = 0; l + 1 < path.size(); ++l) {
        const ExtReal step = a.at(path[l], path[l + 1]);
        if (step.is_neg_inf())
            throw BrokenPathError(l, a.states().label(path[l]),
                                  a.states().label(path[l + 1]));
        prefix[l + 1] = prefix[l] + step.value();
    }
    return prefix;
}

} // namespace detail

/// Least beta with A*_{b,i_l} <= beta + A*_{b,i_0} + (path weight up to l)
/// for every prefix. The l = 0 term forces beta >= 0.
inline ExtReal min_parameter_kernel(const MartinInstance& inst,
                                    const std::vector<std::string>& path) {
    const auto idx = detail::path_indices(inst.states(), path);
    const auto prefix = detail::prefix_weights(inst.a, idx);
    const double base0 = inst.astar.at(inst.basepoint, idx[0]).value();
    double beta = 0.0;
    for (std::size_t l = 0; l < idx.size(); ++l) {
        const double target = inst.astar.at(inst.basepoint, idx[l]).value();
        beta = std::max(beta, target - base0 - prefix[l]);
    }
    return ExtReal(beta);
}

/// Least beta with u_{i_0} <= beta + (path weight up to l) + u_{i_l} for
/// every prefix.
inline ExtReal min_parameter_u(const Kernel& a, const MPVector& u,
                               const std::vector<std::string>& path) {
    const auto idx = detail::path_indices(a.states(), path);
    const auto prefix = detail::prefix_weights(a, idx);
    const ExtReal u0 = u.at(idx[0]);
    if (u0.is_neg_inf()) return ExtReal::neg_inf(); // every beta certifies
    double beta = 0.0;
    for (std::size_t l = 0; l < idx.size(); ++l) {
        const ExtReal ul = u.at(idx[l]);
        if (ul.is_neg_inf())
            throw BrokenPathError(l, a.states().label(idx[0]), a.states().label(idx[l]));
        beta = std::max(beta, u0.value() - prefix[l] - ul.value());
    }
    return ExtReal(beta);
}

/// Basepoint change: transports a kernel almost-geodesic parameter from b
/// to new_base. The result is a valid (not necessarily minimal) parameter.
inline ExtReal rebase(const MartinInstance& inst, const std::vector<std::string>& path,
                      ExtReal beta, const std::string& new_base) {
    const auto idx = detail::path_indices(inst.states(), path);
    const std::size_t j = inst.states().index_of(new_base);
    const ExtReal a_j_i0 = inst.astar.at(j, idx[0]);
    if (a_j_i0.is_neg_inf())
        throw UnreachableError(new_base + " cannot reach " + path.front());
    const double transported = beta.value() + inst.astar.at(inst.basepoint, idx[0]).value() -
                               inst.astar.at(inst.basepoint, j).value() - a_j_i0.value();
    return ExtReal(transported);
}

struct TargetBoundReport {
    bool ok = true;
    double worst_slack = std::numeric_limits<double>::infinity();
    std::size_t worst_prefix = 0;
};

/// Checks xi(i_0) <= (path weight up to n) + xi(i_n) + beta for every n.
/// worst_slack is the minimum of RHS - LHS over prefixes.
inline TargetBoundReport target_bound_check(const MartinInstance& inst,
                                 const std::vector<std::string>& path, ExtReal beta,
                                 const MPVector& xi, double tol = kDefaultTol) {
    const auto idx = detail::path_indices(inst.states(), path);
    const auto prefix = detail::prefix_weights(inst.a, idx);
    TargetBoundReport rep;
    const ExtReal xi0 = xi.at(path[0]);
    if (xi0.is_neg_inf()) return rep; // vacuous
    for (std::size_t n = 0; n < idx.size(); ++n) {
        const ExtReal xin = xi.at(path[n]);
        const double slack = xin.is_neg_inf()
                                 ? kNegInf
                                 : prefix[n] + xin.value() + beta.value() - xi0.value();
        if (slack < rep.worst_slack) {
            rep.worst_slack = slack;
            rep.worst_prefix = n;
        }
    }
    rep.ok = rep.worst_slack >= -tol;
    return rep;
}

/// Delta* = u_j - xi(j) - mu_max(xi): the least Delta for which u-relative
/// almost-geodesics from j to xi with parameter Delta + eps exist.
inline ExtReal geodesic_gap(const MartinInstance& inst, const MPVector& u,
                          const std::string& j, const MartinPoint& xi,
                          double tol = kDefaultTol) {
    const ExtReal mu = mu_max(inst, u, xi, tol);
    const ExtReal xij = xi.xi.at(j);
    const ExtReal uj = u.at(j);
    if (uj.is_neg_inf()) return ExtReal::neg_inf();
    if (xij.is_neg_inf() || mu.is_neg_inf())
        throw Error("geodesic_gap: kappa_max(" + j + ", " + xi.name + ") is -inf");
    return ExtReal(uj.value() - xij.value() - mu.value());
}

/// Witness-path construction at finite horizon for a harmonic vector u.
///
/// Runs the four-step induction: candidate set Z from the visited-state
/// constraints, greedy choice of the next anchor, an optimal connecting
/// path from the closure, and the parameter updates (halving the open
/// upper bounds). The returned path is a u-relative almost-geodesic with
/// parameter at most delta0; this is certified post hoc.
inline GeodesicCertificate witness_geodesic(const MartinInstance& inst, const MPVector& u,
                                            const std::string& start, double delta0,
                                            double eps0, std::size_t horizon,
                                            const std::vector<std::string>& visit_order = {},
                                            double tol = kDefaultTol) {
    if (delta0 <= 0 || eps0 <= 0)
        throw Error("witness_geodesic: delta0 and eps0 must be positive");
    const ResidualReport hr = is_harmonic(inst, u, tol);
    if (!hr.verdict) throw NotHarmonicError(hr.worst_state, hr.worst_residual);
    if (u.at(start).is_neg_inf())
        throw Error("witness_geodesic: u is -inf at the start state");

    const std::size_t n_states = inst.size();
    std::vector<std::size_t> visits;
    if (visit_order.empty()) {
        visits.resize(n_states);
        std::iota(visits.begin(), visits.end(), 0);
    } else {
        for (const auto& label : visit_order) visits.push_back(inst.states().index_of(label));
    }

    const TrackedClosure tracked(inst.a);
    const Kernel& aplus = tracked.aplus();

    auto k_of = [&](std::size_t i, std::size_t j) {
        return (inst.astar.at(i, j) + u.at(j)).value();
    };

    std::size_t jn = inst.states().index_of(start);
    double eps = eps0;
    double delta = delta0;
    std::vector<std::size_t> visited; // I_n, in first-visit order
    std::vector<char> seen(n_states, 0);
    std::vector<std::size_t> path{jn};
    std::vector<std::size_t> anchors{jn};

    for (std::size_t n = 0; n < horizon; ++n) {
        const std::size_t in = visits[n % visits.size()];

        // Step 1: candidate set.
        std::vector<std::size_t> z;
        const double ujn = u.at(jn).value();
        for (std::size_t s = 0; s < n_states; ++s) {
            const ExtReal hop = aplus.at(jn, s) + u.at(s);
            if (!(hop.finite() && hop.value() > ujn - delta)) continue;
            bool ok = true;
            for (std::size_t i : visited) {
                const double ks = k_of(i, s);
                const double kj = k_of(i, jn);
                if (!(ks > kj - eps)) {
                    ok = false;
                    break;
                }
            }
            if (ok) z.push_back(s);
        }
        if (z.empty()) throw EmptyZError(n);

        // Step 2: greedy choice (the exact argmax is within every 1/n slack).
        std::size_t jnext = z.front();
        double best = k_of(in, jnext);
        for (std::size_t s : z) {
            const double v = k_of(in, s);
            if (v > best) {
                best = v;
                jnext = s;
            }
        }

        // Step 3: optimal connecting path of length >= 1.
        const std::vector<std::size_t> segment = tracked.path(jn, jnext);
        double seg_weight = 0.0;
        for (std::size_t l = 0; l + 1 < segment.size(); ++l)
            seg_weight += inst.a.at(segment[l], segment[l + 1]).value();
        path.insert(path.end(), segment.begin() + 1, segment.end());
        anchors.push_back(jnext);

        // Step 4: halve the open upper bounds. A floor keeps both
        // parameters above float granularity: below ~1e-16 the strict
        // inequalities of Step 1 stop seeing them and even the stationary
        // candidate drops out. The floor's accumulated slack over the
        // horizon stays below the certification tolerance.
        constexpr double kFloor = 1e-12;
        double eps_bound = std::numeric_limits<double>::infinity();
        for (std::size_t i : visited)
            eps_bound = std::min(eps_bound, eps + k_of(i, jnext) - k_of(i, jn));
        eps = std::isinf(eps_bound) ? eps : std::max(eps_bound / 2, kFloor);
        delta = std::max((delta + u.at(jnext).value() - ujn + seg_weight) / 2, kFloor);

        if (!seen[in]) {
            seen[in] = 1;
            visited.push_back(in);
        }
        jn = jnext;
    }

    GeodesicCertificate cert;
    cert.kind = GeodesicKind::URelative;
    cert.reference = "u";
    cert.path.reserve(path.size());
    for (std::size_t s : path) cert.path.push_back(inst.states().label(s));
    cert.beta = min_parameter_u(inst.a, u, cert.path).value();
    cert.prefix_ok = cert.beta <= delta0 + tol;

    // Target: the Martin column of the final anchor.
    const std::size_t jh = anchors.back();
    MartinPoint target{"K[" + inst.states().label(jh) + "]", MPVector(inst.a.states_ptr()),
                       {jh}, {}, {}};
    for (std::size_t i = 0; i < n_states; ++i)
        target.xi.set(i, tropical_sub(inst.astar.at(i, jh),
                                      inst.astar.at(inst.basepoint, jh)));
    cert.target_point = target.name;
    cert.gap = geodesic_gap(inst, u, start, target, tol).value();

    // Completion: the tail anchors' columns agree within tol.
    cert.complete = true;
    if (anchors.size() >= 3) {
        for (std::size_t a = anchors.size() - 3; a + 1 < anchors.size() && cert.complete; ++a)
            for (std::size_t i = 0; i < n_states && cert.complete; ++i) {
                const ExtReal ca = tropical_sub(inst.astar.at(i, anchors[a]),
                                                inst.astar.at(inst.basepoint, anchors[a]));
                const ExtReal cb = tropical_sub(inst.astar.at(i, anchors[a + 1]),
                                                inst.astar.at(inst.basepoint, anchors[a + 1]));
                if (!approx_eq(ca, cb, tol)) cert.complete = false;
            }
    }
    return cert;
}

} // namespace maxplus
