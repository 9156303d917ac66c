#pragma once

#include <map>
#include <string>
#include <tuple>
#include <unordered_set>
#include <vector>

#include "maxplus/geodesics.hpp"
#include "maxplus/measures.hpp"

namespace maxplus {

struct WeightedGraph {
    std::vector<std::string> nodes;
    std::vector<std::tuple<std::string, std::string, double>> edges; // undirected
};

/// Finite window of a metric space: states, symmetric distance matrix,
/// basepoint, and the states at which the window artificially truncates
/// the ambient space (used by interior-margin checks).
struct MetricInstance {
    StatesPtr states;
    std::vector<double> d; // n*n, finite, symmetric, zero diagonal
    std::size_t basepoint = 0;
    std::unordered_set<std::size_t> truncation_states;

    std::size_t size() const { return states->size(); }
    double at(std::size_t x, std::size_t y) const { return d[x * size() + y]; }
    double at(const std::string& x, const std::string& y) const {
        return at(states->index_of(x), states->index_of(y));
    }
    const std::string& basepoint_label() const { return states->label(basepoint); }
};

/// All-pairs shortest-path metric of a connected, positively weighted
/// undirected graph, computed through the semiring closure on negated
/// weights.
inline MetricInstance graph_metric(const WeightedGraph& g, const std::string& basepoint,
                                   const std::vector<std::string>& truncation = {}) {
    StatesPtr states = make_states(g.nodes);
    Kernel a(states);
    for (std::size_t i = 0; i < states->size(); ++i) a.set(i, i, ExtReal(0.0));
    for (const auto& [x, y, w] : g.edges) {
        if (w <= 0) throw Error("graph_metric: edge weight must be positive");
        const std::size_t i = states->index_of(x);
        const std::size_t j = states->index_of(y);
        a.set(i, j, oplus(a.at(i, j), ExtReal(-w)));
        a.set(j, i, oplus(a.at(j, i), ExtReal(-w)));
    }
    const Kernel astar = kleene_star(a);
    MetricInstance m;
    m.states = states;
    m.basepoint = states->index_of(basepoint);
    m.d.resize(states->size() * states->size());
    for (std::size_t i = 0; i < states->size(); ++i)
        for (std::size_t j = 0; j < states->size(); ++j) {
            const ExtReal v = astar.at(i, j);
            if (v.is_neg_inf())
                throw DisconnectedError(states->label(i) + " / " + states->label(j));
            m.d[i * states->size() + j] = -v.value();
        }
    for (const auto& label : truncation) m.truncation_states.insert(states->index_of(label));
    return m;
}

/// The kernel A_xy = -d(x, y); zero diagonal, max-plus idempotent.
inline Kernel to_kernel(const MetricInstance& m) {
    Kernel a(m.states);
    for (std::size_t i = 0; i < m.size(); ++i)
        for (std::size_t j = 0; j < m.size(); ++j) a.set(i, j, ExtReal(-m.at(i, j)));
    return a;
}

struct DistanceLikeReport {
    bool verdict = true;
    std::size_t pairs_checked = 0;
    std::size_t pairs_skipped = 0;
    std::size_t empty_level_sets = 0;
    struct Violation {
        std::string x;
        double t;
        double level_min; // min over L_t of d(x, .)
        double expected;  // f(x) - t
    };
    std::vector<Violation> violations;
};

/// Window check of the distance-like property:
///   min over {y : f(y) <= t} of d(x, y) = f(x) - t  for t <= f(x).
///
/// Pairs (x, t) whose witness ball of radius f(x) - t reaches within
/// `margin` of a truncation state (or of a state excluded by `active`)
/// are skipped as window-contaminated. Empty level sets are counted, not
/// fatal. When t_grid is empty, the attained values of f are used.
inline DistanceLikeReport is_distance_like(const MetricInstance& m,
                                           const std::vector<double>& f,
                                           std::vector<double> t_grid = {},
                                           double tol = kDefaultTol, double margin = 0.0,
                                           const std::vector<std::size_t>* active = nullptr) {
    if (f.size() != m.size())
        throw DimensionMismatchError("f is not tabulated on the metric window");
    std::vector<std::size_t> xs;
    if (active) {
        xs = *active;
    } else {
        xs.resize(m.size());
        std::iota(xs.begin(), xs.end(), 0);
    }
    std::vector<char> is_active(m.size(), 0);
    for (std::size_t x : xs) is_active[x] = 1;

    // Distance from x to the nearest window artifact: a truncation state or
    // an inactive state.
    std::vector<double> edge_dist(m.size(), std::numeric_limits<double>::infinity());
    for (std::size_t x : xs) {
        for (std::size_t s : m.truncation_states)
            edge_dist[x] = std::min(edge_dist[x], m.at(x, s));
        for (std::size_t y = 0; y < m.size(); ++y)
            if (!is_active[y]) edge_dist[x] = std::min(edge_dist[x], m.at(x, y));
    }

    if (t_grid.empty()) {
        for (std::size_t x : xs) t_grid.push_back(f[x]);
        std::sort(t_grid.begin(), t_grid.end());
        t_grid.erase(std::unique(t_grid.begin(), t_grid.end()), t_grid.end());
    }

    DistanceLikeReport rep;
    for (std::size_t x : xs) {
        for (double t : t_grid) {
            if (t > f[x] + tol) continue;
            const double radius = f[x] - t;
            if (radius >= edge_dist[x] - margin) {
                ++rep.pairs_skipped;
                continue;
            }
            double level_min = std::numeric_limits<double>::infinity();
            for (std::size_t y : xs)
                if (f[y] <= t + tol) level_min = std::min(level_min, m.at(x, y));
            if (std::isinf(level_min)) {
                ++rep.empty_level_sets;
                continue;
            }
            ++rep.pairs_checked;
            if (std::abs(level_min - radius) > tol) {
                rep.verdict = false;
                if (rep.violations.size() < 32)
                    rep.violations.push_back({m.states->label(x), t, level_min, radius});
            }
        }
    }
    return rep;
}

/// A horofunction tabulated on the states where the limit stabilized.
struct HorofunctionWindow {
    StatesPtr states;                 // the full metric window's states
    std::vector<double> h;            // defined at `active` positions
    std::vector<std::size_t> active;  // states where the tail stabilized
    std::vector<std::string> dropped; // truncation-contaminated states
    std::vector<std::string> source_sequence;
};

/// Pointwise stabilized limit of d(., z_n) - d(b, z_n) along a state
/// sequence. States whose tail fails the three-point criterion are dropped
/// and reported; throws NonConvergentError when nearly nothing stabilizes.
inline HorofunctionWindow horofunction_limit(const MetricInstance& m,
                                             const std::vector<std::string>& z_seq,
                                             double tol = kDefaultTol) {
    if (z_seq.empty()) throw DimensionMismatchError("empty sequence");
    std::vector<std::size_t> zs;
    zs.reserve(z_seq.size());
    for (const auto& label : z_seq) zs.push_back(m.states->index_of(label));

    HorofunctionWindow out;
    out.states = m.states;
    out.h.assign(m.size(), 0.0);
    out.source_sequence = z_seq;
    for (std::size_t x = 0; x < m.size(); ++x) {
        std::vector<double> vals;
        vals.reserve(zs.size());
        for (std::size_t z : zs) vals.push_back(m.at(x, z) - m.at(m.basepoint, z));
        if (auto tail = detail::stabilized_tail(vals, tol)) {
            out.h[x] = *tail;
            out.active.push_back(x);
        } else {
            out.dropped.push_back(m.states->label(x));
        }
    }
    if (out.active.size() < 2)
        throw NonConvergentError("horofunction limit stabilizes almost nowhere");
    return out;
}

struct RieffelReport {
    bool ok = false;
    double threshold = std::numeric_limits<double>::infinity();
    std::size_t pairs_checked = 0;
};

/// Rieffel's almost-geodesic test: |d(g(t), g(s)) + d(g(s), g(0)) - t| < eps
/// for all sampled t >= s beyond some threshold. Reports the smallest
/// sampled threshold that works.
inline RieffelReport rieffel_check(const MetricInstance& m,
                                   const std::vector<std::string>& gamma,
                                   const std::vector<double>& times, double eps) {
    if (gamma.size() != times.size() || gamma.empty())
        throw DimensionMismatchError("gamma and times must align and be nonempty");
    if (times.front() != 0.0) throw Error("rieffel_check: parameter set must contain 0");
    std::vector<std::size_t> gs;
    gs.reserve(gamma.size());
    for (const auto& label : gamma) gs.push_back(m.states->index_of(label));

    RieffelReport rep;
    for (std::size_t r = 0; r + 1 < times.size(); ++r) {
        bool all_ok = true;
        std::size_t checked = 0;
        for (std::size_t a = r; a < times.size() && all_ok; ++a) {
            for (std::size_t b = a; b < times.size(); ++b) {
                // s = times[a], t = times[b] >= s
                const double v =
                    m.at(gs[b], gs[a]) + m.at(gs[a], gs[0]) - times[b];
                ++checked;
                if (std::abs(v) >= eps) {
                    all_ok = false;
                    break;
                }
            }
        }
        if (all_ok) {
            rep.ok = true;
            rep.threshold = times[r];
            rep.pairs_checked = checked;
            return rep;
        }
    }
    return rep;
}

struct InfRepReport {
    bool verdict = true;
    std::vector<double> residuals; // aligned with the active states
    std::vector<std::string> active_labels;
    std::string worst_state;
    double worst_residual = 0.0;
};

/// Checks f = min over points h of (h + nu(h)) on the (active) window.
/// nu values of +infinity remove a point from the support.
inline InfRepReport inf_representation_check(const MetricInstance& m,
                                             const std::vector<double>& f,
                                             const std::vector<std::pair<std::string,
                                                                         std::vector<double>>>& points,
                                             const std::map<std::string, double>& nu,
                                             double tol = kDefaultTol,
                                             const std::vector<std::size_t>* active = nullptr) {
    bool any_support = false;
    for (const auto& [name, _] : points) {
        auto it = nu.find(name);
        if (it != nu.end() && !std::isinf(it->second)) any_support = true;
    }
    if (!any_support) throw EmptySupportError("nu is +inf on every point");

    std::vector<std::size_t> xs;
    if (active) {
        xs = *active;
    } else {
        xs.resize(m.size());
        std::iota(xs.begin(), xs.end(), 0);
    }
    InfRepReport rep;
    for (std::size_t x : xs) {
        double best = std::numeric_limits<double>::infinity();
        for (const auto& [name, h] : points) {
            auto it = nu.find(name);
            if (it == nu.end() || std::isinf(it->second)) continue;
            best = std::min(best, h[x] + it->second);
        }
        const double r = f[x] - best;
        rep.residuals.push_back(r);
        rep.active_labels.push_back(m.states->label(x));
        if (std::abs(r) > std::abs(rep.worst_residual)) {
            rep.worst_residual = r;
            rep.worst_state = m.states->label(x);
        }
        if (std::abs(r) > tol) rep.verdict = false;
    }
    return rep;
}

/// A named Busemann point with the ray realizing it.
struct BusemannPoint {
    std::string name;
    std::vector<double> h;          // on all metric window states
    std::vector<std::string> ray;   // state sequence approximating it
};

struct BusemannFamily {
    std::vector<BusemannPoint> points;
    std::vector<BoundaryFamily::Accumulation> accumulation; // in point names
};

struct GreatestNuResult {
    std::map<std::string, double> nu; // +inf outside the support
    InfRepReport representation;
    DistanceLikeReport distance_like;
    MeasuresResult pipeline;
};

/// The greatest nu with f = inf over Busemann points of (h + nu(h)):
/// runs the measures pipeline on the kernel -d with u = -f over the negated
/// Busemann family and returns nu = -mu_min restricted to the family.
inline GreatestNuResult greatest_nu(const MetricInstance& m, const std::vector<double>& f,
                                    const BusemannFamily& family, double tol = kDefaultTol,
                                    double margin = 0.0) {
    GreatestNuResult out;
    out.distance_like = is_distance_like(m, f, {}, tol, margin);

    MartinInstance inst = make_martin_instance(to_kernel(m), m.basepoint_label(), tol);
    MPVector u(m.states);
    for (std::size_t i = 0; i < m.size(); ++i) u.set(i, ExtReal(-f[i]));

    BoundaryFamily fam;
    fam.window = m.states->labels();
    for (const auto& bp : family.points) {
        BoundaryFamily::Point p;
        p.name = bp.name;
        p.values.reserve(bp.h.size());
        for (double v : bp.h) p.values.push_back(-v);
        p.rep_sequence = bp.ray;
        fam.points.push_back(std::move(p));
    }
    fam.accumulation = family.accumulation;

    out.pipeline = mu_min(inst, u, &fam, tol);
    for (const auto& bp : family.points) {
        const ExtReal w = out.pipeline.mumin.at(bp.name);
        out.nu[bp.name] =
            w.is_neg_inf() ? std::numeric_limits<double>::infinity() : -w.value();
    }

    bool any_support = false;
    for (const auto& [_, v] : out.nu)
        if (!std::isinf(v)) any_support = true;
    if (any_support) {
        std::vector<std::pair<std::string, std::vector<double>>> pts;
        for (const auto& bp : family.points) pts.emplace_back(bp.name, bp.h);
        out.representation = inf_representation_check(m, f, pts, out.nu, tol);
    } else {
        // No Busemann point carries weight: f is not representable over the
        // family (it fails strict distance-likeness beyond the window).
        out.representation.verdict = false;
        out.representation.worst_state = m.basepoint_label();
    }
    return out;
}

} // namespace maxplus
