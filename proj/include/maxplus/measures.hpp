#pragma once

#include <optional>
#include <string>
#include <vector>

#include "maxplus/harmonic.hpp"
#include "maxplus/martin.hpp"

namespace maxplus {

namespace detail {

/// mu_max without the superharmonicity precondition check. Witness states
/// give exact values; the rep sequence contributes its stabilized tail.
inline ExtReal mu_max_unchecked(const MartinInstance& inst, const MPVector& u,
                                const MartinPoint& target, double tol) {
    const Routes routes = routes_of(target);
    std::optional<double> best;
    for (std::size_t j : routes.witness_states) {
        const ExtReal v = inst.astar.at(inst.basepoint, j) + u.at(j);
        if (!best || v.value() > *best) best = v.value();
    }
    if (!routes.rep.empty()) {
        std::vector<double> seq;
        seq.reserve(routes.rep.size());
        for (std::size_t jm : routes.rep)
            seq.push_back((inst.astar.at(inst.basepoint, jm) + u.at(jm)).value());
        const auto tail = stabilized_tail(seq, tol);
        if (tail) {
            if (!best || *tail > *best) best = *tail;
        } else if (!best) {
            throw NonConvergentError("mu_max(" + target.name +
                                     "): rep sequence tail does not stabilize");
        }
    }
    if (!best)
        throw NonConvergentError("mu_max(" + target.name + "): point has no approach route");
    return ExtReal(*best);
}

} // namespace detail

/// Value of the maximal representing measure at one point:
/// mu_max(w) = limsup over columns approaching w of A*_{bj} + u_j,
/// realized on the window through witness states and the declared sequence.
/// Requires u superharmonic.
inline ExtReal mu_max(const MartinInstance& inst, const MPVector& u, const MartinPoint& target,
                      double tol = kDefaultTol) {
    const ResidualReport sh = is_superharmonic(inst, u, tol);
    if (!sh.verdict) throw NotSuperharmonicError(sh.worst_state, sh.worst_residual);
    return detail::mu_max_unchecked(inst, u, target, tol);
}

/// Evaluator for the kernels used by the order computation:
///   k(i, j)        = A*_ij + u_j              (instance state indices)
///   kappa_max(t,p) = xi_p(t) + mu_max(p)      (window position t)
struct KappaEvaluator {
    const MartinInstance& inst;
    const MPVector& u;
    const PointSet& points;
    std::vector<double> mumax;       // per point
    std::vector<char> column_finite; // optional cache: no -inf entries

    bool col_finite(std::size_t p) const {
        if (p < column_finite.size()) return column_finite[p] != 0;
        for (double v : points.points[p].xi.raw())
            if (v == kNegInf) return false;
        return true;
    }

    ExtReal k(std::size_t i, std::size_t j) const { return inst.astar.at(i, j) + u.at(j); }

    ExtReal kappa_max(std::size_t wpos, std::size_t point) const {
        return points.points[point].xi.at(wpos) + ExtReal(mumax[point]);
    }

    ExtReal kappa_nu(std::size_t wpos, std::size_t point, const Measure& nu) const {
        return points.points[point].xi.at(wpos) + nu.at(points.points[point].name);
    }
};

/// z <=_u w: kappa_max(t, z) <= kappa_max(t, w) + tol for every window
/// position t. Points with mu_max = -inf are below everything.
inline bool order_leq(const KappaEvaluator& eval, std::size_t z, std::size_t w,
                      double tol = kDefaultTol) {
    if (eval.mumax[z] == kNegInf) return true;
    const double mz = eval.mumax[z];
    const double mw = eval.mumax[w];
    const std::vector<double>& xz = eval.points.points[z].xi.raw();
    const std::vector<double>& xw = eval.points.points[w].xi.raw();
    const std::size_t n = xz.size();

    // -inf entries need per-element care; finite columns take a blocked
    // branch-free scan (the hot path of the p^2 order computation).
    if (mw == kNegInf || !eval.col_finite(z) || !eval.col_finite(w)) {
        for (std::size_t t = 0; t < n; ++t) {
            if (xz[t] == kNegInf) continue;
            if (mw == kNegInf || xw[t] == kNegInf) return false;
            if (xz[t] + mz > xw[t] + mw + tol) return false;
        }
        return true;
    }

    const double gap = mw - mz + tol;
    constexpr std::size_t kBlock = 128;
    const double* za = xz.data();
    const double* wa = xw.data();
    for (std::size_t begin = 0; begin < n; begin += kBlock) {
        const std::size_t end = std::min(n, begin + kBlock);
        double w0 = kNegInf, w1 = kNegInf, w2 = kNegInf, w3 = kNegInf;
        std::size_t t = begin;
        for (; t + 4 <= end; t += 4) {
            w0 = std::max(w0, za[t] - wa[t]);
            w1 = std::max(w1, za[t + 1] - wa[t + 1]);
            w2 = std::max(w2, za[t + 2] - wa[t + 2]);
            w3 = std::max(w3, za[t + 3] - wa[t + 3]);
        }
        for (; t < end; ++t) w0 = std::max(w0, za[t] - wa[t]);
        if (std::max(std::max(w0, w1), std::max(w2, w3)) > gap) return false;
    }
    return true;
}

/// The merged point set with mu_max values and the full domination
/// structure of the partial order <=_u.
struct OrderedPointSet {
    PointSet points;
    std::vector<double> mumax;
    std::vector<std::vector<std::size_t>> dominators; // distinct w with z <=_u w
    std::vector<bool> maximal;

    std::size_t size() const { return points.points.size(); }

    std::vector<std::pair<std::size_t, std::size_t>> order_pairs() const {
        std::vector<std::pair<std::size_t, std::size_t>> pairs;
        for (std::size_t z = 0; z < dominators.size(); ++z)
            for (std::size_t w : dominators[z]) pairs.emplace_back(z, w);
        return pairs;
    }
};

/// Builds the point set (finite Martin space merged with the family),
/// computes mu_max per point, and the domination structure.
/// Throws NotSuperharmonicError if u is not superharmonic.
inline OrderedPointSet compute_order(const MartinInstance& inst, const MPVector& u,
                                     const BoundaryFamily* fam = nullptr,
                                     double tol = kDefaultTol) {
    const ResidualReport sh = is_superharmonic(inst, u, tol);
    if (!sh.verdict) throw NotSuperharmonicError(sh.worst_state, sh.worst_residual);

    OrderedPointSet ops;
    ops.points = build_point_set(inst, fam, tol);
    const std::size_t p = ops.points.points.size();
    ops.mumax.resize(p);
    for (std::size_t i = 0; i < p; ++i)
        ops.mumax[i] = detail::mu_max_unchecked(inst, u, ops.points.points[i], tol).value();

    KappaEvaluator eval{inst, u, ops.points, ops.mumax, {}};
    eval.column_finite.resize(p);
    for (std::size_t i = 0; i < p; ++i) {
        bool finite = true;
        for (double v : ops.points.points[i].xi.raw())
            if (v == kNegInf) finite = false;
        eval.column_finite[i] = finite ? 1 : 0;
    }
    ops.dominators.assign(p, {});
    ops.maximal.assign(p, true);
    for (std::size_t z = 0; z < p; ++z) {
        for (std::size_t w = 0; w < p; ++w) {
            if (w == z) continue;
            if (order_leq(eval, z, w, tol)) {
                ops.dominators[z].push_back(w);
                ops.maximal[z] = false;
            }
        }
    }
    return ops;
}

/// m_u: mu_max on maximal points, -inf on points dominated by a distinct
/// point (and on points with mu_max = -inf).
inline Measure m_u(const OrderedPointSet& ops) {
    Measure m;
    m.domain = Measure::Domain::Union;
    for (std::size_t i = 0; i < ops.size(); ++i)
        m.density[ops.points.points[i].name] =
            (ops.maximal[i] && ops.mumax[i] != kNegInf) ? ops.mumax[i] : kNegInf;
    return m;
}

/// Upper semicontinuous hull over the declared accumulation structure:
/// mu_min(xi) = max(m(xi), stabilized limsup of m along each declared
/// sequence converging to xi). Throws NonConvergentError when a declared
/// sequence's suffix maxima fail to stabilize.
inline Measure usc_hull(const PointSet& ps, const Measure& m, double tol = kDefaultTol) {
    Measure hull = m;
    for (const auto& [seq, limit] : ps.accumulation) {
        std::vector<double> vals;
        vals.reserve(seq.size());
        for (std::size_t idx : seq) vals.push_back(m.at(ps.points[idx].name).value());
        const auto limsup = detail::stabilized_limsup(vals, tol);
        if (!limsup)
            throw NonConvergentError("usc_hull: sequence converging to " +
                                     ps.points[limit].name + " does not stabilize");
        double& v = hull.density[ps.points[limit].name];
        v = std::max(v, *limsup);
    }
    return hull;
}

/// Full output of the minimum-representing-measure pipeline.
struct MeasuresResult {
    OrderedPointSet order;
    Measure mumax;  // mu_max as a measure on the point set
    Measure m;      // m_u
    Measure mumin;  // usc hull of m_u
    std::vector<double> hflat_diag;        // H-flat(w, w) per point
    std::vector<bool> minimal;             // |H-flat(w, w)| <= tol
    ResidualReport superharmonic_report;
    ResidualReport harmonic_report;
    bool u_harmonic = false;
    RepresentsReport rep_mumax;
    RepresentsReport rep_mumin;
    /// Restriction of mu_min to the minimal Martin space; the restriction
    /// represents u when u is harmonic. Always computed for reports.
    Measure mumin_restricted;
    std::optional<RepresentsReport> rep_restricted;
};

/// End-to-end pipeline: mu_max -> order -> m_u -> usc hull, plus window
/// representation verdicts for mu_max and mu_min, and the restriction of
/// mu_min to the minimal Martin space.
inline MeasuresResult mu_min(const MartinInstance& inst, const MPVector& u,
                             const BoundaryFamily* fam = nullptr, double tol = kDefaultTol) {
    MeasuresResult r;
    r.order = compute_order(inst, u, fam, tol);
    r.superharmonic_report = is_superharmonic(inst, u, tol);
    r.harmonic_report = is_harmonic(inst, u, tol);
    r.u_harmonic = r.harmonic_report.verdict;

    const std::size_t p = r.order.size();
    const Measure::Domain domain =
        fam ? Measure::Domain::Union : Measure::Domain::FiniteMartinSpace;
    r.mumax.domain = domain;
    for (std::size_t i = 0; i < p; ++i)
        r.mumax.density[r.order.points.points[i].name] = r.order.mumax[i];

    r.m = m_u(r.order);
    r.m.domain = domain;
    r.mumin = usc_hull(r.order.points, r.m, tol);
    r.mumin.domain = domain;

    r.hflat_diag.resize(p);
    r.minimal.assign(p, false);
    for (std::size_t i = 0; i < p; ++i) {
        const auto& pt = r.order.points.points[i];
        const ExtReal h = h_flat(inst, pt, pt, tol);
        r.hflat_diag[i] = h.value();
        r.minimal[i] = h.finite() && std::abs(h.value()) <= tol;
    }

    r.rep_mumax = represents(r.order.points, r.mumax, u, tol);
    r.rep_mumin = represents(r.order.points, r.mumin, u, tol);

    r.mumin_restricted.domain = Measure::Domain::Union;
    for (std::size_t i = 0; i < p; ++i) {
        const auto& name = r.order.points.points[i].name;
        r.mumin_restricted.density[name] =
            r.minimal[i] ? r.mumin.at(name).value() : kNegInf;
    }
    if (!r.mumin_restricted.empty_support())
        r.rep_restricted = represents(r.order.points, r.mumin_restricted, u, tol);
    return r;
}

} // namespace maxplus
