#pragma once

#include <algorithm>
#include <numeric>
#include <optional>
#include <set>
#include <string>
#include <unordered_set>
#include <vector>

#include "maxplus/closure.hpp"
#include "maxplus/kernel.hpp"

namespace maxplus {

namespace detail {

/// Tail value of a sequence once it has stabilized: the last min(3, size)
/// elements must pairwise agree within tol. Empty or unstable -> nullopt.
inline std::optional<double> stabilized_tail(const std::vector<double>& seq, double tol) {
    if (seq.empty()) return std::nullopt;
    const std::size_t k = std::min<std::size_t>(3, seq.size());
    for (std::size_t a = seq.size() - k; a < seq.size(); ++a)
        for (std::size_t b = a + 1; b < seq.size(); ++b)
            if (!approx_eq(ExtReal(seq[a]), ExtReal(seq[b]), tol)) return std::nullopt;
    return seq.back();
}

/// Stabilized tail of the suffix-maxima sequence: the windowed surrogate of
/// limsup along a declared sequence.
inline std::optional<double> stabilized_limsup(const std::vector<double>& seq, double tol) {
    if (seq.empty()) return std::nullopt;
    std::vector<double> suffix_max(seq.size());
    double m = kNegInf;
    for (std::size_t i = seq.size(); i-- > 0;) {
        m = std::max(m, seq[i]);
        suffix_max[i] = m;
    }
    return stabilized_tail(suffix_max, tol);
}

} // namespace detail

/// A kernel with basepoint and cached closures. The basepoint must reach
/// every state (A*_{b,j} > -inf for all j).
struct MartinInstance {
    Kernel a;
    std::size_t basepoint = 0;
    Kernel aplus;
    Kernel astar;
    double tol = kDefaultTol;
    /// States whose outgoing structure is truncated by the window; equality
    /// checks (harmonicity residuals, window verdicts) skip them.
    std::unordered_set<std::size_t> edge_states;

    const StateList& states() const { return a.states(); }
    std::size_t size() const { return a.size(); }
    const std::string& basepoint_label() const { return a.states().label(basepoint); }
    bool is_edge(std::size_t i) const { return edge_states.count(i) != 0; }
};

inline MartinInstance make_martin_instance(Kernel a, const std::string& basepoint,
                                           double tol = kDefaultTol,
                                           const std::vector<std::string>& edge_states = {}) {
    const std::size_t b = a.states().index_of(basepoint);
    Closure c = closure(a, tol);
    for (std::size_t j = 0; j < a.size(); ++j)
        if (c.astar.at(b, j).is_neg_inf())
            throw InaccessibleStateError(a.states().label(j));
    MartinInstance inst{std::move(a), b, std::move(c.aplus), std::move(c.astar), tol, {}};
    for (const auto& label : edge_states)
        inst.edge_states.insert(inst.a.states().index_of(label));
    return inst;
}

/// Martin kernel K_ij = A*_ij - A*_bj. Row b is identically zero.
inline Kernel martin_kernel(const MartinInstance& inst) {
    const std::size_t n = inst.size();
    Kernel k(inst.a.states_ptr());
    for (std::size_t j = 0; j < n; ++j) {
        const ExtReal norm = inst.astar.at(inst.basepoint, j);
        if (norm.is_neg_inf()) throw InaccessibleStateError(inst.states().label(j));
        for (std::size_t i = 0; i < n; ++i)
            k.set(i, j, tropical_sub(inst.astar.at(i, j), norm));
    }
    return k;
}

/// A point of the (windowed) Martin space: a normalized vector together
/// with the states whose Martin columns realize it exactly (witnesses) and,
/// for boundary points, a declared approximating state sequence.
struct MartinPoint {
    std::string name;
    MPVector xi;
    std::vector<std::size_t> witnesses;    // instance state indices
    std::vector<std::size_t> rep_sequence; // instance state indices
    std::vector<std::string> aliases;
};

namespace detail {

inline bool column_close(const std::vector<double>& a, const std::vector<double>& b,
                         double tol) {
    for (std::size_t i = 0; i < a.size(); ++i)
        if (!approx_eq(ExtReal(a[i]), ExtReal(b[i]), tol)) return false;
    return true;
}

} // namespace detail

/// Distinct columns of the Martin kernel, deduplicated within tol, each
/// annotated with its witness states.
inline std::vector<MartinPoint> finite_martin_space(const MartinInstance& inst,
                                                    double tol = kDefaultTol) {
    const Kernel k = martin_kernel(inst);
    const std::size_t n = inst.size();

    std::vector<std::vector<double>> cols(n, std::vector<double>(n));
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t i = 0; i < n; ++i) cols[j][i] = k.at(i, j).value();

    // Sort column indices lexicographically, then group near-equal runs.
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return cols[a] < cols[b];
    });

    std::vector<MartinPoint> points;
    for (std::size_t pos = 0; pos < n;) {
        std::size_t end = pos + 1;
        while (end < n && detail::column_close(cols[order[pos]], cols[order[end]], tol)) ++end;
        std::vector<std::size_t> witnesses(order.begin() + pos, order.begin() + end);
        std::sort(witnesses.begin(), witnesses.end());
        MartinPoint p{"K[" + inst.states().label(witnesses.front()) + "]",
                      MPVector(inst.a.states_ptr(), cols[witnesses.front()]),
                      std::move(witnesses),
                      {},
                      {}};
        points.push_back(std::move(p));
        pos = end;
    }
    // Deterministic order independent of the sort above: by first witness.
    std::sort(points.begin(), points.end(), [](const MartinPoint& a, const MartinPoint& b) {
        return a.witnesses.front() < b.witnesses.front();
    });
    return points;
}

/// Named boundary points tabulated on a window of states, with declared
/// approximating sequences and accumulation structure.
struct BoundaryFamily {
    std::vector<std::string> window;
    struct Point {
        std::string name;
        std::vector<double> values; // aligned with window
        std::vector<std::string> rep_sequence;
    };
    std::vector<Point> points;
    struct Accumulation {
        std::vector<std::string> sequence; // point names
        std::string limit;                 // point name
    };
    std::vector<Accumulation> accumulation;
};

/// Working point set of the measures pipeline: the finite Martin space
/// merged with the declared boundary family, deduplicated, tabulated on the
/// family window (or on all states when no family is given).
struct PointSet {
    StatesPtr window;                      // labels of the comparison window
    std::vector<std::size_t> to_instance;  // window position -> instance index
    std::vector<MartinPoint> points;       // xi tabulated on `window`
    std::vector<std::pair<std::vector<std::size_t>, std::size_t>> accumulation;

    std::optional<std::size_t> find(const std::string& name) const {
        for (std::size_t i = 0; i < points.size(); ++i) {
            if (points[i].name == name) return i;
            for (const auto& alias : points[i].aliases)
                if (alias == name) return i;
        }
        return std::nullopt;
    }

    std::size_t index_of(const std::string& name) const {
        auto i = find(name);
        if (!i) throw DimensionMismatchError("unknown point name: " + name);
        return *i;
    }
};

inline PointSet build_point_set(const MartinInstance& inst, const BoundaryFamily* fam,
                                double tol = kDefaultTol) {
    PointSet ps;
    if (fam && !fam->window.empty()) {
        ps.window = make_states(fam->window);
        ps.to_instance.reserve(fam->window.size());
        for (const auto& label : fam->window)
            ps.to_instance.push_back(inst.states().index_of(label));
    } else {
        ps.window = inst.a.states_ptr();
        ps.to_instance.resize(inst.size());
        std::iota(ps.to_instance.begin(), ps.to_instance.end(), 0);
    }

    const std::size_t m = ps.to_instance.size();
    const Kernel k = martin_kernel(inst);

    std::vector<std::vector<double>> cols(inst.size(), std::vector<double>(m));
    for (std::size_t j = 0; j < inst.size(); ++j)
        for (std::size_t w = 0; w < m; ++w) cols[j][w] = k.at(ps.to_instance[w], j).value();

    std::vector<std::size_t> order(inst.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return cols[a] < cols[b];
    });
    for (std::size_t pos = 0; pos < inst.size();) {
        std::size_t end = pos + 1;
        while (end < inst.size() &&
               detail::column_close(cols[order[pos]], cols[order[end]], tol))
            ++end;
        std::vector<std::size_t> witnesses(order.begin() + pos, order.begin() + end);
        std::sort(witnesses.begin(), witnesses.end());
        ps.points.push_back(MartinPoint{
            "K[" + inst.states().label(witnesses.front()) + "]",
            MPVector(ps.window, cols[witnesses.front()]), std::move(witnesses), {}, {}});
        pos = end;
    }
    std::sort(ps.points.begin(), ps.points.end(),
              [](const MartinPoint& a, const MartinPoint& b) {
                  return a.witnesses.front() < b.witnesses.front();
              });

    if (fam) {
        for (const auto& fp : fam->points) {
            if (fp.values.size() != m)
                throw DimensionMismatchError("family point " + fp.name +
                                             " not tabulated on the window");
            std::vector<std::size_t> rep;
            rep.reserve(fp.rep_sequence.size());
            for (const auto& label : fp.rep_sequence)
                rep.push_back(inst.states().index_of(label));

            MartinPoint* merged = nullptr;
            for (auto& p : ps.points)
                if (detail::column_close(p.xi.raw(), fp.values, tol)) {
                    merged = &p;
                    break;
                }
            if (merged) {
                if (merged->name.rfind("K[", 0) == 0 && merged->aliases.empty()) {
                    merged->aliases.push_back(merged->name);
                    merged->name = fp.name;
                } else {
                    merged->aliases.push_back(fp.name);
                }
                merged->rep_sequence.insert(merged->rep_sequence.end(), rep.begin(),
                                            rep.end());
            } else {
                ps.points.push_back(MartinPoint{
                    fp.name, MPVector(ps.window, fp.values), {}, std::move(rep), {}});
            }
        }
        for (const auto& acc : fam->accumulation) {
            std::vector<std::size_t> seq;
            seq.reserve(acc.sequence.size());
            for (const auto& name : acc.sequence) seq.push_back(ps.index_of(name));
            ps.accumulation.emplace_back(std::move(seq), ps.index_of(acc.limit));
        }
    }
    return ps;
}

namespace detail {

inline double hflat_value(const MartinInstance& inst, std::size_t i, std::size_t j) {
    const ExtReal v = inst.astar.at(inst.basepoint, i) + inst.aplus.at(i, j);
    if (v.is_neg_inf()) return kNegInf;
    return tropical_sub(v, inst.astar.at(inst.basepoint, j)).value();
}

/// Routes through which a point can be approached: each witness state as a
/// constant sequence, plus the declared rep sequence. Sequence elements
/// that are witnesses of the same point are excluded: on a finite window
/// the declared sequence "arrives" at the point, but the limit it stands
/// for never does, and the arrived element's self-cycle would contaminate
/// the tail.
struct Routes {
    std::vector<std::size_t> witness_states;
    std::vector<std::size_t> rep;
};

inline Routes routes_of(const MartinPoint& p) {
    Routes r;
    r.witness_states = p.witnesses;
    for (std::size_t s : p.rep_sequence) {
        bool arrived = false;
        for (std::size_t w : p.witnesses)
            if (w == s) arrived = true;
        if (!arrived) r.rep.push_back(s);
    }
    return r;
}

} // namespace detail

/// H-flat kernel between two points, evaluated over their admissible
/// approach routes. Witness states contribute exact values; rep sequences
/// contribute stabilized tail values (unstable routes are skipped). Throws
/// NonConvergentError when no route pair yields a value.
inline ExtReal h_flat(const MartinInstance& inst, const MartinPoint& z, const MartinPoint& w,
                      double tol = kDefaultTol) {
    const detail::Routes rz = detail::routes_of(z);
    const detail::Routes rw = detail::routes_of(w);

    // liminf over w's routes for a fixed approach state i of z.
    auto inner_min = [&](std::size_t i) -> std::optional<double> {
        std::optional<double> best;
        for (std::size_t jw : rw.witness_states) {
            const double v = detail::hflat_value(inst, i, jw);
            if (!best || v < *best) best = v;
        }
        if (!rw.rep.empty()) {
            std::vector<double> seq;
            seq.reserve(rw.rep.size());
            for (std::size_t jm : rw.rep) seq.push_back(detail::hflat_value(inst, i, jm));
            if (auto t = detail::stabilized_tail(seq, tol))
                if (!best || *t < *best) best = t;
        }
        return best;
    };

    std::optional<double> result;
    for (std::size_t iw : rz.witness_states) {
        if (auto v = inner_min(iw))
            if (!result || *v > *result) result = v;
    }
    if (!rz.rep.empty()) {
        std::vector<double> seq;
        for (std::size_t im : rz.rep) {
            if (auto v = inner_min(im)) seq.push_back(*v);
        }
        if (auto t = detail::stabilized_tail(seq, tol))
            if (!result || *t > *result) result = t;
    }
    if (!result)
        throw NonConvergentError("h_flat(" + z.name + ", " + w.name +
                                 "): no route stabilizes");
    return ExtReal(*result);
}

/// Points of the (merged) point set with H-flat(w, w) = 0 within tol.
inline std::vector<MartinPoint> minimal_martin_space(const MartinInstance& inst,
                                                     const BoundaryFamily* fam = nullptr,
                                                     double tol = kDefaultTol) {
    PointSet ps = build_point_set(inst, fam, tol);
    std::vector<MartinPoint> minimal;
    for (const auto& p : ps.points) {
        const ExtReal h = h_flat(inst, p, p, tol);
        if (h.finite() && std::abs(h.value()) <= tol) minimal.push_back(p);
    }
    return minimal;
}

/// Consistency report for a declared boundary family.
struct FamilyReport {
    bool ok = true;
    std::vector<std::string> issues;
    std::size_t accumulation_states_checked = 0;
    std::size_t accumulation_states_skipped = 0;

    void fail(std::string what) {
        ok = false;
        issues.push_back(std::move(what));
    }
};

/// Checks basepoint normalization, rep-sequence approximation, and
/// accumulation consistency. Accumulation values are compared per window
/// state wherever the tail of the declared point sequence stabilizes;
/// truncation-contaminated states are skipped and counted.
inline FamilyReport validate_family(const MartinInstance& inst, const BoundaryFamily& fam,
                                    double family_tol = kDefaultTol) {
    FamilyReport rep;
    std::vector<std::size_t> widx;
    widx.reserve(fam.window.size());
    for (const auto& label : fam.window) widx.push_back(inst.states().index_of(label));

    std::ptrdiff_t bpos = -1;
    for (std::size_t w = 0; w < widx.size(); ++w)
        if (widx[w] == inst.basepoint) bpos = static_cast<std::ptrdiff_t>(w);
    if (bpos < 0) {
        rep.fail("window does not contain the basepoint");
        return rep;
    }

    const Kernel k = martin_kernel(inst);
    auto point_by_name = [&](const std::string& name) -> const BoundaryFamily::Point* {
        for (const auto& p : fam.points)
            if (p.name == name) return &p;
        return nullptr;
    };

    for (const auto& p : fam.points) {
        if (p.values.size() != fam.window.size()) {
            rep.fail("point " + p.name + " not tabulated on the window");
            continue;
        }
        if (!approx_eq(ExtReal(p.values[bpos]), ExtReal(0.0), family_tol))
            rep.fail("point " + p.name + " is not 0 at the basepoint");
        if (!p.rep_sequence.empty()) {
            const std::size_t last = inst.states().index_of(p.rep_sequence.back());
            double worst = 0.0;
            for (std::size_t w = 0; w < widx.size(); ++w) {
                const ExtReal kv = k.at(widx[w], last);
                if (!approx_eq(kv, ExtReal(p.values[w]), family_tol)) {
                    const double d = kv.is_neg_inf() || p.values[w] == kNegInf
                                         ? std::numeric_limits<double>::max()
                                         : std::abs(kv.value() - p.values[w]);
                    worst = std::max(worst, d);
                }
            }
            if (worst > 0.0)
                rep.fail("rep sequence of " + p.name +
                         " does not reach the point on the window (worst gap " +
                         std::to_string(worst) + ")");
        }
    }

    for (const auto& acc : fam.accumulation) {
        const BoundaryFamily::Point* limit = point_by_name(acc.limit);
        if (!limit) {
            rep.fail("accumulation limit " + acc.limit + " is not a family point");
            continue;
        }
        std::vector<const BoundaryFamily::Point*> seq;
        bool bad = false;
        for (const auto& name : acc.sequence) {
            const auto* p = point_by_name(name);
            if (!p) {
                rep.fail("accumulation sequence member " + name + " is not a family point");
                bad = true;
                break;
            }
            seq.push_back(p);
        }
        if (bad) continue;
        for (std::size_t w = 0; w < fam.window.size(); ++w) {
            std::vector<double> vals;
            vals.reserve(seq.size());
            for (const auto* p : seq) vals.push_back(p->values[w]);
            const auto tail = detail::stabilized_tail(vals, family_tol);
            if (!tail) {
                ++rep.accumulation_states_skipped;
                continue;
            }
            if (approx_eq(ExtReal(*tail), ExtReal(limit->values[w]), family_tol)) {
                ++rep.accumulation_states_checked;
                continue;
            }
            // A tail that disagrees with the limit is a violation only when
            // the sequence visibly moved before settling. A sequence that
            // is constant across the whole window sits on a pre-asymptotic
            // plateau the window cannot decide; skip it.
            bool moved = false;
            for (double v : vals)
                if (!approx_eq(ExtReal(v), ExtReal(*tail), family_tol)) moved = true;
            if (moved) {
                ++rep.accumulation_states_checked;
                rep.fail("accumulation to " + acc.limit + " disagrees at state " +
                         fam.window[w]);
            } else {
                ++rep.accumulation_states_skipped;
            }
        }
    }
    return rep;
}

} // namespace maxplus
