#pragma once

#include <map>
#include <string>
#include <unordered_set>
#include <vector>

#include "maxplus/kernel.hpp"
#include "maxplus/martin.hpp"

namespace maxplus {

/// Per-state residual report of a harmonicity or superharmonicity check.
/// residual_i = u_i - max_j (A_ij + u_j).
struct ResidualReport {
    bool verdict = true;
    MPVector residuals;
    std::string worst_state;
    double worst_residual = 0.0; // largest |residual| among checked states
    std::vector<std::string> skipped_states;

    ResidualReport() : residuals(make_states({})) {}
    explicit ResidualReport(StatesPtr states) : residuals(std::move(states)) {}
};

namespace detail {

inline ResidualReport residual_check(const Kernel& a, const MPVector& u, double tol,
                                     bool one_sided,
                                     const std::unordered_set<std::size_t>* skip) {
    detail::require_same_states(a.states_ptr(), u.states_ptr());
    ResidualReport rep(u.states_ptr());
    const MPVector au = mat_vec(a, u);
    for (std::size_t i = 0; i < u.size(); ++i) {
        double r;
        if (u.at(i).is_neg_inf())
            r = au.at(i).is_neg_inf() ? 0.0 : kNegInf; // -inf < finite sup: violated
        else if (au.at(i).is_neg_inf())
            r = std::numeric_limits<double>::infinity(); // u_i > sup = -inf: slack only
        else
            r = u.at(i).value() - au.at(i).value();
        rep.residuals.set(i, ExtReal(r));
        if (skip && skip->count(i)) {
            rep.skipped_states.push_back(u.states().label(i));
            continue;
        }
        const bool bad = one_sided ? !(r >= -tol) : !(r >= -tol && r <= tol);
        const double severity = std::isinf(r) ? std::numeric_limits<double>::max()
                                              : std::abs(r);
        if (bad && (rep.verdict || severity > std::abs(rep.worst_residual))) {
            rep.worst_state = u.states().label(i);
            rep.worst_residual = r;
        }
        if (bad) rep.verdict = false;
    }
    return rep;
}

} // namespace detail

/// Harmonicity check: u_i = max_j (A_ij + u_j) within tol at every state.
/// States in `skip` (window-truncated ones) are excluded from the verdict
/// but still reported.
inline ResidualReport is_harmonic(const Kernel& a, const MPVector& u, double tol = kDefaultTol,
                                  const std::unordered_set<std::size_t>* skip = nullptr) {
    return detail::residual_check(a, u, tol, /*one_sided=*/false, skip);
}

/// Superharmonicity check: u_i >= max_j (A_ij + u_j) - tol at every state.
inline ResidualReport is_superharmonic(const Kernel& a, const MPVector& u,
                                       double tol = kDefaultTol,
                                       const std::unordered_set<std::size_t>* skip = nullptr) {
    return detail::residual_check(a, u, tol, /*one_sided=*/true, skip);
}

inline ResidualReport is_harmonic(const MartinInstance& inst, const MPVector& u,
                                  double tol = kDefaultTol) {
    return is_harmonic(inst.a, u, tol, inst.edge_states.empty() ? nullptr : &inst.edge_states);
}

inline ResidualReport is_superharmonic(const MartinInstance& inst, const MPVector& u,
                                       double tol = kDefaultTol) {
    return is_superharmonic(inst.a, u, tol);
}

/// Max-plus measure, identified with its density. Keys are point names (or
/// state labels for measures supported on columns of a finite instance).
struct Measure {
    enum class Domain { FiniteMartinSpace, BoundaryFamily, Union };

    std::map<std::string, double> density;
    Domain domain = Domain::Union;

    ExtReal at(const std::string& name) const {
        auto it = density.find(name);
        return it == density.end() ? ExtReal::neg_inf() : ExtReal(it->second);
    }

    bool empty_support() const {
        for (const auto& [_, v] : density)
            if (v != kNegInf) return false;
        return true;
    }
};

inline std::string to_string(Measure::Domain d) {
    switch (d) {
        case Measure::Domain::FiniteMartinSpace: return "finite_martin_space";
        case Measure::Domain::BoundaryFamily: return "boundary_family";
        default: return "union";
    }
}

/// Representation check: does u = sup_xi (xi + mu(xi)) hold on the window?
struct RepresentsReport {
    bool verdict = true;
    MPVector residuals;            // u_i - sup_xi (xi_i + mu(xi))
    std::vector<std::string> argmax; // point attaining the sup per state ("" if none)
    std::string worst_state;
    double worst_residual = 0.0;
    std::vector<std::string> skipped_states;

    RepresentsReport() : residuals(make_states({})) {}
    explicit RepresentsReport(StatesPtr states) : residuals(std::move(states)) {}
};

/// Checks u = sup over points of (xi + mu(xi)) entrywise, within tol.
/// Points must be tabulated on u's state list. Throws EmptySupportError if
/// mu assigns -inf to every point.
inline RepresentsReport represents(const std::vector<std::pair<MPVector, std::string>>& points,
                                   const Measure& mu, const MPVector& u,
                                   double tol = kDefaultTol,
                                   const std::unordered_set<std::size_t>* skip = nullptr) {
    if (mu.empty_support()) throw EmptySupportError("no point has finite density");
    RepresentsReport rep(u.states_ptr());
    rep.argmax.assign(u.size(), "");
    std::vector<double> weight;
    weight.reserve(points.size());
    for (const auto& [xi, name] : points) {
        detail::require_same_states(xi.states_ptr(), u.states_ptr());
        weight.push_back(mu.at(name).value());
    }

    for (std::size_t i = 0; i < u.size(); ++i) {
        double best = kNegInf;
        std::size_t best_point = points.size();
        for (std::size_t p = 0; p < points.size(); ++p) {
            if (weight[p] == kNegInf) continue;
            const double v = points[p].first.raw()[i] + weight[p];
            if (v > best && points[p].first.raw()[i] != kNegInf) {
                best = v;
                best_point = p;
            }
        }
        rep.argmax[i] = best_point < points.size() ? points[best_point].second : "";
        double r;
        if (u.at(i).is_neg_inf())
            r = (best == kNegInf) ? 0.0 : kNegInf;
        else if (best == kNegInf)
            r = std::numeric_limits<double>::infinity();
        else
            r = u.at(i).value() - best;
        rep.residuals.set(i, ExtReal(r));
        if (skip && skip->count(i)) {
            rep.skipped_states.push_back(u.states().label(i));
            continue;
        }
        const bool bad = !(r >= -tol && r <= tol);
        const double severity = std::isinf(r) ? std::numeric_limits<double>::max()
                                              : std::abs(r);
        if (bad && (rep.verdict || severity > std::abs(rep.worst_residual))) {
            rep.worst_state = u.states().label(i);
            rep.worst_residual = r;
        }
        if (bad) rep.verdict = false;
    }
    return rep;
}

/// Same check against a pipeline point set; the comparison runs on the
/// point set's window and u is restricted accordingly.
inline RepresentsReport represents(const PointSet& ps, const Measure& mu, const MPVector& u,
                                   double tol = kDefaultTol,
                                   const std::unordered_set<std::size_t>* skip_instance_states =
                                       nullptr) {
    std::vector<std::pair<MPVector, std::string>> pts;
    pts.reserve(ps.points.size());
    for (const auto& p : ps.points) pts.emplace_back(p.xi, p.name);

    MPVector uw(ps.window);
    std::unordered_set<std::size_t> skip_window;
    for (std::size_t w = 0; w < ps.to_instance.size(); ++w) {
        uw.set(w, u.at(ps.to_instance[w]));
        if (skip_instance_states && skip_instance_states->count(ps.to_instance[w]))
            skip_window.insert(w);
    }
    return represents(pts, mu, uw, tol, skip_window.empty() ? nullptr : &skip_window);
}

} // namespace maxplus
