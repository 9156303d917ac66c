#pragma once

#include <memory>
#include <string>
#include <unordered_map>
#include <vector>

#include "maxplus/errors.hpp"
#include "maxplus/extreal.hpp"

namespace maxplus {

/// Immutable ordered list of state labels with label -> index lookup.
/// Shared between kernels and vectors over the same state set.
class StateList {
public:
    explicit StateList(std::vector<std::string> labels) : labels_(std::move(labels)) {
        index_.reserve(labels_.size());
        for (std::size_t i = 0; i < labels_.size(); ++i) {
            auto [it, inserted] = index_.emplace(labels_[i], i);
            if (!inserted)
                throw DimensionMismatchError("duplicate state label: " + labels_[i]);
        }
    }

    std::size_t size() const { return labels_.size(); }
    const std::string& label(std::size_t i) const { return labels_[i]; }
    const std::vector<std::string>& labels() const { return labels_; }

    bool contains(const std::string& label) const { return index_.count(label) != 0; }

    std::size_t index_of(const std::string& label) const {
        auto it = index_.find(label);
        if (it == index_.end())
            throw DimensionMismatchError("unknown state label: " + label);
        return it->second;
    }

    bool operator==(const StateList& other) const { return labels_ == other.labels_; }

private:
    std::vector<std::string> labels_;
    std::unordered_map<std::string, std::size_t> index_;
};

using StatesPtr = std::shared_ptr<const StateList>;

inline StatesPtr make_states(std::vector<std::string> labels) {
    return std::make_shared<const StateList>(std::move(labels));
}

inline bool same_states(const StatesPtr& a, const StatesPtr& b) {
    return a == b || (a && b && *a == *b);
}

/// Vector over a state set with values in the max-plus semiring.
class MPVector {
public:
    explicit MPVector(StatesPtr states)
        : states_(std::move(states)), v_(states_->size(), kNegInf) {}

    MPVector(StatesPtr states, std::vector<double> values)
        : states_(std::move(states)), v_(std::move(values)) {
        if (v_.size() != states_->size())
            throw DimensionMismatchError("vector length does not match state list");
    }

    static MPVector constant(StatesPtr states, ExtReal c) {
        MPVector u(std::move(states));
        std::fill(u.v_.begin(), u.v_.end(), c.value());
        return u;
    }

    std::size_t size() const { return v_.size(); }
    const StateList& states() const { return *states_; }
    const StatesPtr& states_ptr() const { return states_; }

    ExtReal at(std::size_t i) const { return ExtReal(v_[i]); }
    ExtReal at(const std::string& label) const { return ExtReal(v_[states_->index_of(label)]); }
    void set(std::size_t i, ExtReal x) { v_[i] = x.value(); }
    void set(const std::string& label, ExtReal x) { v_[states_->index_of(label)] = x.value(); }

    const std::vector<double>& raw() const { return v_; }
    std::vector<double>& raw() { return v_; }

private:
    StatesPtr states_;
    std::vector<double> v_;
};

/// Square max-plus matrix over a state set. Entries default to -infinity.
class Kernel {
public:
    explicit Kernel(StatesPtr states)
        : states_(std::move(states)), w_(states_->size() * states_->size(), kNegInf) {}

    static Kernel identity(StatesPtr states) {
        Kernel k(std::move(states));
        for (std::size_t i = 0; i < k.size(); ++i) k.w_[i * k.size() + i] = 0.0;
        return k;
    }

    std::size_t size() const { return states_->size(); }
    const StateList& states() const { return *states_; }
    const StatesPtr& states_ptr() const { return states_; }

    ExtReal at(std::size_t i, std::size_t j) const { return ExtReal(w_[i * size() + j]); }
    ExtReal at(const std::string& i, const std::string& j) const {
        return at(states_->index_of(i), states_->index_of(j));
    }
    void set(std::size_t i, std::size_t j, ExtReal x) { w_[i * size() + j] = x.value(); }
    void set(const std::string& i, const std::string& j, ExtReal x) {
        set(states_->index_of(i), states_->index_of(j), x);
    }

    const std::vector<double>& raw() const { return w_; }
    std::vector<double>& raw() { return w_; }

private:
    StatesPtr states_;
    std::vector<double> w_;
};

namespace detail {
inline void require_same_states(const StatesPtr& a, const StatesPtr& b) {
    if (!same_states(a, b))
        throw DimensionMismatchError("operands use different state lists");
}
} // namespace detail

/// (A (x) u)_i = max_j (A_ij + u_j).
inline MPVector mat_vec(const Kernel& a, const MPVector& u) {
    detail::require_same_states(a.states_ptr(), u.states_ptr());
    const std::size_t n = a.size();
    MPVector r(a.states_ptr());
    const double* w = a.raw().data();
    const double* x = u.raw().data();
    for (std::size_t i = 0; i < n; ++i) {
        double best = kNegInf;
        const double* row = w + i * n;
        for (std::size_t j = 0; j < n; ++j) best = std::max(best, row[j] + x[j]);
        r.set(i, ExtReal(best));
    }
    return r;
}

/// (A (x) B)_ij = max_k (A_ik + B_kj).
inline Kernel mat_mul(const Kernel& a, const Kernel& b) {
    detail::require_same_states(a.states_ptr(), b.states_ptr());
    const std::size_t n = a.size();
    Kernel r(a.states_ptr());
    const double* wa = a.raw().data();
    const double* wb = b.raw().data();
    double* wr = r.raw().data();
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t k = 0; k < n; ++k) {
            const double aik = wa[i * n + k];
            if (aik == kNegInf) continue;
            const double* bk = wb + k * n;
            double* ri = wr + i * n;
            for (std::size_t j = 0; j < n; ++j) ri[j] = std::max(ri[j], aik + bk[j]);
        }
    }
    return r;
}

/// Entrywise max.
inline Kernel kernel_oplus(const Kernel& a, const Kernel& b) {
    detail::require_same_states(a.states_ptr(), b.states_ptr());
    Kernel r = a;
    for (std::size_t i = 0; i < r.raw().size(); ++i)
        r.raw()[i] = std::max(r.raw()[i], b.raw()[i]);
    return r;
}

/// Entrywise a <= b within tol.
inline bool kernel_leq(const Kernel& a, const Kernel& b, double tol = kDefaultTol) {
    detail::require_same_states(a.states_ptr(), b.states_ptr());
    for (std::size_t i = 0; i < a.raw().size(); ++i)
        if (!approx_leq(ExtReal(a.raw()[i]), ExtReal(b.raw()[i]), tol)) return false;
    return true;
}

/// Entrywise equality within tol (-inf pattern must match).
inline bool kernel_eq(const Kernel& a, const Kernel& b, double tol = kDefaultTol) {
    detail::require_same_states(a.states_ptr(), b.states_ptr());
    for (std::size_t i = 0; i < a.raw().size(); ++i)
        if (!approx_eq(ExtReal(a.raw()[i]), ExtReal(b.raw()[i]), tol)) return false;
    return true;
}

inline bool vector_eq(const MPVector& a, const MPVector& b, double tol = kDefaultTol) {
    detail::require_same_states(a.states_ptr(), b.states_ptr());
    for (std::size_t i = 0; i < a.size(); ++i)
        if (!approx_eq(a.at(i), b.at(i), tol)) return false;
    return true;
}

} // namespace maxplus
