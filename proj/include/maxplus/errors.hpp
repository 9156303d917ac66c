#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace maxplus {

/// Base class for all errors raised by the library.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// A Kleene closure diverged: some entry of A+ is +infinity because a
/// strictly positive-weight cycle is reachable. Carries one witness cycle
/// as a closed state sequence (first label == last label).
class DivergentStarError : public Error {
public:
    std::vector<std::string> cycle;

    explicit DivergentStarError(std::vector<std::string> witness)
        : Error(make_message(witness)), cycle(std::move(witness)) {}

private:
    static std::string make_message(const std::vector<std::string>& c) {
        std::string msg = "divergent closure: positive-weight cycle";
        for (const auto& s : c) msg += " " + s;
        return msg;
    }
};

class DimensionMismatchError : public Error {
public:
    explicit DimensionMismatchError(const std::string& what)
        : Error("dimension mismatch: " + what) {}
};

/// The basepoint cannot reach some state, violating the standing
/// accessibility assumption.
class InaccessibleStateError : public Error {
public:
    std::string state;

    explicit InaccessibleStateError(std::string s)
        : Error("state not accessible from basepoint: " + s), state(std::move(s)) {}
};

/// A declared sequence failed to stabilize within tolerance.
class NonConvergentError : public Error {
public:
    explicit NonConvergentError(const std::string& what)
        : Error("sequence does not stabilize: " + what) {}
};

class NotSuperharmonicError : public Error {
public:
    std::string worst_state;
    double worst_residual;

    NotSuperharmonicError(std::string state, double residual)
        : Error("vector is not superharmonic, worst residual " +
                std::to_string(residual) + " at state " + state),
          worst_state(std::move(state)), worst_residual(residual) {}
};

class NotHarmonicError : public Error {
public:
    std::string worst_state;
    double worst_residual;

    NotHarmonicError(std::string state, double residual)
        : Error("vector is not harmonic, worst residual " +
                std::to_string(residual) + " at state " + state),
          worst_state(std::move(state)), worst_residual(residual) {}
};

/// A path contains a -infinity step, so no finite parameter certifies it.
class BrokenPathError : public Error {
public:
    std::size_t position;

    BrokenPathError(std::size_t pos, const std::string& from, const std::string& to)
        : Error("path broken at step " + std::to_string(pos) + ": no edge " +
                from + " -> " + to),
          position(pos) {}
};

class UnreachableError : public Error {
public:
    explicit UnreachableError(const std::string& what)
        : Error("unreachable: " + what) {}
};

class EmptySupportError : public Error {
public:
    explicit EmptySupportError(const std::string& what)
        : Error("measure has empty support: " + what) {}
};

class DisconnectedError : public Error {
public:
    explicit DisconnectedError(const std::string& what)
        : Error("graph is not connected: " + what) {}
};

class UnknownTemplateError : public Error {
public:
    explicit UnknownTemplateError(const std::string& name)
        : Error("unknown metric template: " + name) {}
};

/// The witness-path construction found an empty candidate set. This cannot
/// happen for a harmonic vector; it signals a tolerance or window artifact.
class EmptyZError : public Error {
public:
    std::size_t step;

    explicit EmptyZError(std::size_t n)
        : Error("empty candidate set at induction step " + std::to_string(n)),
          step(n) {}
};

class ParseError : public Error {
public:
    explicit ParseError(const std::string& what) : Error("parse error: " + what) {}
};

} // namespace maxplus
