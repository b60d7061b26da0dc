#ifndef QLM_ERRORS_HPP_
#define QLM_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace qlm {

/// Bad arguments, malformed files, out-of-range parameters.  CLI exit code 2.
class InputError : public std::runtime_error {
public:
    explicit InputError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Data outside the numerical regime the solver is trusted in.  CLI exit code 3.
class RegimeError : public std::runtime_error {
public:
    explicit RegimeError(const std::string& msg) : std::runtime_error(msg) {}
};

/// A numerical routine failed to converge or lost accuracy.
class SolverError : public std::runtime_error {
public:
    explicit SolverError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Broken internal invariant; indicates a bug, not bad input.
class InternalError : public std::logic_error {
public:
    explicit InternalError(const std::string& msg) : std::logic_error(msg) {}
};

}  // namespace qlm

#endif  // QLM_ERRORS_HPP_
