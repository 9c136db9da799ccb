/**
 * Error types shared across the library.
 */

#ifndef MVCHI_ERRORS_HPP
#define MVCHI_ERRORS_HPP

#include <memory>
#include <stdexcept>
#include <string>

namespace mvchi {

class Triangulation;

/// A value fell outside its admissible range (coordinate outside [0,1],
/// malformed fraction, variable index 0, ...).
class DomainError : public std::runtime_error {
public:
    explicit DomainError(const std::string& what) : std::runtime_error(what) {}
};

/// Parse failure; `position` is the 0-based offset into the input text.
class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& what, std::size_t position)
        : std::runtime_error(what + " (at position " + std::to_string(position) + ")"),
          position(position) {}
    std::size_t position;
};

/// A structural precondition on a complex was violated (edge not present,
/// vertex out of range, simplex not a face, ...).
class StructuralError : public std::runtime_error {
public:
    explicit StructuralError(const std::string& what) : std::runtime_error(what) {}
};

/// The restricting theory has an empty oneset: the presented algebra is
/// trivial and every valuation is 0 by convention.
class InconsistentTheoryError : public std::runtime_error {
public:
    explicit InconsistentTheoryError(const std::string& what) : std::runtime_error(what) {}
};

/// A configured resource cap (blow-up budget, recursion node budget) was
/// exceeded. Carries the partial triangulation when one exists, as a
/// diagnostic only.
class ResourceLimitError : public std::runtime_error {
public:
    explicit ResourceLimitError(const std::string& what,
                                std::shared_ptr<const Triangulation> partial = nullptr)
        : std::runtime_error(what), partial(std::move(partial)) {}
    std::shared_ptr<const Triangulation> partial;
};

/// An internal invariant failed. Always a bug, never a user error.
class InternalError : public std::logic_error {
public:
    explicit InternalError(const std::string& what) : std::logic_error(what) {}
};

} // namespace mvchi

#endif // MVCHI_ERRORS_HPP
