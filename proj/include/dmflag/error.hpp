#ifndef DMFLAG_ERROR_HPP
#define DMFLAG_ERROR_HPP

#include <stdexcept>
#include <string>

namespace dmflag {

// Base class for all library errors. Subclasses distinguish the failure
// modes that callers are expected to branch on.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Mixing values from different rings.
class RingMismatch : public Error {
public:
    explicit RingMismatch(const std::string& msg) : Error(msg) {}
};

// Malformed input text (polynomial grammar, dual-element grammar, JSON).
class ParseError : public Error {
public:
    explicit ParseError(const std::string& msg) : Error(msg) {}
};

// Matrix/module shape disagreement.
class ShapeMismatch : public Error {
public:
    explicit ShapeMismatch(const std::string& msg) : Error(msg) {}
};

// d*d != 0; carries one nonzero witness entry of the square.
class NotSquareZero : public Error {
public:
    NotSquareZero(const std::string& msg, int row, int col)
        : Error(msg), row(row), col(col) {}
    int row, col;
};

// A graded object has an entry of the wrong (or mixed) degree.
class NotHomogeneous : public Error {
public:
    NotHomogeneous(const std::string& msg, int row = -1, int col = -1)
        : Error(msg), row(row), col(col) {}
    int row, col;
};

// An operation that needs the grading was called on an ungraded object.
class UngradedInput : public Error {
public:
    explicit UngradedInput(const std::string& msg) : Error(msg) {}
};

// Stated operation precondition does not hold.
class PreconditionViolated : public Error {
public:
    explicit PreconditionViolated(const std::string& msg) : Error(msg) {}
};

// A specialization of the generic Koszul data violates a quotient relation.
class RelationViolated : public Error {
public:
    RelationViolated(const std::string& msg, int weight_a, int weight_b,
                     std::string witness)
        : Error(msg), weight_a(weight_a), weight_b(weight_b),
          witness(std::move(witness)) {}
    int weight_a, weight_b;
    std::string witness;  // printed nonzero coefficient
};

// An entry required to lie in an ideal does not.
class MembershipFailure : public Error {
public:
    MembershipFailure(const std::string& msg, int level, std::string entry)
        : Error(msg), level(level), entry(std::move(entry)) {}
    int level;
    std::string entry;
};

// A lift through the anchor's next differential does not exist; the anchor
// is not a resolution (or the homology is not a complete intersection).
class ExactnessFailure : public Error {
public:
    ExactnessFailure(const std::string& msg, int level)
        : Error(msg), level(level) {}
    int level;
};

class UnknownGallery : public Error {
public:
    explicit UnknownGallery(const std::string& msg) : Error(msg) {}
};

}  // namespace dmflag

#endif
