#pragma once

#include <stdexcept>
#include <string>

namespace amdist {

// Base class for all amdist errors.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// exact-ring
class DimensionMismatch : public Error {
public:
    explicit DimensionMismatch(const std::string& msg) : Error(msg) {}
};
class NonLinearInX : public Error {
public:
    explicit NonLinearInX(const std::string& msg) : Error(msg) {}
};
class SingularMatrix : public Error {
public:
    explicit SingularMatrix(const std::string& msg) : Error(msg) {}
};
class DenominatorVanishes : public Error {
public:
    explicit DenominatorVanishes(const std::string& msg) : Error(msg) {}
};
class ParseError : public Error {
public:
    explicit ParseError(const std::string& msg) : Error(msg) {}
};

// graph-structure
class OverlapTooLarge : public Error {
public:
    explicit OverlapTooLarge(const std::string& msg) : Error(msg) {}
};
class CyclicBlockStructure : public Error {
public:
    explicit CyclicBlockStructure(const std::string& msg) : Error(msg) {}
};
class Disconnected : public Error {
public:
    explicit Disconnected(const std::string& msg) : Error(msg) {}
};
class EmptyBlock : public Error {
public:
    explicit EmptyBlock(const std::string& msg) : Error(msg) {}
};
class IncompleteBlockMatrix : public Error {
public:
    explicit IncompleteBlockMatrix(const std::string& msg) : Error(msg) {}
};
class InconsistentAdditiveWeight : public Error {
public:
    explicit InconsistentAdditiveWeight(const std::string& msg) : Error(msg) {}
};
class VertexNotInBlock : public Error {
public:
    explicit VertexNotInBlock(const std::string& msg) : Error(msg) {}
};
class InvalidRestriction : public Error {
public:
    explicit InvalidRestriction(const std::string& msg) : Error(msg) {}
};

// datum-builder
class NegativeExponent : public Error {
public:
    explicit NegativeExponent(const std::string& msg) : Error(msg) {}
};
class NotATree : public Error {
public:
    explicit NotATree(const std::string& msg) : Error(msg) {}
};

// invariants
class VertexMissing : public Error {
public:
    explicit VertexMissing(const std::string& msg) : Error(msg) {}
};
class InadmissibleMinor : public Error {
public:
    explicit InadmissibleMinor(const std::string& msg) : Error(msg) {}
};
class VertexInRemovedSet : public Error {
public:
    explicit VertexInRemovedSet(const std::string& msg) : Error(msg) {}
};
class WrongSpecialization : public Error {
public:
    explicit WrongSpecialization(const std::string& msg) : Error(msg) {}
};

// inverse
class SingularBlock : public Error {
public:
    explicit SingularBlock(const std::string& msg) : Error(msg) {}
};
class SingularDistanceMatrix : public Error {
public:
    explicit SingularDistanceMatrix(const std::string& msg) : Error(msg) {}
};
class NonInvertibleWeight : public Error {
public:
    explicit NonInvertibleWeight(const std::string& msg) : Error(msg) {}
};
class SpecialCaseViolated : public Error {
public:
    explicit SpecialCaseViolated(const std::string& msg) : Error(msg) {}
};
class SingularUpdate : public Error {
public:
    explicit SingularUpdate(const std::string& msg) : Error(msg) {}
};

// hypertree
class InvalidHypertree : public Error {
public:
    explicit InvalidHypertree(const std::string& msg) : Error(msg) {}
};
class RowSumNotConstant : public Error {
public:
    explicit RowSumNotConstant(const std::string& msg) : Error(msg) {}
};

// verifier
class ShapeInfeasible : public Error {
public:
    explicit ShapeInfeasible(const std::string& msg) : Error(msg) {}
};
class TooManyVariables : public Error {
public:
    explicit TooManyVariables(const std::string& msg) : Error(msg) {}
};
class TooManyRejections : public Error {
public:
    explicit TooManyRejections(const std::string& msg) : Error(msg) {}
};

}  // namespace amdist
