#pragma once

#include <stdexcept>
#include <string>

namespace conres {

/// Base class for all conres errors.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Input failed structural validation (bad graph, bad signature, bad parameters).
class ValidationError : public Error {
public:
    using Error::Error;
};

/// A computation could not be carried out on otherwise valid input.
class ComputationError : public Error {
public:
    using Error::Error;
};

// ---- graph / signature validation ----
struct SelfLoop : ValidationError { using ValidationError::ValidationError; };
struct DuplicateEdge : ValidationError { using ValidationError::ValidationError; };
struct NonpositiveWeight : ValidationError { using ValidationError::ValidationError; };
struct DisconnectedGraph : ValidationError { using ValidationError::ValidationError; };
struct DimensionMismatch : ValidationError { using ValidationError::ValidationError; };
struct EdgeSetMismatch : ValidationError { using ValidationError::ValidationError; };
struct NonOrthogonalSwitch : ValidationError { using ValidationError::ValidationError; };
struct InvalidParameter : ValidationError { using ValidationError::ValidationError; };
struct NotOrthonormalInput : ValidationError { using ValidationError::ValidationError; };

// ---- boundary value problems ----
struct EmptyBoundary : ValidationError { using ValidationError::ValidationError; };
struct EmptyInterior : ValidationError { using ValidationError::ValidationError; };
struct SamePair : ValidationError { using ValidationError::ValidationError; };
struct NotHarmonic : ComputationError { using ComputationError::ComputationError; };

// ---- linear algebra ----
struct SingularBlock : ComputationError { using ComputationError::ComputationError; };

// ---- mean path signatures / walks ----
struct UnreachableConditioning : ComputationError { using ComputationError::ComputationError; };
struct DegenerateConditioning : ComputationError { using ComputationError::ComputationError; };
struct AllCensored : ComputationError { using ComputationError::ComputationError; };
struct NotInKernel : ComputationError { using ComputationError::ComputationError; };

// ---- conductance / resistance ----
struct NotAnEdge : ValidationError { using ValidationError::ValidationError; };
struct NotInternallyDisjoint : ValidationError { using ValidationError::ValidationError; };

// ---- decomposition ----
struct KernelDegeneracy : ComputationError { using ComputationError::ComputationError; };
struct NotACycle : ValidationError { using ValidationError::ValidationError; };
struct CriterionMismatch : ComputationError { using ComputationError::ComputationError; };

} // namespace conres
