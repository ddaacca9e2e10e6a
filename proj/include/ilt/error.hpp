#pragma once

#include <stdexcept>
#include <string>

namespace ilt {

enum class ErrorCode {
    // field / tower
    DivisionByZero,
    UnknownVariable,
    IntegrabilityViolation,
    NameCollision,
    // operator algebra
    TowerMismatch,
    ZeroOperator,
    NotFirstOrder,
    VarCoefficientZero,
    ZeroGauge,
    NotInverse,
    SingularJacobian,
    BadCoordinateMap,
    NotAPerfectSquare,
    NotQuadratic,
    // ilt engine
    NoIlt,
    ZeroH,
    ConditionViolated,
    SeedDependsOnVar,
    ZeroTheta,
    // classical transforms
    ZeroInvariant,
    NotUnivariate,
    DivisibleByM,
    SeedNotASolution,
    DegenerateSeeds,
    PsiNotProportional,
    ZeroB,
    SeedNotEigen,
    CoefficientDependsOnX,
    SeedNotAnnihilated,
    DegeneratePetren,
    ProportionalInputs,
    AlphaNotASolution,
    DecompositionInvalid,
    // intertwining solver
    NotFirstOrderM,
    ZeroAlphaCoefficient,
    InternalInconsistency,
    // parsing / cli
    SyntaxError,
    UnknownSymbol,
    NegativeExponent,
    UsageError,
};

const char* error_code_name(ErrorCode code);

// Single exception type for the whole library; `code` carries the
// machine-readable classification, what() the human-readable diagnostic.
class Error : public std::runtime_error {
  public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(std::string(error_code_name(code)) + ": " + message), code_(code) {}

    ErrorCode code() const { return code_; }

    // Input errors map to CLI exit code 2, everything else to 1.
    bool is_input_error() const {
        switch (code_) {
            case ErrorCode::SyntaxError:
            case ErrorCode::UnknownSymbol:
            case ErrorCode::NegativeExponent:
            case ErrorCode::UsageError:
                return true;
            default:
                return false;
        }
    }

  private:
    ErrorCode code_;
};

}  // namespace ilt
