#include "ilt/error.hpp"

namespace ilt {

const char* error_code_name(ErrorCode code) {
    switch (code) {
        case ErrorCode::DivisionByZero: return "DivisionByZero";
        case ErrorCode::UnknownVariable: return "UnknownVariable";
        case ErrorCode::IntegrabilityViolation: return "IntegrabilityViolation";
        case ErrorCode::NameCollision: return "NameCollision";
        case ErrorCode::TowerMismatch: return "TowerMismatch";
        case ErrorCode::ZeroOperator: return "ZeroOperator";
        case ErrorCode::NotFirstOrder: return "NotFirstOrder";
        case ErrorCode::VarCoefficientZero: return "VarCoefficientZero";
        case ErrorCode::ZeroGauge: return "ZeroGauge";
        case ErrorCode::NotInverse: return "NotInverse";
        case ErrorCode::SingularJacobian: return "SingularJacobian";
        case ErrorCode::BadCoordinateMap: return "BadCoordinateMap";
        case ErrorCode::NotAPerfectSquare: return "NotAPerfectSquare";
        case ErrorCode::NotQuadratic: return "NotQuadratic";
        case ErrorCode::NoIlt: return "NoIlt";
        case ErrorCode::ZeroH: return "ZeroH";
        case ErrorCode::ConditionViolated: return "ConditionViolated";
        case ErrorCode::SeedDependsOnVar: return "SeedDependsOnVar";
        case ErrorCode::ZeroTheta: return "ZeroTheta";
        case ErrorCode::ZeroInvariant: return "ZeroInvariant";
        case ErrorCode::NotUnivariate: return "NotUnivariate";
        case ErrorCode::DivisibleByM: return "DivisibleByM";
        case ErrorCode::SeedNotASolution: return "SeedNotASolution";
        case ErrorCode::DegenerateSeeds: return "DegenerateSeeds";
        case ErrorCode::PsiNotProportional: return "PsiNotProportional";
        case ErrorCode::ZeroB: return "ZeroB";
        case ErrorCode::SeedNotEigen: return "SeedNotEigen";
        case ErrorCode::CoefficientDependsOnX: return "CoefficientDependsOnX";
        case ErrorCode::SeedNotAnnihilated: return "SeedNotAnnihilated";
        case ErrorCode::DegeneratePetren: return "DegeneratePetren";
        case ErrorCode::ProportionalInputs: return "ProportionalInputs";
        case ErrorCode::AlphaNotASolution: return "AlphaNotASolution";
        case ErrorCode::DecompositionInvalid: return "DecompositionInvalid";
        case ErrorCode::NotFirstOrderM: return "NotFirstOrderM";
        case ErrorCode::ZeroAlphaCoefficient: return "ZeroAlphaCoefficient";
        case ErrorCode::InternalInconsistency: return "InternalInconsistency";
        case ErrorCode::SyntaxError: return "SyntaxError";
        case ErrorCode::UnknownSymbol: return "UnknownSymbol";
        case ErrorCode::NegativeExponent: return "NegativeExponent";
        case ErrorCode::UsageError: return "UsageError";
    }
    return "UnknownError";
}

}  // namespace ilt
