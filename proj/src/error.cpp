#include "qsym/error.hpp"

namespace qsym {

const char* to_string(ErrorKind k) {
    switch (k) {
        case ErrorKind::NotHermitian: return "NotHermitian";
        case ErrorKind::NoConvergence: return "NoConvergence";
        case ErrorKind::NotUnitary: return "NotUnitary";
        case ErrorKind::ShapeError: return "ShapeError";
        case ErrorKind::NegativeTime: return "NegativeTime";
        case ErrorKind::NotSame: return "NotSame";
        case ErrorKind::ZeroJump: return "ZeroJump";
        case ErrorKind::IndexError: return "IndexError";
        case ErrorKind::CompletionFailed: return "CompletionFailed";
        case ErrorKind::NotConditionII: return "NotConditionII";
        case ErrorKind::NotConditionIII: return "NotConditionIII";
        case ErrorKind::NotSingleCycle: return "NotSingleCycle";
        case ErrorKind::PhaseSumNotInteger: return "PhaseSumNotInteger";
        case ErrorKind::StiffnessError: return "StiffnessError";
        case ErrorKind::SizeMismatch: return "SizeMismatch";
        case ErrorKind::MissingPermutation: return "MissingPermutation";
        case ErrorKind::ParseError: return "ParseError";
        case ErrorKind::DimensionMismatch: return "DimensionMismatch";
        case ErrorKind::UnknownExample: return "UnknownExample";
    }
    return "Unknown";
}

}  // namespace qsym
