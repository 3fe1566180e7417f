#pragma once

#include <stdexcept>
#include <string>

namespace qsym {

enum class ErrorKind {
    NotHermitian,
    NoConvergence,
    NotUnitary,
    ShapeError,
    NegativeTime,
    NotSame,
    ZeroJump,
    IndexError,
    CompletionFailed,
    NotConditionII,
    NotConditionIII,
    NotSingleCycle,
    PhaseSumNotInteger,
    StiffnessError,
    SizeMismatch,
    MissingPermutation,
    ParseError,
    DimensionMismatch,
    UnknownExample,
};

const char* to_string(ErrorKind k);

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}
    ErrorKind kind() const { return kind_; }

private:
    ErrorKind kind_;
};

}  // namespace qsym
