#pragma once
#include <stdexcept>
#include <string>

namespace lf {

enum class Err {
    InvalidDegree,
    InconsistentPair,
    NotRepresentable,
    IncompatibleInput,
    IceRuleViolated,
    TooLarge,
    OddStepCount,
    EncodingMismatch,
    InsufficientSamples,
    InsufficientPoints,
    RhombusOutOfDomain,
    AnnulusOutOfDomain,
    NotSimplyConnected,
    EmptyDomain,
    UnknownField,
    OutOfRange,
    ConflictingFlags,
    BadInput
};

const char* err_name(Err e);

struct Error : std::runtime_error {
    Err code;
    Error(Err c, const std::string& msg);
};

}  // namespace lf
