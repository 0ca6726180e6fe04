#pragma once

#include <stdexcept>
#include <string>

namespace fintop {

enum class ErrorKind {
    UnknownPoint,
    NotReflexive,
    NotTransitive,
    EmptyList,
    NotAPartition,
    NotOpen,
    NotClosed,
    MalformedElement,
    SpaceMismatch,
    NotContinuous,
    NotEmbedding,
    NotDiffuse,
    NotACover,
    ModeMismatch,
    InvalidAction,
    NotLocalHomeo,
    NegativeInput,
    BudgetExceeded,
    ParseError,
    IoError,
};

inline const char* to_string(ErrorKind k) {
    switch (k) {
        case ErrorKind::UnknownPoint: return "UnknownPoint";
        case ErrorKind::NotReflexive: return "NotReflexive";
        case ErrorKind::NotTransitive: return "NotTransitive";
        case ErrorKind::EmptyList: return "EmptyList";
        case ErrorKind::NotAPartition: return "NotAPartition";
        case ErrorKind::NotOpen: return "NotOpen";
        case ErrorKind::NotClosed: return "NotClosed";
        case ErrorKind::MalformedElement: return "MalformedElement";
        case ErrorKind::SpaceMismatch: return "SpaceMismatch";
        case ErrorKind::NotContinuous: return "NotContinuous";
        case ErrorKind::NotEmbedding: return "NotEmbedding";
        case ErrorKind::NotDiffuse: return "NotDiffuse";
        case ErrorKind::NotACover: return "NotACover";
        case ErrorKind::ModeMismatch: return "ModeMismatch";
        case ErrorKind::InvalidAction: return "InvalidAction";
        case ErrorKind::NotLocalHomeo: return "NotLocalHomeo";
        case ErrorKind::NegativeInput: return "NegativeInput";
        case ErrorKind::BudgetExceeded: return "BudgetExceeded";
        case ErrorKind::ParseError: return "ParseError";
        case ErrorKind::IoError: return "IoError";
    }
    return "Unknown";
}

/// All library errors carry a machine-readable kind plus a human message.
class TopologyError : public std::runtime_error {
public:
    TopologyError(ErrorKind kind, const std::string& msg)
        : std::runtime_error(std::string(to_string(kind)) + ": " + msg), kind_(kind) {}

    ErrorKind kind() const { return kind_; }

private:
    ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& msg) {
    throw TopologyError(kind, msg);
}

}  // namespace fintop
