#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace flk {

// Error categories map to the tool's exit codes: validation -> 2,
// construction -> 3, usage -> 64.
enum class ErrorKind { validation, construction, usage };

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, std::string name, const std::string& what)
        : std::runtime_error(name + ": " + what), kind_(kind), name_(std::move(name)) {}

    ErrorKind kind() const { return kind_; }
    const std::string& name() const { return name_; }

private:
    ErrorKind kind_;
    std::string name_;
};

#define FLK_DEFINE_ERROR(NAME, KIND)                              \
    struct NAME : Error {                                         \
        explicit NAME(const std::string& w)                       \
            : Error(ErrorKind::KIND, #NAME, w) {}                 \
    };

FLK_DEFINE_ERROR(NotAPermutation, validation)
FLK_DEFINE_ERROR(GroupTooLarge, validation)
FLK_DEFINE_ERROR(NotASubgroup, validation)
FLK_DEFINE_ERROR(NotARepresentation, validation)
FLK_DEFINE_ERROR(NotUnimodular, validation)
FLK_DEFINE_ERROR(TorsionInput, validation)
FLK_DEFINE_ERROR(GroupMismatch, validation)
FLK_DEFINE_ERROR(ShiftBoundExceeded, validation)
FLK_DEFINE_ERROR(TorsionUnsupportedDegree, validation)
FLK_DEFINE_ERROR(ParseError, validation)
FLK_DEFINE_ERROR(ValidationError, validation)
FLK_DEFINE_ERROR(ConstructionFailure, construction)
FLK_DEFINE_ERROR(UsageError, usage)

#undef FLK_DEFINE_ERROR

}  // namespace flk
