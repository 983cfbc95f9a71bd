#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace teichstab {

enum class ErrorKind {
    InvalidArgument,
    MeanNotZero,
    WrongLength,
    DegenerateImmersion,
    NotInjective,
    GridMismatch,
    AmbiguousRank,
    TooCloseToContour,
    NonIntegerWinding,
    NotProjective,
    ChartTooLarge,
    ChartExceeded,
    InducedTraceInvalid,
    CausticDetected,
    ChartExit,
    ContractionFailed,
    NoConvergence,
    GlueMismatch,
    MinimizationDiverged,
    OrientationViolated,
    InvalidDilatation,
    EmptyCloud,
    InvalidConfig,
    Io,
};

std::string_view to_string(ErrorKind kind);

/// Every failure raised by the library carries a machine-checkable kind.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

}  // namespace teichstab
