#include "teichstab/errors.hpp"

namespace teichstab {

std::string_view to_string(ErrorKind kind) {
    switch (kind) {
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::MeanNotZero: return "MeanNotZero";
    case ErrorKind::WrongLength: return "WrongLength";
    case ErrorKind::DegenerateImmersion: return "DegenerateImmersion";
    case ErrorKind::NotInjective: return "NotInjective";
    case ErrorKind::GridMismatch: return "GridMismatch";
    case ErrorKind::AmbiguousRank: return "AmbiguousRank";
    case ErrorKind::TooCloseToContour: return "TooCloseToContour";
    case ErrorKind::NonIntegerWinding: return "NonIntegerWinding";
    case ErrorKind::NotProjective: return "NotProjective";
    case ErrorKind::ChartTooLarge: return "ChartTooLarge";
    case ErrorKind::ChartExceeded: return "ChartExceeded";
    case ErrorKind::InducedTraceInvalid: return "InducedTraceInvalid";
    case ErrorKind::CausticDetected: return "CausticDetected";
    case ErrorKind::ChartExit: return "ChartExit";
    case ErrorKind::ContractionFailed: return "ContractionFailed";
    case ErrorKind::NoConvergence: return "NoConvergence";
    case ErrorKind::GlueMismatch: return "GlueMismatch";
    case ErrorKind::MinimizationDiverged: return "MinimizationDiverged";
    case ErrorKind::OrientationViolated: return "OrientationViolated";
    case ErrorKind::InvalidDilatation: return "InvalidDilatation";
    case ErrorKind::EmptyCloud: return "EmptyCloud";
    case ErrorKind::InvalidConfig: return "InvalidConfig";
    case ErrorKind::Io: return "Io";
    }
    return "Unknown";
}

}  // namespace teichstab
