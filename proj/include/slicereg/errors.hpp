#pragma once

#include <stdexcept>
#include <string>

namespace slicereg {

enum class ErrorCode {
    ZeroDivision,
    NotUnit,
    NotInDomain,
    OnBoundary,
    OnCut,
    OnRealAxis,
    DifferentSpheres,
    SameUnit,
    EmptyCap,
    CapTooSmall,
    NotSliceDomain,
    NotSymmetric,
    MismatchedRealTrace,
    InconsistentSphericalData,
    NotVanishingOnCap,
    NotDivisible,
    IdenticallyZero,
    SingularDenominator,
    NoAnnulus,
    NonConvergence,
    OutsideConvergenceRegion,
    MaxTermsExceeded,
    EssentialSingularity,
    ProbeOutsideValidated,
    ContourNotInDomain,
    BadInput
};

inline const char* to_string(ErrorCode c) {
    switch (c) {
    case ErrorCode::ZeroDivision: return "ZeroDivision";
    case ErrorCode::NotUnit: return "NotUnit";
    case ErrorCode::NotInDomain: return "NotInDomain";
    case ErrorCode::OnBoundary: return "OnBoundary";
    case ErrorCode::OnCut: return "OnCut";
    case ErrorCode::OnRealAxis: return "OnRealAxis";
    case ErrorCode::DifferentSpheres: return "DifferentSpheres";
    case ErrorCode::SameUnit: return "SameUnit";
    case ErrorCode::EmptyCap: return "EmptyCap";
    case ErrorCode::CapTooSmall: return "CapTooSmall";
    case ErrorCode::NotSliceDomain: return "NotSliceDomain";
    case ErrorCode::NotSymmetric: return "NotSymmetric";
    case ErrorCode::MismatchedRealTrace: return "MismatchedRealTrace";
    case ErrorCode::InconsistentSphericalData: return "InconsistentSphericalData";
    case ErrorCode::NotVanishingOnCap: return "NotVanishingOnCap";
    case ErrorCode::NotDivisible: return "NotDivisible";
    case ErrorCode::IdenticallyZero: return "IdenticallyZero";
    case ErrorCode::SingularDenominator: return "SingularDenominator";
    case ErrorCode::NoAnnulus: return "NoAnnulus";
    case ErrorCode::NonConvergence: return "NonConvergence";
    case ErrorCode::OutsideConvergenceRegion: return "OutsideConvergenceRegion";
    case ErrorCode::MaxTermsExceeded: return "MaxTermsExceeded";
    case ErrorCode::EssentialSingularity: return "EssentialSingularity";
    case ErrorCode::ProbeOutsideValidated: return "ProbeOutsideValidated";
    case ErrorCode::ContourNotInDomain: return "ContourNotInDomain";
    case ErrorCode::BadInput: return "BadInput";
    }
    return "Unknown";
}

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}
    ErrorCode code() const noexcept { return code_; }

    // numeric failures exit with 3, everything else is a precondition (2)
    int exit_code() const noexcept {
        switch (code_) {
        case ErrorCode::NonConvergence:
        case ErrorCode::MaxTermsExceeded:
        case ErrorCode::CapTooSmall:
            return 3;
        default:
            return 2;
        }
    }

private:
    ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode c, const std::string& msg) { throw Error(c, msg); }

} // namespace slicereg
