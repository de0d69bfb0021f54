#include "shadowtree/errors.hpp"

namespace shadowtree {

const char* to_string(ErrorCode code) {
    switch (code) {
        case ErrorCode::RejectsArbitrage: return "RejectsArbitrage";
        case ErrorCode::RejectsDrift: return "RejectsDrift";
        case ErrorCode::RejectsRecombining: return "RejectsRecombining";
        case ErrorCode::InvalidArgument: return "InvalidArgument";
        case ErrorCode::DomainError: return "DomainError";
        case ErrorCode::NoBracket: return "NoBracket";
        case ErrorCode::NoConvergence: return "NoConvergence";
        case ErrorCode::NoAdmissibleRoot: return "NoAdmissibleRoot";
        case ErrorCode::OffLattice: return "OffLattice";
        case ErrorCode::BrokenInvariant: return "BrokenInvariant";
        case ErrorCode::InadmissibleDelta: return "InadmissibleDelta";
        case ErrorCode::IntractableSize: return "IntractableSize";
    }
    return "Unknown";
}

Error::Error(ErrorCode code, const std::string& what)
    : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

}  // namespace shadowtree
