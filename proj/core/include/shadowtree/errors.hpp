#pragma once

#include <stdexcept>
#include <string>

namespace shadowtree {

enum class ErrorCode {
    RejectsArbitrage,
    RejectsDrift,
    RejectsRecombining,
    InvalidArgument,
    DomainError,
    NoBracket,
    NoConvergence,
    NoAdmissibleRoot,
    OffLattice,
    BrokenInvariant,
    InadmissibleDelta,
    IntractableSize,
};

const char* to_string(ErrorCode code);

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what);
    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

}  // namespace shadowtree
