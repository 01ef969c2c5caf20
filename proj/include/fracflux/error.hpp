#pragma once

#include <stdexcept>
#include <string>

namespace fracflux {

enum class ErrorCode {
    GridMismatch,
    AxisRole,
    ComponentMismatch,
    ShapeMismatch,
    Precondition,
    Domain,
    Overflow,
    NonConvergence,
    Parse,
    Io,
};

const char* toString(ErrorCode code);

/// Base exception for every contract violation reported by the library.
class Error : public std::runtime_error {
  public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(toString(code)) + ": " + what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

  private:
    ErrorCode code_;
};

inline const char* toString(ErrorCode code) {
    switch (code) {
        case ErrorCode::GridMismatch: return "grid mismatch";
        case ErrorCode::AxisRole: return "axis role";
        case ErrorCode::ComponentMismatch: return "component mismatch";
        case ErrorCode::ShapeMismatch: return "shape mismatch";
        case ErrorCode::Precondition: return "precondition";
        case ErrorCode::Domain: return "domain";
        case ErrorCode::Overflow: return "overflow";
        case ErrorCode::NonConvergence: return "non-convergence";
        case ErrorCode::Parse: return "parse";
        case ErrorCode::Io: return "io";
    }
    return "error";
}

inline void require(bool condition, ErrorCode code, const std::string& what) {
    if (!condition) throw Error(code, what);
}

}  // namespace fracflux
