#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace memslab {

enum class ErrorKind {
    NotHermitian,
    NotPSD,
    TraceNotOne,
    NormalizationViolated,
    OutOfRange,
    ZeroVector,
    VanishingSuccess,
    UnsupportedMetric,
    Parse,
};

constexpr std::string_view to_string(ErrorKind kind) noexcept {
    switch (kind) {
    case ErrorKind::NotHermitian: return "NotHermitian";
    case ErrorKind::NotPSD: return "NotPSD";
    case ErrorKind::TraceNotOne: return "TraceNotOne";
    case ErrorKind::NormalizationViolated: return "NormalizationViolated";
    case ErrorKind::OutOfRange: return "OutOfRange";
    case ErrorKind::ZeroVector: return "ZeroVector";
    case ErrorKind::VanishingSuccess: return "VanishingSuccess";
    case ErrorKind::UnsupportedMetric: return "UnsupportedMetric";
    case ErrorKind::Parse: return "Parse";
    }
    return "Unknown";
}

/// Every failure raised by the library carries a kind so callers (and the CLI
/// exit-code mapping) can branch without parsing messages.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& detail)
        : std::runtime_error(std::string(to_string(kind)) + ": " + detail), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

} // namespace memslab
