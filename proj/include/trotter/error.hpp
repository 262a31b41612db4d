#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace trotter {

enum class Errc {
    NotSymmetric,
    SpectrumViolatesS1,
    NonPositiveSpectrum,
    NegativeTime,
    NonFinite,
    DimensionMismatch,
    TimeOutOfRange,
    NegativeCoefficient,
    NotPSD,
    NegativePotential,
    DegenerateGrid,
    InvalidInterval,
    NonCommutingFamily,
    CapExceeded,
    IndivisibleGrid,
    DomainError,
    FeasibilityViolated,
    TooFewPoints,
    AllBelowFloor,
    ConfigParse,
};

constexpr std::string_view to_string(Errc code) noexcept {
    switch (code) {
        case Errc::NotSymmetric: return "NotSymmetric";
        case Errc::SpectrumViolatesS1: return "SpectrumViolatesS1";
        case Errc::NonPositiveSpectrum: return "NonPositiveSpectrum";
        case Errc::NegativeTime: return "NegativeTime";
        case Errc::NonFinite: return "NonFinite";
        case Errc::DimensionMismatch: return "DimensionMismatch";
        case Errc::TimeOutOfRange: return "TimeOutOfRange";
        case Errc::NegativeCoefficient: return "NegativeCoefficient";
        case Errc::NotPSD: return "NotPSD";
        case Errc::NegativePotential: return "NegativePotential";
        case Errc::DegenerateGrid: return "DegenerateGrid";
        case Errc::InvalidInterval: return "InvalidInterval";
        case Errc::NonCommutingFamily: return "NonCommutingFamily";
        case Errc::CapExceeded: return "CapExceeded";
        case Errc::IndivisibleGrid: return "IndivisibleGrid";
        case Errc::DomainError: return "DomainError";
        case Errc::FeasibilityViolated: return "FeasibilityViolated";
        case Errc::TooFewPoints: return "TooFewPoints";
        case Errc::AllBelowFloor: return "AllBelowFloor";
        case Errc::ConfigParse: return "ConfigParse";
    }
    return "Unknown";
}

// All library failures carry a code so callers (and the CLI exit-code map) can
// dispatch without parsing messages.
class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& message)
        : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

    [[nodiscard]] Errc code() const noexcept { return code_; }

private:
    Errc code_;
};

} // namespace trotter
