#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace tgeom {

enum class Errc {
    dimension_mismatch,
    non_finite,
    unknown_point,
    missing_pair,
    diagonal_violation,
    symmetry_violation,
    invalid_parameter,
    undefined_direction,
    undefined_distance_class,
    degenerate_projection,
    degenerate_skeleton,
    parameter_regime,
    parse_error,
    internal,
};

constexpr std::string_view to_string(Errc code) {
    switch (code) {
    case Errc::dimension_mismatch: return "dimension mismatch";
    case Errc::non_finite: return "non-finite coordinate";
    case Errc::unknown_point: return "unknown point";
    case Errc::missing_pair: return "missing pair";
    case Errc::diagonal_violation: return "diagonal violation";
    case Errc::symmetry_violation: return "symmetry violation";
    case Errc::invalid_parameter: return "invalid parameter";
    case Errc::undefined_direction: return "undefined direction class";
    case Errc::undefined_distance_class: return "undefined distance class";
    case Errc::degenerate_projection: return "degenerate projection";
    case Errc::degenerate_skeleton: return "degenerate skeleton";
    case Errc::parameter_regime: return "parameter regime";
    case Errc::parse_error: return "parse error";
    case Errc::internal: return "internal error";
    }
    return "unknown error";
}

class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& detail)
        : std::runtime_error(std::string(to_string(code)) + ": " + detail), code_(code) {}

    Errc code() const noexcept { return code_; }

private:
    Errc code_;
};

} // namespace tgeom
