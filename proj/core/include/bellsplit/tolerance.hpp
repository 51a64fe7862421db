#pragma once

#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

namespace bellsplit {

/// Three-rung tolerance ladder: construction checks, exact identities,
/// and agreement between independent computational routes.
struct Tolerances {
  double construction = 1e-12;
  double identity = 1e-10;
  double oracle = 1e-8;
};

inline constexpr Tolerances kDefaultTolerances{};
inline constexpr Tolerances kStrictTolerances{1e-13, 1e-11, 1e-9};

/// Looks up a named profile ("default" or "strict"); throws InvalidInput otherwise.
Tolerances tolerance_profile(std::string_view name);

/// Profile selected by BELLSPLIT_TOLERANCE_PROFILE, or the default ladder when unset.
Tolerances tolerances_from_environment();

/// Library version string embedded in every report.
std::string_view version();

void to_json(nlohmann::json& j, const Tolerances& t);

}  // namespace bellsplit
