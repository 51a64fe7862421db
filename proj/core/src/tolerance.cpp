#include "bellsplit/tolerance.hpp"

#include <cstdlib>

#include "bellsplit/errors.hpp"

#ifndef BELLSPLIT_VERSION
#define BELLSPLIT_VERSION "0.0.0"
#endif

namespace bellsplit {

Tolerances tolerance_profile(std::string_view name) {
  if (name == "default") return kDefaultTolerances;
  if (name == "strict") return kStrictTolerances;
  throw InvalidInput("unknown tolerance profile '" + std::string(name) +
                     "' (expected strict or default)");
}

Tolerances tolerances_from_environment() {
  const char* value = std::getenv("BELLSPLIT_TOLERANCE_PROFILE");
  if (value == nullptr || *value == '\0') return kDefaultTolerances;
  return tolerance_profile(value);
}

std::string_view version() { return BELLSPLIT_VERSION; }

void to_json(nlohmann::json& j, const Tolerances& t) {
  j = nlohmann::json{{"construction", t.construction},
                     {"identity", t.identity},
                     {"oracle", t.oracle}};
}

}  // namespace bellsplit
