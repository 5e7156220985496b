#pragma once

namespace dss {

inline constexpr const char* kVersion = "1.0.0";
// Bumped when any artifact CSV schema changes shape or meaning.
inline constexpr const char* kSchemaVersion = "1";

}  // namespace dss
