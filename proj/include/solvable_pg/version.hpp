#pragma once

namespace solvable_pg {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace solvable_pg
