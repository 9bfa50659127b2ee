#pragma once

#include <map>
#include <string>

namespace solvable_pg {

/// Plain `key = value` lines; `#` starts a comment, blank lines are skipped.
/// Keys are flag names without the leading dashes.
using ConfigMap = std::map<std::string, std::string>;

ConfigMap parse_config(const std::string& text);
/// Throws IoError if the file cannot be read, DomainError on a malformed line.
ConfigMap load_config(const std::string& path);

/// Thread count from SOLVABLE_PG_THREADS, or 0 when unset.
int threads_from_env();

}  // namespace solvable_pg
