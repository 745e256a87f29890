#pragma once

#include <string>
#include <vector>

namespace rheokin::csv {

/// Shortest representation with 17 significant digits (round-trips doubles).
std::string g17(double value);

/// Writes header + rows (already comma-joined) to path; byte-deterministic.
void write_file(const std::string& path, const std::string& header,
                const std::vector<std::string>& rows);

std::string join(const std::vector<std::string>& fields);

}  // namespace rheokin::csv
