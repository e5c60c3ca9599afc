#pragma once

#include <string>
#include <string_view>

#include "modehunt/lattice.hpp"

namespace modehunt {

/// Parses delimiter-separated numeric rows (comma or whitespace, detected
/// from the first line) into a point set; a non-numeric first line is
/// treated as a header and skipped. Errors carry the offending line (and
/// column for bad fields). `origin` labels the input in diagnostics.
PointSet parse_points_text(std::string_view text, const std::string& origin);

/// parse_points_text over a file's contents; errors on unreadable or empty
/// files.
PointSet parse_points(const std::string& path);

/// One point per row, full round-trip decimal precision.
std::string format_points(const PointSet& points, char delimiter = ',');

/// Shortest decimal string that parses back to exactly v; integral values
/// keep a ".0" suffix so the column stays visibly floating-point.
std::string format_double(double v);

/// Writes via a temp file + rename, so failed commands leave no partial
/// output behind.
void write_file_atomic(const std::string& path, std::string_view content);

std::string read_file(const std::string& path);

}  // namespace modehunt
