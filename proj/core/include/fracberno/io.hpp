#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "fracberno/geometry.hpp"
#include "fracberno/grid.hpp"

namespace fracberno {

/// 12 significant digits; non-finite values print as "nan", "inf", "-inf".
std::string format_number(double x);
/// Rounds to the 12 digits that format_number prints.
double round12(double x);

/// Parses {"kind":"ball"|"box"|"polygon"|"star", ...}. Unknown or missing
/// keys throw Error("invalid domain") naming the offending field.
DomainSpec parse_domain(std::string_view json_text);
DomainSpec load_domain(const std::filesystem::path& path);
std::string domain_to_json(const DomainSpec& domain);
std::string polygon_to_json(const Polygon& polygon);

/// Comma separated, one header line, numbers via format_number.
void write_csv(const std::filesystem::path& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows);

/// One JSON header line (dim, lo, nx, ny, h) followed by ny rows of nx values.
void write_grid_function(const std::filesystem::path& path, const Grid& grid, const std::vector<double>& values);
void write_mask(const std::filesystem::path& path, const CellMask& mask);
std::pair<Grid, std::vector<double>> read_grid_function(const std::filesystem::path& path);

std::string read_text(const std::filesystem::path& path);
void write_text(const std::filesystem::path& path, const std::string& text);

}  // namespace fracberno
