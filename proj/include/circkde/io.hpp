#pragma once

#include "circkde/estimator.hpp"

#include <string>
#include <variant>

namespace circkde {

enum class AngleUnit
{
  radians,
  degrees,
};

enum class Direction
{
  counterclockwise,
  //! Compass bearings: x maps to wrap(pi/2 - x).
  clockwise_from_north,
};

struct AngleDataset
{
  Sample angles;
  std::string source;
  AngleUnit unit = AngleUnit::radians;
  std::size_t n() const noexcept { return angles.size(); }
};

//! Column by header name or by zero-based index.
using ColumnRef = std::variant<std::string, std::size_t>;

//! Reads one column of a comma-separated file with a header row. Empty
//! lines are skipped. Throws DataError for a missing file or column, an
//! unparseable value (naming the line) or a file without data rows.
AngleDataset load_csv(const std::string& path,
                      const ColumnRef& column,
                      AngleUnit unit = AngleUnit::radians,
                      Direction direction = Direction::counterclockwise);

//! Writes "theta,density" rows on the grid 2pi k / G, with the correction
//! applied (Correction::none exports the raw estimate).
void export_density_grid(const DensityEstimate& estimate,
                         int grid_size,
                         Correction correction,
                         const std::string& path);

AngleUnit parse_unit(const std::string& text);
Direction parse_direction(const std::string& text);
Correction parse_correction(const std::string& text);

} // namespace circkde
