#include "circkde/io.hpp"

#include "circkde/errors.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace circkde {

namespace {

std::string trim(const std::string& s)
{
  const auto b = s.find_first_not_of(" \t\r\n\"");
  if (b == std::string::npos)
    return {};
  const auto e = s.find_last_not_of(" \t\r\n\"");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_fields(const std::string& line)
{
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string field;
  while (std::getline(ss, field, ','))
    out.push_back(trim(field));
  if (!line.empty() && line.back() == ',')
    out.emplace_back();
  return out;
}

} // namespace

AngleDataset load_csv(const std::string& path, const ColumnRef& column, AngleUnit unit, Direction direction)
{
  std::ifstream in(path);
  if (!in)
    throw DataError("cannot open '" + path + "'");

  std::string line;
  std::size_t line_no = 0;
  std::vector<std::string> header;
  while (std::getline(in, line)) {
    ++line_no;
    if (!trim(line).empty()) {
      header = split_fields(line);
      break;
    }
  }
  if (header.empty())
    throw DataError("'" + path + "' is empty");
  if (line_no == 1 && header.front().size() >= 3 && header.front().compare(0, 3, "\xEF\xBB\xBF") == 0)
    header.front().erase(0, 3);

  std::size_t col = 0;
  if (const auto* name = std::get_if<std::string>(&column)) {
    auto it = std::find(header.begin(), header.end(), *name);
    if (it == header.end())
      throw DataError("'" + path + "': no column named '" + *name + "'");
    col = static_cast<std::size_t>(it - header.begin());
  } else {
    col = std::get<std::size_t>(column);
    if (col >= header.size())
      throw DataError("'" + path + "': column index " + std::to_string(col) + " out of range (" +
                      std::to_string(header.size()) + " columns)");
  }

  AngleDataset ds;
  ds.source = path;
  ds.unit = unit;
  const double scale = unit == AngleUnit::degrees ? pi / 180.0 : 1.0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty())
      continue;
    const auto fields = split_fields(line);
    const std::string where = "'" + path + "' line " + std::to_string(line_no);
    if (col >= fields.size())
      throw DataError(where + ": missing column " + std::to_string(col));
    const std::string& text = fields[col];
    double v = 0.0;
    const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
    if (text.empty() || res.ec != std::errc{} || res.ptr != text.data() + text.size() || !std::isfinite(v))
      throw DataError(where + ": cannot parse '" + text + "' as a number");
    double rad = v * scale;
    if (direction == Direction::clockwise_from_north)
      rad = pi / 2.0 - rad;
    ds.angles.push_back(wrap_angle(rad));
  }
  if (ds.angles.empty())
    throw DataError("'" + path + "' has no data rows");
  return ds;
}

void export_density_grid(const DensityEstimate& estimate,
                         int grid_size,
                         Correction correction,
                         const std::string& path)
{
  if (grid_size < 8)
    throw std::invalid_argument("export_density_grid: grid_size must be at least 8");
  const CorrectedGrid g = correct_nonneg(estimate, correction, grid_size);
  std::ofstream out(path);
  if (!out)
    throw std::runtime_error("cannot open '" + path + "' for writing");
  out << std::setprecision(std::numeric_limits<double>::max_digits10);
  out << "theta,density\n";
  for (std::size_t k = 0; k < g.theta.size(); ++k)
    out << g.theta[k] << ',' << g.density[k] << '\n';
  out.flush();
  if (!out)
    throw std::runtime_error("write to '" + path + "' failed");
}

AngleUnit parse_unit(const std::string& text)
{
  if (text == "radians" || text == "rad")
    return AngleUnit::radians;
  if (text == "degrees" || text == "deg")
    return AngleUnit::degrees;
  throw std::invalid_argument("unknown unit '" + text + "' (radians | degrees)");
}

Direction parse_direction(const std::string& text)
{
  if (text == "counterclockwise" || text == "ccw")
    return Direction::counterclockwise;
  if (text == "clockwise_from_north" || text == "compass")
    return Direction::clockwise_from_north;
  throw std::invalid_argument("unknown direction '" + text +
                              "' (counterclockwise | clockwise_from_north)");
}

Correction parse_correction(const std::string& text)
{
  if (text == "none")
    return Correction::none;
  if (text == "clip")
    return Correction::clip;
  if (text == "clip_renormalize")
    return Correction::clip_renormalize;
  throw std::invalid_argument("unknown correction '" + text + "' (none | clip | clip_renormalize)");
}

} // namespace circkde
