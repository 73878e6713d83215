#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "nrnet/sweep.hpp"

namespace nrnet {

enum class Format { csv, json, svg };

Format parse_format(const std::string& name);
std::string format_extension(Format f);

/// One row per cell: axis1, axis2, phase, then every field. Missing values
/// are empty fields; numbers carry 17 significant digits.
std::string diagram_csv(const PhaseDiagram& d);

/// Axes, fixed parameters, fields as [axis2][axis1] arrays (null when
/// missing), phases, overlays.
std::string diagram_json(const PhaseDiagram& d);

/// Heatmap of log10(gain) when gain was sampled, else of the phase index.
std::string diagram_svg(const PhaseDiagram& d);

/// Writes `<dir>/<stem>.<ext>` and returns the path.
std::filesystem::path emit(const PhaseDiagram& d, Format f, const std::filesystem::path& dir, const std::string& stem);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  /// nullopt for an empty field.
  [[nodiscard]] std::optional<double> number(std::size_t row, const std::string& column) const;
  [[nodiscard]] std::size_t column(const std::string& name) const;
};

/// Plain comma-separated text without quoting, as written by this library.
CsvTable parse_csv(std::string_view text);

}  // namespace nrnet
