#include "nrnet/emit.hpp"

#include <cmath>
#include <cstdlib>
#include <sstream>

#include "nrnet/errors.hpp"
#include "nrnet/format.hpp"
#include "nrnet/svg.hpp"

namespace nrnet {

namespace {

std::string quoted(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out + '"';
}

std::string json_number(double v) {
  return std::isfinite(v) ? format_double(v) : "null";
}

std::string json_optional(const std::optional<double>& v) {
  return v ? json_number(*v) : "null";
}

void json_axis(std::ostringstream& out, const SweepAxis& a, const std::vector<double>& values) {
  out << "{\"name\": " << quoted(a.name) << ", \"min\": " << json_number(a.min) << ", \"max\": " << json_number(a.max)
      << ", \"count\": " << a.count << ", \"log_spaced\": " << (a.log_spaced ? "true" : "false") << ", \"values\": [";
  for (std::size_t i = 0; i < values.size(); ++i) out << (i ? ", " : "") << format_double(values[i]);
  out << "]}";
}

template <class F>
void json_grid(std::ostringstream& out, const PhaseDiagram& d, F&& cell) {
  const std::size_t n1 = d.axis1_values.size();
  out << '[';
  for (std::size_t r = 0; r < d.axis2_values.size(); ++r) {
    out << (r ? ",\n      [" : "\n      [");
    for (std::size_t c = 0; c < n1; ++c) out << (c ? ", " : "") << cell(r * n1 + c);
    out << ']';
  }
  out << "\n    ]";
}

}  // namespace

Format parse_format(const std::string& name) {
  if (name == "csv") return Format::csv;
  if (name == "json") return Format::json;
  if (name == "svg") return Format::svg;
  throw ParameterError("format must be csv, json or svg (got '" + name + "')");
}

std::string format_extension(Format f) {
  switch (f) {
    case Format::csv: return "csv";
    case Format::json: return "json";
    case Format::svg: return "svg";
  }
  return "";
}

std::string diagram_csv(const PhaseDiagram& d) {
  std::ostringstream out;
  out << d.grid.axis1.name << ',' << d.grid.axis2.name << ",phase";
  for (const auto& name : d.field_names) out << ',' << name;
  out << '\n';
  const std::size_t n1 = d.axis1_values.size();
  for (std::size_t c = 0; c < d.cell_count(); ++c) {
    out << format_double(d.axis1_values[c % n1]) << ',' << format_double(d.axis2_values[c / n1]) << ','
        << phase_name(d.phase[c]);
    for (const auto& f : d.fields) {
      out << ',';
      if (f[c]) out << format_double(*f[c]);
    }
    out << '\n';
  }
  return out.str();
}

std::string diagram_json(const PhaseDiagram& d) {
  std::ostringstream out;
  out << "{\n  \"axes\": [\n    ";
  json_axis(out, d.grid.axis1, d.axis1_values);
  out << ",\n    ";
  json_axis(out, d.grid.axis2, d.axis2_values);
  out << "\n  ],\n";
  out << "  \"fixed\": " << nlohmann::json(d.grid.fixed).dump() << ",\n";
  out << "  \"kappa_from_zeta\": " << (d.grid.kappa_from_zeta ? "true" : "false") << ",\n";
  out << "  \"observable\": {\"out_site\": " << d.grid.out_site << ", \"in_site\": " << d.grid.in_site << "},\n";
  out << "  \"phase\": ";
  json_grid(out, d, [&](std::size_t c) { return quoted(phase_name(d.phase[c])); });
  out << ",\n  \"fields\": {";
  for (std::size_t f = 0; f < d.fields.size(); ++f) {
    out << (f ? ",\n    " : "\n    ") << quoted(d.field_names[f]) << ": ";
    json_grid(out, d, [&](std::size_t c) { return json_optional(d.fields[f][c]); });
  }
  out << (d.fields.empty() ? "},\n" : "\n  },\n");
  out << "  \"overlays\": [";
  for (std::size_t o = 0; o < d.overlays.size(); ++o) {
    const auto& curve = d.overlays[o];
    out << (o ? ",\n    " : "\n    ") << "{\"name\": " << quoted(curve.name) << ", \"points\": [";
    for (std::size_t p = 0; p < curve.points.size(); ++p) {
      out << (p ? ", " : "") << '[' << json_number(curve.points[p].first) << ", " << json_number(curve.points[p].second) << ']';
    }
    out << "]}";
  }
  out << (d.overlays.empty() ? "]\n" : "\n  ]\n");
  out << "}\n";
  return out.str();
}

std::string diagram_svg(const PhaseDiagram& d) {
  plot::Heatmap h;
  h.cols = static_cast<int>(d.axis1_values.size());
  h.rows = static_cast<int>(d.axis2_values.size());
  h.x = {d.grid.axis1.name, d.grid.axis1.min, d.grid.axis1.max, d.grid.axis1.log_spaced};
  h.y = {d.grid.axis2.name, d.grid.axis2.min, d.grid.axis2.max, d.grid.axis2.log_spaced};
  const auto* gain = d.field("gain");
  h.title = gain ? "gain |S_out,in|^2" : "phase";
  h.color_label = gain ? "log10 gain" : "phase index";
  h.values.resize(d.cell_count());
  for (std::size_t c = 0; c < d.cell_count(); ++c) {
    if (gain) {
      const auto& g = (*gain)[c];
      if (g && *g > 0.0) h.values[c] = std::log10(*g);
    } else {
      h.values[c] = static_cast<double>(d.phase[c]);
    }
  }
  for (const auto& o : d.overlays) h.overlays.push_back({o.name, o.points});
  return plot::heatmap_svg(h);
}

std::filesystem::path emit(const PhaseDiagram& d, Format f, const std::filesystem::path& dir, const std::string& stem) {
  const auto path = dir / (stem + "." + format_extension(f));
  switch (f) {
    case Format::csv: write_text_file(path, diagram_csv(d)); break;
    case Format::json: write_text_file(path, diagram_json(d)); break;
    case Format::svg: write_text_file(path, diagram_svg(d)); break;
  }
  return path;
}

std::size_t CsvTable::column(const std::string& name) const {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == name) return i;
  }
  throw ParameterError("CSV has no column '" + name + "'");
}

std::optional<double> CsvTable::number(std::size_t row, const std::string& name) const {
  const auto& field = rows.at(row).at(column(name));
  if (field.empty()) return std::nullopt;
  char* end = nullptr;
  const double v = std::strtod(field.c_str(), &end);
  if (end != field.c_str() + field.size()) throw ParameterError("CSV field '" + field + "' is not a number");
  return v;
}

CsvTable parse_csv(std::string_view text) {
  CsvTable t;
  bool first = true;
  std::size_t start = 0;
  while (start < text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    start = end + 1;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::size_t p = 0;
    while (true) {
      const std::size_t q = line.find(',', p);
      fields.emplace_back(line.substr(p, q == std::string_view::npos ? std::string_view::npos : q - p));
      if (q == std::string_view::npos) break;
      p = q + 1;
    }
    if (first) {
      t.header = std::move(fields);
      first = false;
    } else {
      if (fields.size() != t.header.size()) throw ParameterError("CSV row has the wrong number of fields");
      t.rows.push_back(std::move(fields));
    }
  }
  return t;
}

}  // namespace nrnet
