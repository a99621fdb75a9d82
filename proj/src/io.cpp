#include "tmap/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <unordered_map>

#include "tmap/mst.hpp"

namespace fs = std::filesystem;

namespace tmap {

namespace {

[[noreturn]] void parse_fail(size_t line_no, const std::string& reason) {
  raise(Errc::parse_error, "line " + std::to_string(line_no) + ": " + reason);
}

bool is_blank_or_comment(const std::string& line) {
  for (char c : line) {
    if (c == '#') return true;
    if (!std::isspace(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

std::vector<std::string> split_whitespace(const std::string& line) {
  std::vector<std::string> tokens;
  std::istringstream in(line);
  std::string token;
  while (in >> token) tokens.push_back(std::move(token));
  return tokens;
}

uint64_t parse_u64(const std::string& token, size_t line_no) {
  uint64_t value = 0;
  const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc{} || ptr != token.data() + token.size())
    parse_fail(line_no, "'" + token + "' is not an unsigned integer");
  return value;
}

double parse_double(const std::string& token, size_t line_no) {
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc{} || ptr != token.data() + token.size())
    parse_fail(line_no, "'" + token + "' is not a number");
  return value;
}

std::string trim(const std::string& s) {
  size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

std::vector<std::string> split_commas(const std::string& line) {
  std::vector<std::string> fields;
  size_t start = 0;
  while (true) {
    const size_t pos = line.find(',', start);
    if (pos == std::string::npos) {
      fields.push_back(trim(line.substr(start)));
      break;
    }
    fields.push_back(trim(line.substr(start, pos - start)));
    start = pos + 1;
  }
  return fields;
}

std::ifstream open_input(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) raise(Errc::parse_error, "cannot open '" + path + "' for reading");
  return in;
}

void parse_sparse_binary(std::ifstream& in, ParsedInput& out) {
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (is_blank_or_comment(line)) continue;
    SparseBinarySet set;
    for (const std::string& token : split_whitespace(line)) {
      const uint64_t value = parse_u64(token, line_no);
      if (value > 0xffffffffull) parse_fail(line_no, "element '" + token + "' exceeds 32 bits");
      if (!set.elements.empty() && value <= set.elements.back())
        parse_fail(line_no, "elements must be strictly ascending");
      set.elements.push_back(static_cast<uint32_t>(value));
    }
    out.sets.push_back(std::move(set));
  }
  if (out.sets.empty()) raise(Errc::empty_input, "no items in input");
}

void parse_dense_csv(std::ifstream& in, ParsedInput& out) {
  std::string line;
  size_t line_no = 0;
  size_t width = 0;
  bool first_content_line = true;
  while (std::getline(in, line)) {
    ++line_no;
    if (is_blank_or_comment(line)) continue;
    const std::vector<std::string> fields = split_commas(line);
    if (first_content_line) {
      first_content_line = false;
      // Header detection: a non-numeric first field marks a header line.
      double probe = 0.0;
      const auto [ptr, ec] =
          std::from_chars(fields[0].data(), fields[0].data() + fields[0].size(), probe);
      if (ec != std::errc{} || ptr != fields[0].data() + fields[0].size()) continue;
    }
    WeightedVector vec;
    vec.weights.reserve(fields.size());
    for (const std::string& field : fields) {
      const double value = parse_double(field, line_no);
      if (!std::isfinite(value)) parse_fail(line_no, "'" + field + "' is not finite");
      if (value < 0) parse_fail(line_no, "'" + field + "' is negative");
      vec.weights.push_back(value);
    }
    if (width == 0) {
      width = vec.weights.size();
    } else if (vec.weights.size() != width) {
      raise(Errc::dimension_mismatch, "line " + std::to_string(line_no) + ": row width " +
                                          std::to_string(vec.weights.size()) +
                                          " differs from previous width " + std::to_string(width));
    }
    out.vectors.push_back(std::move(vec));
  }
  if (out.vectors.empty()) raise(Errc::empty_input, "no items in input");
}

void parse_edge_list(std::ifstream& in, ParsedInput& out) {
  std::string line;
  size_t line_no = 0;
  uint64_t max_id = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (is_blank_or_comment(line)) continue;
    const std::vector<std::string> tokens = split_whitespace(line);
    if (tokens.size() < 2 || tokens.size() > 3)
      parse_fail(line_no, "expected 'u v [w]', got " + std::to_string(tokens.size()) + " fields");
    EdgeListEntry entry;
    const uint64_t u = parse_u64(tokens[0], line_no);
    const uint64_t v = parse_u64(tokens[1], line_no);
    if (u > 0xffffffffull || v > 0xffffffffull) parse_fail(line_no, "node id exceeds 32 bits");
    entry.u = static_cast<uint32_t>(u);
    entry.v = static_cast<uint32_t>(v);
    entry.w = tokens.size() == 3 ? parse_double(tokens[2], line_no) : 1.0;
    max_id = std::max({max_id, u, v});
    out.entries.push_back(entry);
  }
  if (out.entries.empty()) raise(Errc::empty_input, "no edges in input");
  out.edge_node_count = static_cast<uint32_t>(max_id + 1);
}

// --- CSV (RFC 4180) ---------------------------------------------------------

std::string csv_quote(const std::string& field) {
  if (field.find_first_of(",\"\n\r") == std::string::npos) return field;
  std::string quoted = "\"";
  for (char c : field) {
    if (c == '"') quoted += '"';
    quoted += c;
  }
  quoted += '"';
  return quoted;
}

// Parses a full RFC 4180 document: quoted fields may contain commas, quotes
// (doubled) and newlines.
std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
  std::vector<std::vector<std::string>> records;
  std::vector<std::string> record;
  std::string field;
  bool in_quotes = false;
  bool field_started = false;
  size_t i = 0;
  auto end_field = [&]() {
    record.push_back(std::move(field));
    field.clear();
    field_started = false;
  };
  auto end_record = [&]() {
    end_field();
    records.push_back(std::move(record));
    record.clear();
  };
  while (i < text.size()) {
    const char c = text[i];
    if (in_quotes) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field += '"';
          ++i;
        } else {
          in_quotes = false;
        }
      } else {
        field += c;
      }
      ++i;
      continue;
    }
    switch (c) {
      case '"':
        in_quotes = true;
        field_started = true;
        ++i;
        break;
      case ',':
        end_field();
        field_started = true;  // the next field exists even if empty
        ++i;
        break;
      case '\r':
        ++i;
        break;
      case '\n':
        // Blank lines (including a trailing newline) do not form records.
        if (!record.empty() || !field.empty() || field_started) end_record();
        ++i;
        break;
      default:
        field += c;
        field_started = true;
        ++i;
        break;
    }
  }
  if (!field.empty() || field_started || !record.empty()) end_record();
  return records;
}

std::string read_file(const std::string& path) {
  std::ifstream in = open_input(path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_file_atomic(const fs::path& target, const std::string& content) {
  const fs::path tmp = target.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) raise(Errc::output_unwritable, "cannot open '" + tmp.string() + "' for writing");
    out << content;
    out.flush();
    if (!out) raise(Errc::output_unwritable, "failed writing '" + tmp.string() + "'");
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) raise(Errc::output_unwritable, "cannot rename '" + tmp.string() + "' into place");
}

std::string format_fixed6(double value) {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.6f", value);
  return buffer;
}

// --- SVG --------------------------------------------------------------------

constexpr double kSvgSize = 1600.0;
constexpr double kSvgMargin = 40.0;

const char* kPalette12[12] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b",
                              "#e377c2", "#7f7f7f", "#bcbd22", "#17becf", "#aec7e8", "#ffbb78"};

std::string gradient_color(double t) {
  // Linear blend from a low blue to a high red.
  const int low[3] = {0x2b, 0x6c, 0xb0};
  const int high[3] = {0xe5, 0x3e, 0x3e};
  char buffer[8];
  std::snprintf(buffer, sizeof(buffer), "#%02x%02x%02x",
                static_cast<int>(std::lround(low[0] + t * (high[0] - low[0]))),
                static_cast<int>(std::lround(low[1] + t * (high[1] - low[1]))),
                static_cast<int>(std::lround(low[2] + t * (high[2] - low[2]))));
  return buffer;
}

std::vector<std::string> node_colors(size_t n, const Metadata* metadata,
                                     const std::string& color_by) {
  const std::string default_color = "#4c78a8";
  std::vector<std::string> colors(n, default_color);
  if (!metadata || color_by.empty()) return colors;
  const auto it = std::find(metadata->columns.begin(), metadata->columns.end(), color_by);
  if (it == metadata->columns.end())
    raise(Errc::parse_error, "color-by column '" + color_by + "' not found in metadata");
  const size_t col = static_cast<size_t>(it - metadata->columns.begin());

  std::vector<double> numeric(n);
  bool all_numeric = true;
  for (size_t i = 0; i < n; ++i) {
    const std::string& field = metadata->rows[i][col];
    const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), numeric[i]);
    if (ec != std::errc{} || ptr != field.data() + field.size() || !std::isfinite(numeric[i])) {
      all_numeric = false;
      break;
    }
  }
  if (all_numeric) {
    double lo = numeric[0], hi = numeric[0];
    for (double v : numeric) {
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    const double span = hi - lo;
    for (size_t i = 0; i < n; ++i)
      colors[i] = gradient_color(span > 0 ? (numeric[i] - lo) / span : 0.0);
  } else {
    // Categorical: palette cycling in order of first appearance.
    std::unordered_map<std::string, size_t> category;
    for (size_t i = 0; i < n; ++i) {
      const std::string& field = metadata->rows[i][col];
      const auto [entry, inserted] = category.try_emplace(field, category.size());
      colors[i] = kPalette12[entry->second % 12];
    }
  }
  return colors;
}

std::string render_svg(const LayoutResult& result, const std::vector<std::string>& colors) {
  double min_x = 0, min_y = 0, max_x = 0, max_y = 0;
  if (!result.coords.empty()) {
    min_x = max_x = result.coords[0].x;
    min_y = max_y = result.coords[0].y;
    for (const Vec2& v : result.coords) {
      min_x = std::min(min_x, v.x);
      max_x = std::max(max_x, v.x);
      min_y = std::min(min_y, v.y);
      max_y = std::max(max_y, v.y);
    }
  }
  const double extent = std::max(max_x - min_x, max_y - min_y);
  const double usable = kSvgSize - 2 * kSvgMargin;
  const double scale = extent > 0 ? usable / extent : 1.0;
  const double offset_x = kSvgMargin + 0.5 * (usable - (max_x - min_x) * scale) - min_x * scale;
  const double offset_y = kSvgMargin + 0.5 * (usable - (max_y - min_y) * scale) - min_y * scale;
  auto px = [&](double x) { return x * scale + offset_x; };
  auto py = [&](double y) { return y * scale + offset_y; };

  std::ostringstream svg;
  svg << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"1600\" height=\"1600\" "
         "viewBox=\"0 0 1600 1600\">\n";
  svg << "<g stroke=\"#888888\" stroke-width=\"0.5\">\n";
  char buffer[256];
  for (const Edge& e : result.tree_edges) {
    std::snprintf(buffer, sizeof(buffer),
                  "<line x1=\"%.2f\" y1=\"%.2f\" x2=\"%.2f\" y2=\"%.2f\"/>\n",
                  px(result.coords[e.u].x), py(result.coords[e.u].y), px(result.coords[e.v].x),
                  py(result.coords[e.v].y));
    svg << buffer;
  }
  svg << "</g>\n<g>\n";
  for (size_t i = 0; i < result.coords.size(); ++i) {
    std::snprintf(buffer, sizeof(buffer), "<circle cx=\"%.2f\" cy=\"%.2f\" r=\"2\" fill=\"%s\"/>\n",
                  px(result.coords[i].x), py(result.coords[i].y), colors[i].c_str());
    svg << buffer;
  }
  svg << "</g>\n</svg>\n";
  return svg.str();
}

}  // namespace

ParsedInput parse_input(const std::string& path, InputFormat format) {
  std::ifstream in = open_input(path);
  ParsedInput out;
  out.format = format;
  switch (format) {
    case InputFormat::sparse_binary:
      parse_sparse_binary(in, out);
      break;
    case InputFormat::dense_csv:
      parse_dense_csv(in, out);
      break;
    case InputFormat::edge_list:
      parse_edge_list(in, out);
      break;
  }
  return out;
}

Metadata read_metadata_csv(const std::string& path) {
  const std::vector<std::vector<std::string>> records = parse_csv(read_file(path));
  if (records.empty()) raise(Errc::empty_input, "metadata file is empty");
  Metadata metadata;
  metadata.columns = records[0];
  metadata.rows.assign(records.begin() + 1, records.end());
  for (size_t i = 0; i < metadata.rows.size(); ++i) {
    if (metadata.rows[i].size() != metadata.columns.size())
      raise(Errc::parse_error, "metadata row " + std::to_string(i + 1) + " has " +
                                   std::to_string(metadata.rows[i].size()) + " fields, header has " +
                                   std::to_string(metadata.columns.size()));
  }
  return metadata;
}

OutputPaths write_outputs(const LayoutResult& result, const Metadata* metadata,
                          const std::string& color_by, const std::string& out_dir, bool write_svg) {
  const size_t n = result.coords.size();
  if (metadata && metadata->rows.size() != n)
    raise(Errc::metadata_length_mismatch, "metadata has " + std::to_string(metadata->rows.size()) +
                                              " rows for " + std::to_string(n) + " items");

  std::error_code ec;
  fs::create_directories(out_dir, ec);

  std::vector<uint32_t> degree(n, 0);
  for (const Edge& e : result.tree_edges) {
    ++degree[e.u];
    ++degree[e.v];
  }

  std::ostringstream nodes;
  nodes << "id,x,y,degree,component";
  if (metadata)
    for (const std::string& column : metadata->columns) nodes << ',' << csv_quote(column);
  nodes << '\n';
  for (size_t i = 0; i < n; ++i) {
    nodes << i << ',' << format_fixed6(result.coords[i].x) << ',' << format_fixed6(result.coords[i].y)
          << ',' << degree[i] << ',' << result.component[i];
    if (metadata)
      for (const std::string& field : metadata->rows[i]) nodes << ',' << csv_quote(field);
    nodes << '\n';
  }

  std::ostringstream edges;
  edges << "source,target,weight\n";
  for (const Edge& e : result.tree_edges)
    edges << e.u << ',' << e.v << ',' << format_fixed6(e.w) << '\n';

  OutputPaths paths;
  paths.nodes_csv = (fs::path(out_dir) / "nodes.csv").string();
  paths.edges_csv = (fs::path(out_dir) / "edges.csv").string();
  write_file_atomic(paths.nodes_csv, nodes.str());
  write_file_atomic(paths.edges_csv, edges.str());
  if (write_svg) {
    paths.svg = (fs::path(out_dir) / "plot.svg").string();
    write_file_atomic(paths.svg, render_svg(result, node_colors(n, metadata, color_by)));
  }
  return paths;
}

PipelineOutputs run_pipeline(const PipelineConfig& config) {
  const ParsedInput input = parse_input(config.input_path, config.format);

  PipelineArtifacts artifacts;
  switch (config.format) {
    case InputFormat::sparse_binary: {
      PipelineParams params = config.params;
      params.hashing.mode = HashMode::binary;
      artifacts = run_phases(input.sets, params);
      break;
    }
    case InputFormat::dense_csv: {
      PipelineParams params = config.params;
      params.hashing.mode = HashMode::weighted;
      params.hashing.dim = static_cast<uint32_t>(input.vectors[0].weights.size());
      artifacts = run_phases(input.vectors, params);
      break;
    }
    case InputFormat::edge_list:
      artifacts = run_phases_edge_list(input.entries, input.edge_node_count, config.params.layout);
      break;
  }

  Metadata metadata;
  const Metadata* metadata_ptr = nullptr;
  if (!config.metadata_path.empty()) {
    metadata = read_metadata_csv(config.metadata_path);
    metadata_ptr = &metadata;
  }

  PipelineOutputs outputs;
  outputs.paths =
      write_outputs(artifacts.layout, metadata_ptr, config.color_by, config.out_dir, config.write_svg);
  outputs.timings = artifacts.timings;

  std::ostringstream timings;
  timings << "phase_index_seconds=" << format_fixed6(artifacts.timings.index_s) << '\n'
          << "phase_knng_seconds=" << format_fixed6(artifacts.timings.knng_s) << '\n'
          << "phase_mst_seconds=" << format_fixed6(artifacts.timings.mst_s) << '\n'
          << "phase_layout_seconds=" << format_fixed6(artifacts.timings.layout_s) << '\n'
          << "total_seconds=" << format_fixed6(artifacts.timings.total_s) << '\n';
  outputs.timings_txt = (fs::path(config.out_dir) / "timings.txt").string();
  write_file_atomic(outputs.timings_txt, timings.str());
  return outputs;
}

StoredLayout read_layout(const std::string& out_dir) {
  StoredLayout stored;
  const auto nodes = parse_csv(read_file((fs::path(out_dir) / "nodes.csv").string()));
  if (nodes.size() < 2) raise(Errc::empty_input, "nodes.csv has no data rows");
  const auto& header = nodes[0];
  const auto col_of = [&](const std::string& name) {
    const auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) raise(Errc::parse_error, "nodes.csv lacks column '" + name + "'");
    return static_cast<size_t>(it - header.begin());
  };
  const size_t col_x = col_of("x"), col_y = col_of("y");
  stored.n = static_cast<uint32_t>(nodes.size() - 1);
  stored.coords.resize(stored.n);
  for (size_t i = 1; i < nodes.size(); ++i) {
    stored.coords[i - 1].x = parse_double(nodes[i][col_x], i + 1);
    stored.coords[i - 1].y = parse_double(nodes[i][col_y], i + 1);
  }

  const auto edges = parse_csv(read_file((fs::path(out_dir) / "edges.csv").string()));
  for (size_t i = 1; i < edges.size(); ++i) {
    if (edges[i].size() != 3) raise(Errc::parse_error, "edges.csv row " + std::to_string(i + 1));
    Edge e;
    e.u = static_cast<uint32_t>(parse_u64(edges[i][0], i + 1));
    e.v = static_cast<uint32_t>(parse_u64(edges[i][1], i + 1));
    e.w = parse_double(edges[i][2], i + 1);
    stored.tree_edges.push_back(e);
  }
  return stored;
}

}  // namespace tmap
