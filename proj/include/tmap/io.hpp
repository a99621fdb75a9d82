#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "tmap/eval.hpp"
#include "tmap/pipeline.hpp"

namespace tmap {

enum class InputFormat { sparse_binary, dense_csv, edge_list };

// Result of parse_input; only the members matching `format` are populated.
struct ParsedInput {
  InputFormat format = InputFormat::sparse_binary;
  std::vector<SparseBinarySet> sets;
  std::vector<WeightedVector> vectors;
  std::vector<EdgeListEntry> entries;
  uint32_t edge_node_count = 0;  // edge_list: max referenced id + 1
};

// sparse-binary: one item per line, ascending space-separated unsigned
// integers; blank lines and '#'-prefixed lines are skipped. dense-csv:
// comma-separated finite non-negative reals, optional single header line
// (detected when the first field is non-numeric), constant column count.
// edge-list: whitespace-separated "u v [w]" per line, w defaulting to 1.0.
ParsedInput parse_input(const std::string& path, InputFormat format);

// Positionally joined per-item metadata; row i describes item i.
struct Metadata {
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;
};

Metadata read_metadata_csv(const std::string& path);

struct PipelineConfig {
  std::string input_path;
  InputFormat format = InputFormat::sparse_binary;
  PipelineParams params;
  std::string out_dir = ".";
  bool write_svg = false;
  std::string metadata_path;  // optional
  std::string color_by;       // optional metadata column for SVG coloring
};

struct OutputPaths {
  std::string nodes_csv;
  std::string edges_csv;
  std::string svg;  // empty when not written
};

// Writes nodes.csv (id,x,y,degree,component plus metadata columns), edges.csv
// (source,target,weight) and optionally plot.svg into out_dir. Writes are
// atomic: a temp file is renamed into place. Coordinates and weights are
// printed with 6 decimal digits; fields follow RFC 4180 quoting with "\n"
// line terminators.
OutputPaths write_outputs(const LayoutResult& result, const Metadata* metadata,
                          const std::string& color_by, const std::string& out_dir, bool write_svg);

struct PipelineOutputs {
  OutputPaths paths;
  std::string timings_txt;
  PhaseTimings timings;
};

// Full pipeline: parse, run phases (skipping I-II for edge-list input), write
// outputs. Identical config + input + seed produce byte-identical CSVs.
PipelineOutputs run_pipeline(const PipelineConfig& config);

// Reads back a nodes.csv / edges.csv pair produced by run_pipeline.
struct StoredLayout {
  std::vector<Vec2> coords;
  std::vector<Edge> tree_edges;
  uint32_t n = 0;
};

StoredLayout read_layout(const std::string& out_dir);

}  // namespace tmap
