#include "tmap/cli.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "tmap/eval.hpp"
#include "tmap/io.hpp"
#include "tmap/mst.hpp"

namespace fs = std::filesystem;

namespace tmap {

namespace {

const char* kSynopsis =
    "usage: tmap embed --input FILE --input-format {sparse-binary|dense-csv|edge-list} [options]\n"
    "       tmap eval  --input FILE --input-format {sparse-binary|dense-csv} --out-dir DIR [options]\n"
    "       tmap bench --sizes N1,N2,... [options]\n"
    "options: --metric {jaccard|weighted-jaccard} --d N --l N --k N --kc N --p X\n"
    "         --iterations N --theta X --seed N --out-dir DIR --svg --meta FILE\n"
    "         --color-by COLUMN --sizes LIST\n";

struct CliOptions {
  std::string input;
  std::string input_format;
  std::string metric = "jaccard";
  uint32_t d = 512;
  uint32_t l = 8;
  uint32_t k = 10;
  uint32_t kc = 10;
  double p = 1.0;
  uint32_t iterations = 200;
  double theta = 1.0;
  uint64_t seed = 42;
  std::string out_dir = ".";
  bool svg = false;
  std::string meta;
  std::string color_by;
  std::string sizes;
};

int usage_error(const std::string& reason) {
  std::cerr << "error: " << reason << "\n" << kSynopsis;
  return 1;
}

InputFormat format_of(const std::string& name) {
  if (name == "sparse-binary") return InputFormat::sparse_binary;
  if (name == "dense-csv") return InputFormat::dense_csv;
  if (name == "edge-list") return InputFormat::edge_list;
  raise(Errc::config_mismatch, "unknown input format '" + name + "'");
}

PipelineParams params_of(const CliOptions& options) {
  PipelineParams params;
  params.hashing.d = options.d;
  params.hashing.seed = options.seed;
  params.forest.l = options.l;
  params.knng.k = options.k;
  params.knng.kc = options.kc;
  params.layout.p = options.p;
  params.layout.iterations_per_level = options.iterations;
  params.layout.theta = options.theta;
  params.layout.seed = options.seed;
  return params;
}

std::vector<size_t> parse_sizes(const std::string& text) {
  std::vector<size_t> sizes;
  std::stringstream in(text);
  std::string token;
  while (std::getline(in, token, ',')) {
    if (token.empty()) continue;
    size_t pos = 0;
    unsigned long long value = 0;
    try {
      value = std::stoull(token, &pos);
    } catch (...) {
      raise(Errc::config_mismatch, "bad size '" + token + "'");
    }
    if (pos != token.size()) raise(Errc::config_mismatch, "bad size '" + token + "'");
    sizes.push_back(static_cast<size_t>(value));
  }
  return sizes;
}

int run_embed(const CliOptions& options) {
  const InputFormat format = format_of(options.input_format);
  if (format == InputFormat::sparse_binary && options.metric != "jaccard")
    return usage_error("sparse-binary input requires --metric jaccard");
  if (format == InputFormat::dense_csv && options.metric != "weighted-jaccard")
    return usage_error("dense-csv input requires --metric weighted-jaccard");

  PipelineConfig config;
  config.input_path = options.input;
  config.format = format;
  config.params = params_of(options);
  config.out_dir = options.out_dir;
  config.write_svg = options.svg;
  config.metadata_path = options.meta;
  config.color_by = options.color_by;

  const PipelineOutputs outputs = run_pipeline(config);
  std::cout << "wrote " << outputs.paths.nodes_csv << "\n";
  std::cout << "wrote " << outputs.paths.edges_csv << "\n";
  if (!outputs.paths.svg.empty()) std::cout << "wrote " << outputs.paths.svg << "\n";
  std::printf("phase I (index)   %.3fs\n", outputs.timings.index_s);
  std::printf("phase II (knng)   %.3fs\n", outputs.timings.knng_s);
  std::printf("phase III (mst)   %.3fs\n", outputs.timings.mst_s);
  std::printf("phase IV (layout) %.3fs\n", outputs.timings.layout_s);
  std::printf("total             %.3fs\n", outputs.timings.total_s);
  return 0;
}

void write_histogram_csv(const fs::path& path, const RankReport& report) {
  std::ostringstream out;
  out << "rank,count\n";
  for (uint32_t r = 1; r <= kRankHistogramMax; ++r)
    out << r << ',' << report.histogram[r - 1] << '\n';
  out << '>' << kRankHistogramMax << ',' << report.histogram[kRankHistogramMax] << '\n';
  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) raise(Errc::output_unwritable, "cannot write '" + path.string() + "'");
  file << out.str();
}

int run_eval(const CliOptions& options) {
  const InputFormat format = format_of(options.input_format);
  if (format == InputFormat::edge_list)
    return usage_error("eval needs the original items; edge-list input has none");

  const ParsedInput input = parse_input(options.input, format);
  NnTable table;
  if (format == InputFormat::sparse_binary) {
    if (options.metric != "jaccard") return usage_error("sparse-binary input requires --metric jaccard");
    table = true_nearest_neighbors(input.sets, Metric::jaccard);
  } else {
    if (options.metric != "weighted-jaccard")
      return usage_error("dense-csv input requires --metric weighted-jaccard");
    table = true_nearest_neighbors(input.vectors, Metric::weighted_jaccard);
  }

  const StoredLayout stored = read_layout(options.out_dir);
  if (stored.n != table.nn.size())
    raise(Errc::size_mismatch, "layout in '" + options.out_dir + "' has " +
                                   std::to_string(stored.n) + " nodes, input has " +
                                   std::to_string(table.nn.size()) + " items");

  SpanningForest forest;
  forest.n = stored.n;
  forest.tree_edges = stored.tree_edges;
  forest.component = components(stored.n, stored.tree_edges);

  const RankReport topological = topological_ranks(forest, table);
  const RankReport euclidean = euclidean_ranks(stored.coords, table);

  std::ostringstream report;
  report << "items=" << stored.n << "\n";
  report << "topological_preservation_rate=" << topological.preservation_rate << "\n";
  report << "euclidean_preservation_rate=" << euclidean.preservation_rate << "\n";
  std::cout << report.str();

  const fs::path dir(options.out_dir);
  write_histogram_csv(dir / "topological_hist.csv", topological);
  write_histogram_csv(dir / "euclidean_hist.csv", euclidean);
  {
    std::ofstream file(dir / "eval_report.txt", std::ios::binary | std::ios::trunc);
    file << report.str();
  }
  std::cout << "wrote " << (dir / "topological_hist.csv").string() << "\n";
  std::cout << "wrote " << (dir / "euclidean_hist.csv").string() << "\n";
  std::cout << "wrote " << (dir / "eval_report.txt").string() << "\n";
  return 0;
}

int run_bench(const CliOptions& options) {
  std::vector<size_t> sizes;
  try {
    sizes = parse_sizes(options.sizes);
  } catch (const Error& e) {
    return usage_error(e.what());
  }
  if (sizes.size() < 2) return usage_error("--sizes needs at least two ascending values");
  for (size_t i = 1; i < sizes.size(); ++i) {
    if (sizes[i] <= sizes[i - 1]) return usage_error("--sizes values must be strictly ascending");
  }

  BenchSpec spec;
  spec.seed = options.seed;
  const BenchResult result = bench_pipeline(sizes, spec, params_of(options));

  std::printf("%10s %10s %10s %10s %10s %10s\n", "n", "index_s", "knng_s", "mst_s", "layout_s",
              "total_s");
  for (size_t i = 0; i < result.sizes.size(); ++i) {
    const PhaseTimings& t = result.timings[i];
    std::printf("%10zu %10.3f %10.3f %10.3f %10.3f %10.3f\n", result.sizes[i], t.index_s, t.knng_s,
                t.mst_s, t.layout_s, t.total_s);
  }
  std::printf("log-log slope of total time: %.3f\n", result.slope);
  return 0;
}

}  // namespace

int cli_entry(int argc, const char* const* argv) {
  CLI::App app{"tmap: 2-D tree layouts for large high-dimensional data sets"};
  app.require_subcommand(1);

  CliOptions options;
  const auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--metric", options.metric)->check(CLI::IsMember({"jaccard", "weighted-jaccard"}));
    cmd->add_option("--d", options.d);
    cmd->add_option("--l", options.l);
    cmd->add_option("--k", options.k);
    cmd->add_option("--kc", options.kc);
    cmd->add_option("--p", options.p);
    cmd->add_option("--iterations", options.iterations);
    cmd->add_option("--theta", options.theta);
    cmd->add_option("--seed", options.seed);
    cmd->add_option("--out-dir", options.out_dir);
  };

  CLI::App* embed = app.add_subcommand("embed", "run the full pipeline and write the layout");
  embed->add_option("--input", options.input)->required();
  embed->add_option("--input-format", options.input_format)
      ->required()
      ->check(CLI::IsMember({"sparse-binary", "dense-csv", "edge-list"}));
  add_common(embed);
  embed->add_flag("--svg", options.svg);
  embed->add_option("--meta", options.meta);
  embed->add_option("--color-by", options.color_by);

  CLI::App* eval_cmd = app.add_subcommand("eval", "rank reports for input plus a produced layout");
  eval_cmd->add_option("--input", options.input)->required();
  eval_cmd->add_option("--input-format", options.input_format)
      ->required()
      ->check(CLI::IsMember({"sparse-binary", "dense-csv", "edge-list"}));
  add_common(eval_cmd);

  CLI::App* bench = app.add_subcommand("bench", "scaling study on seeded synthetic data");
  bench->add_option("--sizes", options.sizes)->required();
  add_common(bench);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    std::cout << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    return usage_error(e.what());
  }

  // Cross-flag validation shared by all subcommands.
  if (options.d < 1 || options.l < 1 || options.d % options.l != 0)
    return usage_error("l must divide d (d=" + std::to_string(options.d) +
                       ", l=" + std::to_string(options.l) + ")");
  if (options.k < 1 || options.kc < 1) return usage_error("k and kc must be >= 1");
  if (!(options.p > 0)) return usage_error("p must be > 0");
  if (!(options.theta > 0)) return usage_error("theta must be > 0");
  if (options.iterations < 1) return usage_error("iterations must be >= 1");

  try {
    if (embed->parsed()) return run_embed(options);
    if (eval_cmd->parsed()) return run_eval(options);
    if (bench->parsed()) return run_bench(options);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return usage_error("no subcommand given");
}

}  // namespace tmap
