// entgraph: command-line pipeline from raw comment dumps to a viewer bundle.
//
//   ingest   -> canonical corpus (top-fraction and bot filters applied)
//   link     -> per-comment entity sets (gazetteer or pre-linked annotations)
//   build    -> star-expanded entity graph for one corpus
//   merge    -> multi-corpus graph
//   predict  -> generalization and WMD report over k folds
//   layout   -> depth-pinned vertex positions
//   activate -> spreading activation from one set vertex
//   export   -> single-file viewer bundle
//
// Failures print {"error": <kind>, "message": <text>} on stderr and exit nonzero.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "entgraph/entgraph.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace entgraph;

namespace {

constexpr int kExitFailure = 1;
constexpr int kExitUsage = 2;

std::ifstream open_input(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw NotFoundError("cannot open input file '" + path + "'");
  return in;
}

json read_json(const std::string& path) {
  auto in = open_input(path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ParseError("'" + path + "' is not valid JSON: " + e.what());
  }
}

// Writes through a temporary sibling so a failed run never leaves a truncated file.
void write_output(const std::string& path, const std::string& content) {
  const fs::path target(path);
  if (target.has_parent_path()) fs::create_directories(target.parent_path());
  const auto temp = fs::path(path + ".tmp");
  {
    std::ofstream out(temp, std::ios::binary | std::ios::trunc);
    if (!out) throw NotFoundError("cannot open output file '" + path + "'");
    out << content;
    if (!out) throw Error("io", "failed writing '" + path + "'");
  }
  fs::rename(temp, target);
}

void write_json(const std::string& path, const json& doc) { write_output(path, doc.dump(1) + "\n"); }

void print_summary(const json& summary) { std::cout << summary.dump() << "\n"; }

std::uint64_t default_seed() {
  if (const char* env = std::getenv("ENTGRAPH_SEED"); env != nullptr && *env != '\0') {
    try {
      std::size_t used = 0;
      const auto value = std::stoull(env, &used);
      if (used == std::string(env).size()) return value;
    } catch (const std::exception&) {
    }
    throw ParameterError("ENTGRAPH_SEED must be a non-negative integer");
  }
  return 0;
}

Corpus read_corpus(const std::string& path, const std::string& label) {
  auto in = open_input(path);
  return parse_dump(in, DumpFormat::canonical_json, label).corpus;
}

EntitySetMap read_entities(const std::string& path) {
  auto in = open_input(path);
  auto result = load_prelinked(in);
  if (result.records_skipped > 0) {
    throw ParseError("entity file '" + path + "' has " + std::to_string(result.records_skipped) +
                     " malformed records");
  }
  return std::move(result.sets);
}

EntityGraph read_graph(const std::string& path) { return graph_from_json(read_json(path)); }

// The label is the file name up to its first dot, so "news.corpus.json" is "news".
std::string stem_label(const std::string& path) {
  const auto name = fs::path(path).filename().string();
  return name.substr(0, name.find('.'));
}

// --- ingest ---------------------------------------------------------------

struct IngestOptions {
  std::string input;
  std::string output;
  std::string format = "reddit-jsonl";
  std::string label;
  double top_fraction = 0.2;
  std::string botlist;
};

void run_ingest(const IngestOptions& o) {
  auto in = open_input(o.input);
  auto report = parse_dump(in, parse_dump_format(o.format), o.label.empty() ? stem_label(o.input) : o.label);
  const auto parsed_threads = report.corpus.size();
  Corpus corpus = filter_top_fraction(report.corpus, o.top_fraction);
  std::size_t bots = 0;
  if (!o.botlist.empty()) {
    auto list_in = open_input(o.botlist);
    const auto botlist = read_botlist(list_in);
    bots = botlist.size();
    corpus = filter_bots(corpus, botlist);
  }
  std::ostringstream out;
  write_canonical(out, corpus);
  write_output(o.output, out.str());
  for (const auto& w : report.warnings) std::cerr << "warning: " << w << "\n";
  print_summary({{"command", "ingest"},
                 {"label", corpus.label()},
                 {"records_read", report.records_read},
                 {"records_skipped", report.records_skipped},
                 {"orphans", report.orphans},
                 {"threads_parsed", parsed_threads},
                 {"threads_kept", corpus.size()},
                 {"comments_kept", corpus.comment_count()},
                 {"bot_authors", bots}});
}

// --- link -----------------------------------------------------------------

struct LinkOptions {
  std::string corpus;
  std::string output;
  std::string gazetteer;
  std::string prelinked;
  double min_prior = kDefaultMinPrior;
};

void run_link(const LinkOptions& o) {
  const auto corpus = read_corpus(o.corpus, stem_label(o.corpus));
  EntitySetMap sets;
  std::size_t unknown = 0;
  if (!o.gazetteer.empty()) {
    auto in = open_input(o.gazetteer);
    sets = link_corpus(corpus, Gazetteer::load_tsv(in), o.min_prior);
  } else {
    std::set<std::string, std::less<>> known;
    for (const auto& t : corpus.threads()) {
      for (const auto& c : t.comments()) known.insert(c.id);
    }
    auto in = open_input(o.prelinked);
    auto result = load_prelinked(in, &known);
    for (const auto& w : result.warnings) std::cerr << "warning: " << w << "\n";
    unknown = result.unknown_ids.size();
    sets = std::move(result.sets);
  }
  std::ostringstream out;
  write_annotations(out, sets);
  write_output(o.output, out.str());
  print_summary({{"command", "link"},
                 {"comments", corpus.comment_count()},
                 {"linked_comments", sets.size()},
                 {"unknown_comment_ids", unknown}});
}

// --- build ----------------------------------------------------------------

struct BuildOptions {
  std::string corpus;
  std::string entities;
  std::string output;
  std::string label;
  std::size_t min_path_len = kDefaultMinPathLength;
};

void run_build(const BuildOptions& o) {
  const auto label = o.label.empty() ? stem_label(o.corpus) : o.label;
  const auto corpus = read_corpus(o.corpus, label);
  const auto paths = corpus_paths(corpus, read_entities(o.entities), o.min_path_len);
  if (paths.empty()) throw EmptyCorpusError("no thread yields a conversation path of the required length");
  const auto graph = star_expand(build_graph(paths, label));
  write_json(o.output, graph_to_json(graph));
  std::size_t path_count = 0;
  for (const auto& [thread, list] : paths) path_count += list.size();
  print_summary({{"command", "build"},
                 {"label", label},
                 {"threads_with_paths", paths.size()},
                 {"paths", path_count},
                 {"vertices", graph.vertices().size()},
                 {"edges", graph.edges().size()},
                 {"max_depth", graph.max_depth()}});
}

// --- merge ----------------------------------------------------------------

void run_merge(const std::vector<std::string>& inputs, const std::string& output) {
  EntityGraph merged;
  for (const auto& path : inputs) merged = merge_corpora(merged, read_graph(path));
  write_json(output, graph_to_json(merged));
  print_summary({{"command", "merge"},
                 {"labels", std::vector<std::string>(merged.labels().begin(), merged.labels().end())},
                 {"vertices", merged.vertices().size()},
                 {"edges", merged.edges().size()}});
}

// --- predict --------------------------------------------------------------

struct PredictOptions {
  std::string corpus;
  std::string entities;
  std::string embeddings;
  std::string output;
  std::string csv_prefix;
  std::string label;
  std::size_t folds = 5;
  std::size_t min_path_len = kDefaultMinPathLength;
  std::uint64_t seed = 0;
};

void run_predict(const PredictOptions& o) {
  const auto label = o.label.empty() ? stem_label(o.corpus) : o.label;
  const auto corpus = read_corpus(o.corpus, label);
  const auto sets = read_entities(o.entities);
  const auto paths = corpus_paths(corpus, sets, o.min_path_len);

  std::set<EntityId> used;
  for (const auto& [id, s] : sets) used.insert(s.begin(), s.end());
  auto emb_in = open_input(o.embeddings);
  const auto embeddings = load_embeddings(emb_in, used);

  const auto folds = kfold_split(corpus, o.folds, o.seed);
  const auto generalization = evaluate_generalization(folds, paths, label);
  const auto wmd_report = evaluate_prediction(folds, paths, embeddings.table, label);
  const json meta = {{"label", label},
                     {"folds", o.folds},
                     {"seed", o.seed},
                     {"min_path_len", o.min_path_len},
                     {"threads", corpus.size()},
                     {"entities_without_embedding", embeddings.missing.size()}};
  write_json(o.output, report_to_json(generalization, wmd_report, meta));
  if (!o.csv_prefix.empty()) {
    write_output(o.csv_prefix + "generalization.csv", generalization_csv(generalization));
    write_output(o.csv_prefix + "wmd.csv", wmd_csv(wmd_report));
  }
  print_summary({{"command", "predict"},
                 {"label", label},
                 {"depths", generalization.rows.size()},
                 {"wmd_samples_depths", wmd_report.rows.size()},
                 {"paths_total", wmd_report.paths_total},
                 {"dead_ends", wmd_report.dead_ends}});
}

// --- layout ---------------------------------------------------------------

void run_layout(const std::string& graph_path, const std::string& output, const LayoutConfig& config) {
  const auto graph = read_graph(graph_path);
  if (!graph.expanded()) throw StateError("layout needs a star-expanded graph");
  const auto layout = compute_layout(graph, config);
  write_json(output, layout_to_json(graph, layout));
  print_summary({{"command", "layout"},
                 {"vertices", graph.vertices().size()},
                 {"iterations", layout.total_iterations}});
}

// --- activate -------------------------------------------------------------

struct ActivateOptions {
  std::string graph;
  std::string output;
  std::string source;
  std::string normalization = "out-normalized";
  std::string label;
  double firing_threshold = 0.5;
  double decay = 0.5;
};

void run_activate(const ActivateOptions& o) {
  const auto graph = read_graph(o.graph);
  const RewiredView view(graph);
  const auto vertex = graph.find(parse_vertex_id(o.source));
  if (!vertex) throw NotFoundError("source vertex '" + o.source + "' is not in the graph");
  ActivationParams params{o.firing_threshold, o.decay, parse_weight_normalization(o.normalization)};
  std::optional<std::string_view> label;
  if (!o.label.empty()) label = o.label;
  const auto state = spread(view, *vertex, params, label);
  write_json(o.output, activation_to_json(graph, state, params, label));
  print_summary({{"command", "activate"},
                 {"source", o.source},
                 {"activated", state.activation.size()},
                 {"fired", state.fire_order.size()}});
}

// --- export ---------------------------------------------------------------

void run_export(const std::string& graph_path, const std::string& layout_path, const std::string& activation_path,
                const std::string& output) {
  const auto graph = read_graph(graph_path);
  const RewiredView view(graph);
  const auto layout = layout_from_json(read_json(layout_path), graph);
  json activation;
  if (!activation_path.empty()) activation = read_json(activation_path);
  const auto bundle = export_bundle(view, layout, activation_path.empty() ? nullptr : &activation);
  write_output(output, bundle.dump() + "\n");
  print_summary({{"command", "export"},
                 {"nodes", bundle["nodes"].size()},
                 {"links", bundle["links"].size()},
                 {"activation", bundle.contains("activation")}});
}

void report_error(const std::string& kind, const std::string& message) {
  std::cerr << json{{"error", kind}, {"message", message}}.dump() << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Entity-graph construction and analysis for threaded discussions"};
  app.require_subcommand(1);

  std::uint64_t seed = 0;
  bool seed_given = false;
  const auto add_seed = [&](CLI::App* cmd) {
    cmd->add_option_function<std::uint64_t>(
           "--seed", [&](const std::uint64_t& s) { seed = s, seed_given = true; },
           "Random seed (default: $ENTGRAPH_SEED or 0)");
  };

  IngestOptions ingest;
  auto* ingest_cmd = app.add_subcommand("ingest", "Parse a comment dump and apply the thread filters");
  ingest_cmd->add_option("--input", ingest.input, "Dump file")->required();
  ingest_cmd->add_option("--output", ingest.output, "Canonical corpus file")->required();
  ingest_cmd->add_option("--format", ingest.format, "reddit-jsonl or canonical-json")->capture_default_str();
  ingest_cmd->add_option("--label", ingest.label, "Corpus label (default: input file stem)");
  ingest_cmd->add_option("--top-fraction", ingest.top_fraction, "Share of largest threads kept")->capture_default_str();
  ingest_cmd->add_option("--botlist", ingest.botlist, "File of bot author names");

  LinkOptions link;
  auto* link_cmd = app.add_subcommand("link", "Attach entity sets to every comment");
  link_cmd->add_option("--corpus", link.corpus, "Canonical corpus file")->required();
  link_cmd->add_option("--output", link.output, "Entity annotation file")->required();
  auto* gaz = link_cmd->add_option("--gazetteer", link.gazetteer, "surface<TAB>entity<TAB>prior file");
  auto* pre = link_cmd->add_option("--prelinked", link.prelinked, "Pre-linked {comment_id, entities} records");
  gaz->excludes(pre);
  link_cmd->add_option("--min-prior", link.min_prior, "Minimum prior for gazetteer links")->capture_default_str();

  BuildOptions build;
  auto* build_cmd = app.add_subcommand("build", "Build the star-expanded entity graph of one corpus");
  build_cmd->add_option("--corpus", build.corpus, "Canonical corpus file")->required();
  build_cmd->add_option("--entities", build.entities, "Entity annotation file")->required();
  build_cmd->add_option("--output", build.output, "Graph file")->required();
  build_cmd->add_option("--label", build.label, "Corpus label (default: corpus file stem)");
  build_cmd->add_option("--min-path-len", build.min_path_len, "Shortest path kept")->capture_default_str();

  std::vector<std::string> merge_inputs;
  std::string merge_output;
  auto* merge_cmd = app.add_subcommand("merge", "Combine graphs of differently labelled corpora");
  merge_cmd->add_option("inputs", merge_inputs, "Graph files")->required()->expected(2, -1);
  merge_cmd->add_option("--output", merge_output, "Merged graph file")->required();

  PredictOptions predict;
  auto* predict_cmd = app.add_subcommand("predict", "k-fold generalization and next-set prediction report");
  predict_cmd->add_option("--corpus", predict.corpus, "Canonical corpus file")->required();
  predict_cmd->add_option("--entities", predict.entities, "Entity annotation file")->required();
  predict_cmd->add_option("--embeddings", predict.embeddings, "Entity embedding file")->required();
  predict_cmd->add_option("--output", predict.output, "Report file")->required();
  predict_cmd->add_option("--csv-prefix", predict.csv_prefix, "Also write <prefix>generalization.csv and <prefix>wmd.csv");
  predict_cmd->add_option("--label", predict.label, "Corpus label (default: corpus file stem)");
  predict_cmd->add_option("--folds", predict.folds, "Number of folds")->capture_default_str();
  predict_cmd->add_option("--min-path-len", predict.min_path_len, "Shortest path kept")->capture_default_str();
  add_seed(predict_cmd);

  std::string layout_graph;
  std::string layout_output;
  LayoutConfig layout_config;
  auto* layout_cmd = app.add_subcommand("layout", "Depth-pinned force-directed layout");
  layout_cmd->add_option("--graph", layout_graph, "Graph file")->required();
  layout_cmd->add_option("--output", layout_output, "Layout file")->required();
  layout_cmd->add_option("--iterations-per-depth", layout_config.iterations_per_depth)->capture_default_str();
  layout_cmd->add_option("--column-spacing", layout_config.column_spacing)->capture_default_str();
  layout_cmd->add_option("--entity-column-offset", layout_config.entity_column_offset)->capture_default_str();
  layout_cmd->add_option("--repulsion", layout_config.repulsion)->capture_default_str();
  layout_cmd->add_option("--spring", layout_config.spring)->capture_default_str();
  layout_cmd->add_option("--temperature", layout_config.initial_temperature)->capture_default_str();
  layout_cmd->add_option("--vertical-unit", layout_config.vertical_unit)->capture_default_str();
  add_seed(layout_cmd);

  ActivateOptions activate;
  auto* activate_cmd = app.add_subcommand("activate", "Spreading activation from one entity-set vertex");
  activate_cmd->add_option("--graph", activate.graph, "Graph file")->required();
  activate_cmd->add_option("--output", activate.output, "Activation file")->required();
  activate_cmd->add_option("--source", activate.source, "Source vertex id, e.g. 's:0:China'")->required();
  activate_cmd->add_option("-F,--firing-threshold", activate.firing_threshold)->capture_default_str();
  activate_cmd->add_option("-D,--decay", activate.decay)->capture_default_str();
  activate_cmd->add_option("--normalization", activate.normalization, "out-normalized or global-max")
      ->capture_default_str();
  activate_cmd->add_option("--label", activate.label, "Restrict weights to one corpus");

  std::string export_graph;
  std::string export_layout;
  std::string export_activation;
  std::string export_output;
  auto* export_cmd = app.add_subcommand("export", "Write the viewer bundle");
  export_cmd->add_option("--graph", export_graph, "Graph file")->required();
  export_cmd->add_option("--layout", export_layout, "Layout file")->required();
  export_cmd->add_option("--activation", export_activation, "Activation file");
  export_cmd->add_option("--output", export_output, "Bundle file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    report_error("usage", e.what());
    return kExitUsage;
  }

  try {
    if (!seed_given) seed = default_seed();
    if (*ingest_cmd) {
      run_ingest(ingest);
    } else if (*link_cmd) {
      if (link.gazetteer.empty() == link.prelinked.empty()) {
        throw ParameterError("link needs exactly one of --gazetteer or --prelinked");
      }
      run_link(link);
    } else if (*build_cmd) {
      run_build(build);
    } else if (*merge_cmd) {
      run_merge(merge_inputs, merge_output);
    } else if (*predict_cmd) {
      predict.seed = seed;
      run_predict(predict);
    } else if (*layout_cmd) {
      layout_config.seed = seed;
      run_layout(layout_graph, layout_output, layout_config);
    } else if (*activate_cmd) {
      run_activate(activate);
    } else if (*export_cmd) {
      run_export(export_graph, export_layout, export_activation, export_output);
    }
  } catch (const Error& e) {
    report_error(e.kind(), e.what());
    return kExitFailure;
  } catch (const fs::filesystem_error& e) {
    report_error("io", e.what());
    return kExitFailure;
  } catch (const std::exception& e) {
    report_error("internal", e.what());
    return kExitFailure;
  }
  return 0;
}
