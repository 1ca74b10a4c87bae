#include "depnet/cli.hpp"

#include <charconv>
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>

#include <CLI11.hpp>

#include "depnet/centrality.hpp"
#include "depnet/community.hpp"
#include "depnet/edge_list_io.hpp"
#include "depnet/evolution.hpp"
#include "depnet/generators.hpp"
#include "depnet/graph.hpp"
#include "depnet/manifest.hpp"
#include "depnet/registry.hpp"
#include "depnet/robustness.hpp"

namespace depnet::cli {

namespace fs = std::filesystem;

namespace {

/// Shortest round-trip decimal form.
std::string fmt(double x) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return ec == std::errc{} ? std::string(buf, end) : std::string("nan");
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string quoted = "\"";
  for (char c : s) {
    if (c == '"') quoted += '"';
    quoted += c;
  }
  return quoted + "\"";
}

std::ofstream open_output(const fs::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  return out;
}

fs::path default_cache_path() {
  const char* dir = std::getenv("DEPNET_CACHE_DIR");
  return fs::path(dir != nullptr && *dir != '\0' ? dir : ".") / "records.jsonl";
}

std::vector<fs::path> edge_inputs(const fs::path& edges) {
  std::vector<fs::path> inputs{edges};
  if (fs::exists(label_path_for(edges))) inputs.push_back(label_path_for(edges));
  return inputs;
}

Strategy strategy_from(const std::string& name) {
  if (auto s = parse_strategy(name)) return *s;
  throw std::invalid_argument("unknown strategy: " + name);
}

struct Shared {
  unsigned threads = 1;
  std::optional<std::uint64_t> seed;

  // Seeds are recorded in the manifest, so an unseeded run can be repeated.
  std::uint64_t resolve_seed(std::ostream& err) {
    if (!seed) {
      std::random_device rd;
      seed = (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
      err << "seed: " << *seed << '\n';
    }
    return *seed;
  }
};

class Runner {
 public:
  Runner(const std::vector<std::string>& argv, std::ostream& out, std::ostream& err)
      : argv_(argv), out_(out), err_(err) {}

  int run();

 private:
  using Action = std::function<void(RunManifest&)>;

  void add_ingest(CLI::App& app);
  void add_snapshot(CLI::App& app);
  void add_generate(CLI::App& app);
  void add_pagerank(CLI::App& app);
  void add_attack(CLI::App& app);
  void add_evolution(CLI::App& app);
  void add_communities(CLI::App& app);
  void add_stats(CLI::App& app);

  void add_threads(CLI::App& sub) {
    sub.add_option("--threads", shared_.threads, "Worker thread cap")->check(CLI::Range(1u, 1024u));
  }
  void add_seed(CLI::App& sub) { sub.add_option("--seed", shared_.seed, "Random seed (printed when omitted)"); }
  void add_manifest(CLI::App& sub) {
    sub.add_option("--manifest", manifest_path_, "Manifest path (default: <out>.manifest.json)");
  }

  void finish(RunManifest& manifest, const fs::path& primary_output) {
    manifest.outputs.insert(manifest.outputs.begin(), primary_output);
    fs::path path = manifest_path_;
    if (path.empty()) {
      path = primary_output;
      path += ".manifest.json";
    }
    manifest.parameters["threads"] = shared_.threads;
    if (shared_.seed) manifest.parameters["seed"] = *shared_.seed;
    manifest.duration_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - started_).count();
    manifest.save(path);
  }

  const std::vector<std::string>& argv_;
  std::ostream& out_;
  std::ostream& err_;
  Shared shared_;
  fs::path manifest_path_;
  std::string command_;
  Action action_;
  std::chrono::steady_clock::time_point started_ = std::chrono::steady_clock::now();
};

void Runner::add_ingest(CLI::App& app) {
  auto* sub = app.add_subcommand("ingest", "Parse a registry dump into a record cache");
  auto dump = std::make_shared<fs::path>();
  auto cache = std::make_shared<fs::path>(default_cache_path());
  sub->add_option("--dump", *dump, "Registry dump (NDJSON or rows wrapper, optionally gzip)")->required();
  sub->add_option("--out", *cache, "Record cache to write (default: $DEPNET_CACHE_DIR/records.jsonl)");
  add_threads(*sub);
  add_manifest(*sub);
  sub->callback([=, this] {
    command_ = "ingest";
    action_ = [=, this](RunManifest& m) {
      const std::string text = read_possibly_gzipped(*dump);
      const ParseReport report = parse_registry_dump(std::string_view(text), shared_.threads);
      save_record_cache(report.records, *cache);
      out_ << "records: " << report.records.size() << '\n'
           << "malformed lines: " << report.malformed.size() << '\n'
           << "documents without name: " << report.missing_name << '\n'
           << "duplicate names: " << report.duplicate_names << '\n'
           << "versions without time: " << report.untimed_versions << '\n'
           << "unparseable timestamps: " << report.bad_timestamps << '\n';
      for (std::size_t i = 0; i < std::min<std::size_t>(report.malformed.size(), 10); ++i) {
        err_ << "line " << report.malformed[i].line << ": " << report.malformed[i].message << '\n';
      }
      m.inputs = {*dump};
      m.parameters["records"] = report.records.size();
      finish(m, *cache);
    };
  });
}

void Runner::add_snapshot(CLI::App& app) {
  auto* sub = app.add_subcommand("snapshot", "Write the dependency graph as of a cutoff");
  auto cache = std::make_shared<fs::path>(default_cache_path());
  auto cutoff = std::make_shared<std::string>();
  auto out = std::make_shared<fs::path>();
  auto lwcc = std::make_shared<bool>(false);
  sub->add_option("--cache", *cache, "Record cache (default: $DEPNET_CACHE_DIR/records.jsonl)");
  sub->add_option("--cutoff", *cutoff, "Inclusive ISO-8601 cutoff; a bare date means end of day (default: latest)");
  sub->add_option("--out", *out, "Edge list to write (labels go to <out>.labels)")->required();
  sub->add_flag("--lwcc", *lwcc, "Keep only the largest weakly connected component");
  add_threads(*sub);
  add_manifest(*sub);
  sub->callback([=, this] {
    command_ = "snapshot";
    action_ = [=, this](RunManifest& m) {
      SnapshotSpec spec;
      if (!cutoff->empty()) {
        auto t = parse_cutoff(*cutoff);
        if (!t) throw std::invalid_argument("unparseable cutoff: " + *cutoff);
        spec.cutoff = *t;
      }
      const SnapshotEdges snap = snapshot_edges(load_record_cache(*cache), spec);
      DependencyGraph g = snap.to_graph();
      if (*lwcc && !g.empty()) g = largest_weakly_connected_subgraph(g);
      save_edge_list(g, *out);
      out_ << "nodes: " << g.node_count() << '\n'
           << "edges: " << g.edge_count() << '\n'
           << "unresolved dependencies dropped: " << snap.dropped_edges << '\n'
           << "self dependencies dropped: " << snap.self_dependencies << '\n';
      m.inputs = {*cache};
      m.parameters["cutoff"] = cutoff->empty() ? std::string("latest") : format_timestamp(spec.cutoff);
      m.parameters["lwcc"] = *lwcc;
      m.outputs.push_back(label_path_for(*out));
      finish(m, *out);
    };
  });
}

void Runner::add_generate(CLI::App& app) {
  auto* sub = app.add_subcommand("generate", "Generate a synthetic graph");
  auto model = std::make_shared<std::string>();
  auto nodes = std::make_shared<std::size_t>(0);
  auto edges = std::make_shared<std::size_t>(0);
  auto epn = std::make_shared<std::size_t>(0);
  auto out = std::make_shared<fs::path>();
  sub->add_option("--model", *model, "gnm or pa")->required()->check(CLI::IsMember({"gnm", "pa"}));
  sub->add_option("--nodes", *nodes, "Node count")->required();
  auto* edges_opt = sub->add_option("--edges", *edges, "Edge count (gnm)");
  auto* epn_opt = sub->add_option("--epn", *epn, "Edges per new node (pa)");
  edges_opt->excludes(epn_opt);
  sub->add_option("--out", *out, "Edge list to write")->required();
  add_seed(*sub);
  add_threads(*sub);
  add_manifest(*sub);
  sub->callback([=, this] {
    command_ = "generate";
    if (*model == "gnm" && edges_opt->count() == 0) throw CLI::RequiredError("--edges (required for --model gnm)");
    if (*model == "pa" && epn_opt->count() == 0) throw CLI::RequiredError("--epn (required for --model pa)");
    action_ = [=, this](RunManifest& m) {
      const std::uint64_t seed = shared_.resolve_seed(err_);
      const DependencyGraph g = *model == "gnm" ? gnm_random({*nodes, *edges, seed})
                                                : preferential_attachment({*nodes, *epn, seed});
      save_edge_list(g, *out);
      m.parameters["model"] = *model;
      m.parameters["nodes"] = *nodes;
      if (*model == "gnm") m.parameters["edges"] = *edges;
      else m.parameters["epn"] = *epn;
      m.outputs.push_back(label_path_for(*out));
      finish(m, *out);
    };
  });
}

void Runner::add_pagerank(CLI::App& app) {
  auto* sub = app.add_subcommand("pagerank", "PageRank scores, highest first");
  auto edges = std::make_shared<fs::path>();
  auto out = std::make_shared<fs::path>();
  auto config = std::make_shared<PageRankConfig>();
  sub->add_option("--edges", *edges, "Edge list")->required();
  sub->add_option("--damping", config->damping, "Damping factor")->capture_default_str();
  sub->add_option("--tol", config->tolerance, "L1 convergence tolerance")->capture_default_str();
  sub->add_option("--max-iter", config->max_iterations, "Iteration cap")->capture_default_str();
  sub->add_option("--out", *out, "CSV to write (node_label,score)")->required();
  add_threads(*sub);
  add_manifest(*sub);
  sub->callback([=, this] {
    command_ = "pagerank";
    action_ = [=, this](RunManifest& m) {
      const DependencyGraph g = load_edge_list(*edges);
      PageRankConfig cfg = *config;
      cfg.threads = shared_.threads;
      const PageRankResult pr = pagerank(g, cfg);
      if (!pr.converged) err_ << "warning: pagerank did not converge in " << pr.iterations << " iterations\n";
      auto csv = open_output(*out);
      csv << "node_label,score\n";
      for (NodeId v : order_by_score(pr.scores)) csv << csv_field(g.label(v)) << ',' << fmt(pr.scores[v]) << '\n';
      if (!csv.flush()) throw std::runtime_error("write failed for " + out->string());
      m.inputs = edge_inputs(*edges);
      m.parameters["damping"] = cfg.damping;
      m.parameters["tolerance"] = cfg.tolerance;
      m.parameters["max_iterations"] = cfg.max_iterations;
      m.parameters["iterations"] = pr.iterations;
      m.parameters["converged"] = pr.converged;
      finish(m, *out);
    };
  });
}

void Runner::add_attack(CLI::App& app) {
  auto* attack = app.add_subcommand("attack", "Robustness attacks");
  attack->require_subcommand(1);

  auto* cascade = attack->add_subcommand("cascade", "Targeted removal with failure propagation to dependents");
  {
    auto edges = std::make_shared<fs::path>();
    auto out = std::make_shared<fs::path>();
    auto strategy = std::make_shared<std::string>();
    auto stop = std::make_shared<double>(0.1);
    cascade->add_option("--edges", *edges, "Edge list")->required();
    cascade->add_option("--strategy", *strategy, "random, hub or pagerank")
        ->required()
        ->check(CLI::IsMember({"random", "hub", "pagerank"}));
    cascade->add_option("--stop-fraction", *stop, "Fraction of nodes to target")->capture_default_str();
    cascade->add_option("--out", *out, "CSV to write")->required();
    add_seed(*cascade);
    add_threads(*cascade);
    add_manifest(*cascade);
    cascade->callback([=, this] {
      command_ = "attack cascade";
      action_ = [=, this](RunManifest& m) {
        const DependencyGraph g = load_edge_list(*edges);
        AttackOptions opts;
        opts.seed = shared_.resolve_seed(err_);
        opts.pagerank.threads = shared_.threads;
        const RemovalTrace trace = cascade_attack(g, strategy_from(*strategy), *stop, opts);
        auto csv = open_output(*out);
        csv << "step,target_label,removed_this_step,cumulative_affected_fraction\n";
        for (const CascadeStep& s : trace.steps) {
          csv << s.step << ',' << csv_field(g.label(s.target)) << ',' << s.removed.size() << ','
              << fmt(s.cumulative_affected_fraction) << '\n';
        }
        if (!csv.flush()) throw std::runtime_error("write failed for " + out->string());
        m.inputs = edge_inputs(*edges);
        m.parameters["strategy"] = *strategy;
        m.parameters["stop_fraction"] = *stop;
        finish(m, *out);
      };
    });
  }

  auto* conn = attack->add_subcommand("connectivity", "Batch removal without propagation, tracking the LCC");
  {
    auto edges = std::make_shared<fs::path>();
    auto out = std::make_shared<fs::path>();
    auto strategy = std::make_shared<std::string>();
    auto batch = std::make_shared<double>(0.1);
    auto max = std::make_shared<double>(0.5);
    auto baseline = std::make_shared<bool>(false);
    conn->add_option("--edges", *edges, "Edge list")->required();
    conn->add_option("--strategy", *strategy, "random, hub or pagerank")
        ->required()
        ->check(CLI::IsMember({"random", "hub", "pagerank"}));
    conn->add_option("--batch-fraction", *batch, "Fraction of nodes removed per batch")->capture_default_str();
    conn->add_option("--max-fraction", *max, "Total fraction to remove")->capture_default_str();
    conn->add_flag("--baseline", *baseline, "Also attack a G(n,m) graph with the same n and m");
    conn->add_option("--out", *out, "CSV to write")->required();
    add_seed(*conn);
    add_threads(*conn);
    add_manifest(*conn);
    conn->callback([=, this] {
      command_ = "attack connectivity";
      action_ = [=, this](RunManifest& m) {
        const DependencyGraph g = load_edge_list(*edges);
        AttackOptions opts;
        opts.seed = shared_.resolve_seed(err_);
        opts.pagerank.threads = shared_.threads;
        const Strategy s = strategy_from(*strategy);
        auto csv = open_output(*out);
        if (*baseline) {
          const BaselineComparison cmp = compare_to_random_baseline(g, s, *batch, *max, opts);
          csv << "removed_fraction,lcc_fraction,baseline_lcc_fraction\n";
          for (std::size_t i = 0; i < cmp.observed.points.size(); ++i) {
            csv << fmt(cmp.observed.points[i].removed_fraction) << ',' << fmt(cmp.observed.points[i].lcc_fraction)
                << ',' << fmt(cmp.baseline.points[i].lcc_fraction) << '\n';
          }
        } else {
          const ConnectivityTrace trace = connectivity_attack(g, s, *batch, *max, opts);
          csv << "removed_fraction,lcc_fraction\n";
          for (const auto& p : trace.points) csv << fmt(p.removed_fraction) << ',' << fmt(p.lcc_fraction) << '\n';
        }
        if (!csv.flush()) throw std::runtime_error("write failed for " + out->string());
        m.inputs = edge_inputs(*edges);
        m.parameters["strategy"] = *strategy;
        m.parameters["batch_fraction"] = *batch;
        m.parameters["max_fraction"] = *max;
        m.parameters["baseline"] = *baseline;
        finish(m, *out);
      };
    });
  }
}

void Runner::add_evolution(CLI::App& app) {
  auto* sub = app.add_subcommand("evolution", "Yearly snapshot statistics");
  auto cache = std::make_shared<fs::path>(default_cache_path());
  auto cutoffs = std::make_shared<std::vector<std::string>>();
  auto out = std::make_shared<fs::path>();
  auto options = std::make_shared<EvolutionOptions>();
  sub->add_option("--cache", *cache, "Record cache (default: $DEPNET_CACHE_DIR/records.jsonl)");
  sub->add_option("--cutoffs", *cutoffs, "Comma-separated inclusive cutoffs, e.g. 2012-12-31,2013-12-31")
      ->required()
      ->delimiter(',');
  sub->add_option("--top-degree", options->top_out_degree, "Top-k size for the out-degree column")
      ->capture_default_str();
  sub->add_option("--top-dependence", options->top_dependence, "Top-k size for the dependence column")
      ->capture_default_str();
  sub->add_flag("--lwcc", options->largest_component_only, "Restrict each snapshot to its largest WCC");
  sub->add_option("--out", *out, "CSV to write")->required();
  add_threads(*sub);
  add_manifest(*sub);
  sub->callback([=, this] {
    command_ = "evolution";
    action_ = [=, this](RunManifest& m) {
      std::vector<Timestamp> times;
      for (const auto& c : *cutoffs) {
        auto t = parse_cutoff(c);
        if (!t) throw std::invalid_argument("unparseable cutoff: " + c);
        times.push_back(*t);
      }
      EvolutionOptions opts = *options;
      opts.pagerank.threads = shared_.threads;
      const EvolutionReport report = evolution_report(load_record_cache(*cache), times, opts);
      auto csv = open_output(*out);
      csv << "year,avg_out_degree_all,avg_out_degree_top50,avg_dependence_top100\n";
      auto cell = [](const std::optional<double>& x) { return x ? fmt(*x) : std::string(); };
      for (const EvolutionRow& row : report.rows) {
        const std::chrono::year_month_day ymd{std::chrono::floor<std::chrono::days>(row.cutoff)};
        csv << static_cast<int>(ymd.year()) << ',' << cell(row.avg_out_degree_all) << ','
            << cell(row.avg_out_degree_top) << ',' << cell(row.avg_dependence_top) << '\n';
      }
      if (!csv.flush()) throw std::runtime_error("write failed for " + out->string());
      if (report.empty_snapshots > 0) err_ << "warning: " << report.empty_snapshots << " empty snapshot(s)\n";
      m.inputs = {*cache};
      m.parameters["cutoffs"] = *cutoffs;
      m.parameters["top_degree"] = opts.top_out_degree;
      m.parameters["top_dependence"] = opts.top_dependence;
      m.parameters["lwcc"] = opts.largest_component_only;
      finish(m, *out);
    };
  });
}

void Runner::add_communities(CLI::App& app) {
  auto* sub = app.add_subcommand("communities", "Louvain communities vs. neighbourhoods of top packages");
  auto edges = std::make_shared<fs::path>();
  auto out = std::make_shared<fs::path>();
  auto options = std::make_shared<StudyOptions>();
  auto exclude_root = std::make_shared<bool>(false);
  sub->add_option("--edges", *edges, "Edge list")->required();
  sub->add_option("--top", options->top_n, "Number of top PageRank packages")->capture_default_str();
  sub->add_option("--k", options->ks, "Comma-separated neighbourhood radii (1-3)")
      ->delimiter(',')
      ->check(CLI::Range(1, 3));
  sub->add_option("--resolution", options->louvain.resolution, "Modularity resolution")->capture_default_str();
  sub->add_flag("--exclude-root", *exclude_root, "Leave the package itself out of its neighbourhood");
  sub->add_option("--out", *out, "CSV to write")->required();
  add_seed(*sub);
  add_threads(*sub);
  add_manifest(*sub);
  sub->callback([=, this] {
    command_ = "communities";
    action_ = [=, this](RunManifest& m) {
      const DependencyGraph g = load_edge_list(*edges);
      StudyOptions opts = *options;
      opts.louvain.seed = shared_.resolve_seed(err_);
      opts.include_root = !*exclude_root;
      opts.pagerank.threads = shared_.threads;
      const StudyResult study = top_package_study(g, opts);
      auto csv = open_output(*out);
      csv << "package,k,community_size,neighborhood_size,intersection_size,frac_of_community,"
             "frac_of_neighborhood,dependencies\n";
      for (const IntersectionReport& r : study.reports) {
        csv << csv_field(r.label) << ',' << r.k << ',' << r.community_size << ',' << r.neighborhood_size << ','
            << r.intersection_size << ',' << fmt(r.frac_of_community) << ',' << fmt(r.frac_of_neighborhood) << ','
            << r.dependencies << '\n';
      }
      if (!csv.flush()) throw std::runtime_error("write failed for " + out->string());
      out_ << "communities: " << study.partition.community_count() << '\n'
           << "modularity: " << fmt(study.partition.modularity) << '\n';
      m.inputs = edge_inputs(*edges);
      m.parameters["top"] = opts.top_n;
      m.parameters["k"] = opts.ks;
      m.parameters["resolution"] = opts.louvain.resolution;
      m.parameters["include_root"] = opts.include_root;
      m.parameters["modularity"] = study.partition.modularity;
      finish(m, *out);
    };
  });
}

void Runner::add_stats(CLI::App& app) {
  auto* sub = app.add_subcommand("stats", "Print size, degree and LCC statistics");
  auto edges = std::make_shared<fs::path>();
  auto lwcc = std::make_shared<bool>(false);
  sub->add_option("--edges", *edges, "Edge list")->required();
  sub->add_flag("--lwcc", *lwcc, "Report on the largest weakly connected component only");
  add_threads(*sub);
  sub->callback([=, this] {
    command_ = "stats";
    action_ = [=, this](RunManifest&) {
      DependencyGraph g = load_edge_list(*edges);
      if (*lwcc && !g.empty()) g = largest_weakly_connected_subgraph(g);
      const double n = static_cast<double>(g.node_count());
      const double m = static_cast<double>(g.edge_count());
      const ComponentLabeling wcc = weakly_connected_components(g);
      out_ << "nodes: " << g.node_count() << '\n'
           << "edges: " << g.edge_count() << '\n'
           << "avg out-degree (m/n): " << (n > 0 ? fmt(m / n) : "n/a") << '\n'
           << "avg total degree (2m/n): " << (n > 0 ? fmt(2.0 * m / n) : "n/a") << '\n'
           << "weak components: " << wcc.component_sizes.size() << '\n'
           << "lcc size: " << wcc.largest_size() << '\n'
           << "lcc fraction: " << fmt(wcc.lcc_fraction) << '\n';
    };
  });
}

int Runner::run() {
  CLI::App app{"Dependency network robustness toolkit", "depnet"};
  app.set_version_flag("--version", kToolVersion);
  app.require_subcommand(1);
  add_threads(app);
  add_ingest(app);
  add_snapshot(app);
  add_generate(app);
  add_pagerank(app);
  add_attack(app);
  add_evolution(app);
  add_communities(app);
  add_stats(app);

  std::vector<std::string> args(argv_.size() > 1 ? argv_.begin() + 1 : argv_.end(), argv_.end());
  std::reverse(args.begin(), args.end());
  try {
    app.parse(args);
  } catch (const CLI::Success& e) {
    return app.exit(e, out_, err_);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out_, err_);
    return kUsage;
  }
  if (!action_) return kUsage;

  RunManifest manifest;
  manifest.command = command_;
  manifest.argv = argv_;
  try {
    action_(manifest);
  } catch (const std::exception& e) {
    err_ << "depnet " << command_ << ": " << e.what() << '\n';
    return kFailure;
  }
  return kOk;
}

}  // namespace

int dispatch(const std::vector<std::string>& argv, std::ostream& out, std::ostream& err) {
  return Runner(argv, out, err).run();
}

}  // namespace depnet::cli
