// bookrec command line: ingest, synth, recommend, evaluate, sweep.

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "bookrec/engine.hpp"
#include "bookrec/errors.hpp"
#include "bookrec/evaluation.hpp"
#include "bookrec/io.hpp"
#include "bookrec/synth.hpp"

namespace fs = std::filesystem;
using namespace bookrec;

namespace {

struct RunConfig {
  std::string config_path;
  std::string ratings_path;
  std::string format = "csv";
  std::string out_dir = "bookrec-out";
  std::string cache_dir;  // empty disables the matrix cache
  double split = 0.9;
  std::string scheme = "cooc";
  std::string agg_author = "cfpa";
  std::string agg_book = "rrf";
  double rrf_k = 60.0;
  double alpha = 0.1;
  int limit = 4;
  int top_n = 10;
  int preference_threshold = 4;
  int relevance_threshold = 4;
};

void add_corpus_options(CLI::App* cmd, RunConfig& cfg) {
  cmd->add_option("--config", cfg.config_path,
                  "Key-value config file; flags take precedence")
      ->check(CLI::ExistingFile);
  cmd->add_option("--ratings", cfg.ratings_path, "Ratings file")
      ->required()
      ->check(CLI::ExistingFile);
  cmd->add_option("--format", cfg.format, "Ratings file format")
      ->check(CLI::IsMember({"csv", "jsonl"}))
      ->capture_default_str();
}

// Key-value config support: `key=value` lines, # comments. Matching keys are
// injected as options ahead of the explicit flags, so flags win.
std::vector<std::pair<std::string, std::string>> read_config_file(
    const std::string& path) {
  std::ifstream in(path);
  if (!in) throw MissingFile(path);
  std::vector<std::pair<std::string, std::string>> entries;
  std::string line;
  long line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto strip = [](std::string s) {
      const auto a = s.find_first_not_of(" \t\r");
      if (a == std::string::npos) return std::string();
      const auto b = s.find_last_not_of(" \t\r");
      return s.substr(a, b - a + 1);
    };
    const std::string text = strip(line);
    if (text.empty() || text[0] == '#') continue;
    const auto eq = text.find('=');
    if (eq == std::string::npos) {
      throw MalformedRecord(line_no, "expected key=value in config file");
    }
    std::string value = strip(text.substr(eq + 1));
    if (value.size() >= 2 && value.front() == '"' && value.back() == '"') {
      value = value.substr(1, value.size() - 2);
    }
    entries.emplace_back(strip(text.substr(0, eq)), value);
  }
  return entries;
}

std::vector<std::string> inject_config(const std::vector<std::string>& args,
                                       CLI::App& app) {
  // args[0] is the subcommand name
  if (args.empty()) return args;
  CLI::App* sub = app.get_subcommand_no_throw(args[0]);
  if (sub == nullptr) return args;

  std::string config_path;
  for (std::size_t i = 1; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) {
      config_path = args[i + 1];
    } else if (args[i].rfind("--config=", 0) == 0) {
      config_path = args[i].substr(9);
    }
  }
  if (config_path.empty()) return args;

  std::vector<std::string> out{args[0]};
  for (const auto& [key, value] : read_config_file(config_path)) {
    // keys meant for other subcommands are fine to skip
    if (sub->get_option_no_throw("--" + key) == nullptr) continue;
    out.push_back("--" + key);
    out.push_back(value);
  }
  out.insert(out.end(), args.begin() + 1, args.end());
  return out;
}

void add_model_options(CLI::App* cmd, RunConfig& cfg) {
  cmd->add_option("--scheme", cfg.scheme, "Similarity scheme")
      ->check(CLI::IsMember(
          {"cosine", "ieuc", "cooc", "cooc2-cosine", "cooc2-ieuc"}))
      ->capture_default_str();
  cmd->add_option("--agg-author", cfg.agg_author, "Author aggregation")
      ->check(CLI::IsMember({"rrf", "cfpa"}))
      ->capture_default_str();
  cmd->add_option("--agg-book", cfg.agg_book, "Book aggregation")
      ->check(CLI::IsMember({"rrf", "cfpa"}))
      ->capture_default_str();
  cmd->add_option("--rrf-k", cfg.rrf_k, "RRF rank constant")
      ->capture_default_str();
  cmd->add_option("--alpha", cfg.alpha, "Author weight in the fused score")
      ->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();
  cmd->add_option("--limit", cfg.limit, "Max books per author in expansion")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cmd->add_option("--top-n", cfg.top_n, "Recommendation list length")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cmd->add_option("--preference-threshold", cfg.preference_threshold,
                  "Minimum rating for a book to count as preferred")
      ->check(CLI::Range(1, 5))
      ->capture_default_str();
  cmd->add_option("--cache-dir", cfg.cache_dir,
                  "Directory for cached similarity matrices");
}

RatingsFormat format_of(const RunConfig& cfg) {
  return cfg.format == "jsonl" ? RatingsFormat::jsonl : RatingsFormat::csv;
}

EvalConfig eval_config_of(const RunConfig& cfg) {
  EvalConfig config;
  config.scheme = scheme_from_string(cfg.scheme);
  config.agg_author = {agg_from_string(cfg.agg_author), cfg.rrf_k};
  config.agg_book = {agg_from_string(cfg.agg_book), cfg.rrf_k};
  config.fusion = {cfg.alpha, cfg.limit, cfg.top_n};
  config.preference_threshold = cfg.preference_threshold;
  config.relevance_threshold = cfg.relevance_threshold;
  return config;
}

std::string cache_key(const std::vector<RatingEvent>& train, Scheme scheme,
                      int threshold, Kind kind) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(corpus_hash(train)));
  return std::string(buf) + "_" + to_string(scheme) + "_" +
         std::to_string(threshold) + "_" + to_string(kind) + ".brsm";
}

SimilarityMatrix cached_matrix(const std::vector<RatingEvent>& train,
                               const Catalog& catalog, Kind kind, Scheme scheme,
                               int threshold, const std::string& cache_dir) {
  if (cache_dir.empty()) {
    return build_matrix(train, catalog, kind, scheme, threshold);
  }
  const fs::path path =
      fs::path(cache_dir) / cache_key(train, scheme, threshold, kind);
  if (auto m = load_matrix(path.string())) {
    if (m->kind == kind && m->scheme == scheme) return std::move(*m);
  }
  auto m = build_matrix(train, catalog, kind, scheme, threshold);
  save_matrix(m, path.string());
  return m;
}

Engine train_engine(std::vector<RatingEvent> train, const RunConfig& cfg) {
  const EngineConfig engine_config{scheme_from_string(cfg.scheme),
                                   cfg.preference_threshold};
  if (cfg.cache_dir.empty()) {
    return Engine::train(std::move(train), engine_config);
  }
  auto catalog = build_catalog(train);
  auto book = cached_matrix(train, catalog, Kind::book, engine_config.scheme,
                            cfg.preference_threshold, cfg.cache_dir);
  auto author = cached_matrix(train, catalog, Kind::author, engine_config.scheme,
                              cfg.preference_threshold, cfg.cache_dir);
  return Engine::from_parts(std::move(train), std::move(catalog),
                            std::move(book), std::move(author), engine_config);
}

void dump_matrices(const Engine& engine, const std::string& dir) {
  for (const auto* m : {&engine.book_sim(), &engine.author_sim()}) {
    std::ostringstream out;
    dump_matrix_csv(*m, out);
    const fs::path path =
        fs::path(dir) / (to_string(m->kind) + "_" + to_string(m->scheme) + ".csv");
    write_text_atomic(path.string(), out.str());
  }
}

int cmd_ingest(const RunConfig& cfg) {
  auto events = load_ratings(cfg.ratings_path, format_of(cfg));
  if (events.empty()) throw EmptyInput(cfg.ratings_path);

  std::set<std::string> users, books, authors;
  for (const auto& e : events) {
    users.insert(e.user_id);
    books.insert(e.book_id);
    authors.insert(e.author_id);
  }
  auto corpus = temporal_split(std::move(events), cfg.split);
  const auto catalog = build_catalog(corpus.train);
  for (const auto& w : catalog.warnings) std::cerr << "warning: " << w << "\n";

  std::vector<RatingEvent> all = corpus.train;
  all.insert(all.end(), corpus.test.begin(), corpus.test.end());

  const fs::path out(cfg.out_dir);
  write_text_atomic((out / "corpus.csv").string(), ratings_to_csv(all));
  write_text_atomic((out / "train.csv").string(), ratings_to_csv(corpus.train));
  write_text_atomic((out / "test.csv").string(), ratings_to_csv(corpus.test));

  std::ostringstream summary;
  summary << "{\n"
          << "  \"events\": " << all.size() << ",\n"
          << "  \"users\": " << users.size() << ",\n"
          << "  \"books\": " << books.size() << ",\n"
          << "  \"authors\": " << authors.size() << ",\n"
          << "  \"train_events\": " << corpus.train.size() << ",\n"
          << "  \"test_events\": " << corpus.test.size() << ",\n"
          << "  \"split_fraction\": " << format_double(cfg.split) << ",\n"
          << "  \"catalog_warnings\": " << catalog.warnings.size() << "\n"
          << "}\n";
  write_text_atomic((out / "summary.json").string(), summary.str());

  std::cout << "events: " << all.size() << "\n"
            << "users: " << users.size() << "\n"
            << "books: " << books.size() << "\n"
            << "authors: " << authors.size() << "\n"
            << "train: " << corpus.train.size() << "\n"
            << "test: " << corpus.test.size() << "\n"
            << "wrote: " << (out / "corpus.csv").string() << ", train.csv, "
            << "test.csv, summary.json\n";
  return 0;
}

int cmd_synth(int users, int authors, int books_per_author, double affinity,
              std::uint64_t seed, const std::string& out_path) {
  const auto events =
      synth_generate(users, authors, books_per_author, affinity, seed);
  write_text_atomic(out_path, ratings_to_csv(events));
  std::cout << "events: " << events.size() << "\n"
            << "wrote: " << out_path << "\n";
  return 0;
}

int cmd_recommend(const RunConfig& cfg, const std::string& user_id,
                  const std::string& out_path,
                  const std::string& dump_dir) {
  // serving mode: train on everything we have
  auto events = load_ratings(cfg.ratings_path, format_of(cfg));
  if (events.empty()) throw EmptyInput(cfg.ratings_path);
  const auto engine = train_engine(std::move(events), cfg);
  if (!dump_dir.empty()) dump_matrices(engine, dump_dir);

  const auto config = eval_config_of(cfg);
  const auto list =
      engine.recommend(user_id, config.fusion, config.agg_author, config.agg_book);
  const auto csv = recommendations_to_csv(list, engine.catalog());
  if (out_path.empty()) {
    std::cout << csv;
  } else {
    write_text_atomic(out_path, csv);
    std::cout << "wrote: " << out_path << "\n";
  }
  return 0;
}

int cmd_evaluate(const RunConfig& cfg, const std::string& report_path,
                 const std::string& dump_dir) {
  auto events = load_ratings(cfg.ratings_path, format_of(cfg));
  if (events.empty()) throw EmptyInput(cfg.ratings_path);
  auto corpus = temporal_split(std::move(events), cfg.split);
  const auto engine = train_engine(corpus.train, cfg);
  if (!dump_dir.empty()) dump_matrices(engine, dump_dir);

  const auto report =
      evaluate_with_engine(engine, corpus.test, eval_config_of(cfg));

  const std::string path = report_path.empty()
                               ? (fs::path(cfg.out_dir) / "eval_report.json").string()
                               : report_path;
  write_text_atomic(path, to_json_string(report));
  std::cout << "mrr: " << format_double(report.mrr) << "\n"
            << "users_evaluated: " << report.n_users_evaluated << "\n"
            << "skipped_cold_start: " << report.skipped_cold_start << "\n"
            << "report: " << path << "\n";
  return 0;
}

std::vector<double> parse_alpha_grid(const std::string& text) {
  if (text.empty()) return default_alpha_grid();
  std::vector<double> grid;
  std::istringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    grid.push_back(std::stod(tok));
  }
  if (grid.empty()) throw InvalidParameter("empty alpha grid");
  return grid;
}

std::vector<int> parse_limit_range(const std::string& text) {
  if (text.empty()) return default_limit_range();
  const auto dash = text.find('-');
  std::vector<int> limits;
  if (dash == std::string::npos) {
    std::istringstream ss(text);
    std::string tok;
    while (std::getline(ss, tok, ',')) limits.push_back(std::stoi(tok));
  } else {
    const int lo = std::stoi(text.substr(0, dash));
    const int hi = std::stoi(text.substr(dash + 1));
    for (int i = lo; i <= hi; ++i) limits.push_back(i);
  }
  if (limits.empty()) throw InvalidParameter("empty limit range");
  for (int l : limits) {
    if (l < 1) throw InvalidParameter("limits must be >= 1");
  }
  return limits;
}

int cmd_sweep(const RunConfig& cfg, const std::string& kind,
              const std::string& out_path, const std::string& alphas_text,
              const std::string& limits_text) {
  auto events = load_ratings(cfg.ratings_path, format_of(cfg));
  if (events.empty()) throw EmptyInput(cfg.ratings_path);
  auto corpus = temporal_split(std::move(events), cfg.split);
  const auto base = eval_config_of(cfg);

  std::ostringstream out;
  std::string best;
  if (kind == "similarity") {
    const auto rows = sweep_similarity(corpus, base);
    write_similarity_sweep_csv(rows, out);
    const SimilaritySweepRow* top = nullptr;
    for (const auto& r : rows) {
      if (r.ok && (!top || r.mrr > top->mrr)) top = &r;
    }
    if (top) {
      best = "kind=" + to_string(top->kind) + " scheme=" + to_string(top->scheme) +
             " aggregation=" + to_string(top->aggregation) +
             " mrr=" + format_double(top->mrr);
    }
  } else if (kind == "limit") {
    const auto rows = sweep_book_limit(corpus, base, parse_limit_range(limits_text));
    write_limit_sweep_csv(rows, out);
    const LimitSweepRow* top = nullptr;
    for (const auto& r : rows) {
      if (r.ok && (!top || r.mrr > top->mrr)) top = &r;
    }
    if (top) {
      best = "limit=" + std::to_string(top->limit) +
             " aggregation=" + to_string(top->aggregation) +
             " mrr=" + format_double(top->mrr);
    }
  } else {
    const auto rows = sweep_alpha(corpus, base, parse_alpha_grid(alphas_text));
    write_alpha_sweep_csv(rows, out);
    const AlphaSweepRow* top = nullptr;
    for (const auto& r : rows) {
      if (r.ok && (!top || r.mrr > top->mrr)) top = &r;
    }
    if (top) {
      best = "alpha=" + format_double(top->alpha) +
             " agg_author=" + to_string(top->agg_author) +
             " agg_book=" + to_string(top->agg_book) +
             " mrr=" + format_double(top->mrr);
    }
  }

  const std::string path =
      out_path.empty()
          ? (fs::path(cfg.out_dir) / ("sweep_" + kind + ".csv")).string()
          : out_path;
  write_text_atomic(path, out.str());
  std::cout << "wrote: " << path << "\n";
  if (!best.empty()) std::cout << "best: " << best << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hybrid book/author recommender with an offline evaluation harness"};
  app.require_subcommand(1);
  // config-file injection repeats options; the explicit flag must win
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);

  RunConfig cfg;
  std::string config_path;

  auto* ingest = app.add_subcommand(
      "ingest", "Load ratings, split temporally, write a corpus snapshot");
  add_corpus_options(ingest, cfg);
  ingest->add_option("--split", cfg.split, "Train fraction of the temporal split")
      ->check(CLI::Range(1e-9, 1.0 - 1e-9))
      ->capture_default_str();
  ingest->add_option("--out", cfg.out_dir, "Output directory")
      ->capture_default_str();

  int synth_users = 200, synth_authors = 40, synth_bpa = 6;
  double synth_affinity = 0.8;
  std::uint64_t synth_seed = 0;
  std::string synth_out = "synth_ratings.csv";
  auto* synth = app.add_subcommand(
      "synth", "Generate a deterministic synthetic rating corpus");
  synth->add_option("--users", synth_users)->check(CLI::PositiveNumber)
      ->capture_default_str();
  synth->add_option("--authors", synth_authors)->check(CLI::PositiveNumber)
      ->capture_default_str();
  synth->add_option("--books-per-author", synth_bpa)->check(CLI::PositiveNumber)
      ->capture_default_str();
  synth->add_option("--affinity", synth_affinity, "Planted author affinity")
      ->check(CLI::Range(0.0, 1.0))->capture_default_str();
  synth->add_option("--seed", synth_seed, "RNG seed")->required();
  synth->add_option("--out", synth_out, "Output CSV path")->capture_default_str();
  synth->add_option("--config", cfg.config_path,
                    "Key-value config file; flags take precedence")
      ->check(CLI::ExistingFile);

  std::string user_id, rec_out, dump_dir;
  auto* recommend = app.add_subcommand(
      "recommend", "Print or write the top-n recommendations for one user");
  add_corpus_options(recommend, cfg);
  add_model_options(recommend, cfg);
  recommend->add_option("--user", user_id, "User id to recommend for")->required();
  recommend->add_option("--out", rec_out, "Write CSV here instead of stdout");
  recommend->add_option("--dump-matrices", dump_dir,
                        "Directory for similarity matrix CSV dumps");

  std::string report_path;
  auto* evaluate = app.add_subcommand(
      "evaluate", "Train on the temporal train split and report MRR");
  add_corpus_options(evaluate, cfg);
  add_model_options(evaluate, cfg);
  evaluate->add_option("--split", cfg.split, "Train fraction")
      ->check(CLI::Range(1e-9, 1.0 - 1e-9))->capture_default_str();
  evaluate->add_option("--relevance-threshold", cfg.relevance_threshold,
                       "Minimum test rating that counts as a hit")
      ->check(CLI::Range(1, 5))->capture_default_str();
  evaluate->add_option("--out-dir", cfg.out_dir, "Output directory")
      ->capture_default_str();
  evaluate->add_option("--report", report_path, "Report JSON path");
  evaluate->add_option("--dump-matrices", dump_dir,
                       "Directory for similarity matrix CSV dumps");

  std::string sweep_kind, sweep_out, alphas_text, limits_text;
  auto* sweep = app.add_subcommand("sweep", "Parameter sweeps, one CSV per run");
  sweep->add_option("kind", sweep_kind, "similarity|limit|alpha")
      ->required()
      ->check(CLI::IsMember({"similarity", "limit", "alpha"}));
  add_corpus_options(sweep, cfg);
  add_model_options(sweep, cfg);
  sweep->add_option("--split", cfg.split, "Train fraction")
      ->check(CLI::Range(1e-9, 1.0 - 1e-9))->capture_default_str();
  sweep->add_option("--relevance-threshold", cfg.relevance_threshold,
                    "Minimum test rating that counts as a hit")
      ->check(CLI::Range(1, 5))->capture_default_str();
  sweep->add_option("--out-dir", cfg.out_dir, "Output directory")
      ->capture_default_str();
  sweep->add_option("--out", sweep_out, "Sweep CSV path");
  sweep->add_option("--alphas", alphas_text,
                    "Comma separated alpha grid (default 0,0.1,...,1)");
  sweep->add_option("--limits", limits_text,
                    "Limit range like 1-8 or comma separated list");

  std::vector<std::string> args(argv + 1, argv + argc);
  try {
    args = inject_config(args, app);
    std::reverse(args.begin(), args.end());
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    // bad flags, missing files, unknown values: all input errors
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }

  try {
    if (ingest->parsed()) return cmd_ingest(cfg);
    if (synth->parsed()) {
      return cmd_synth(synth_users, synth_authors, synth_bpa, synth_affinity,
                       synth_seed, synth_out);
    }
    if (recommend->parsed()) return cmd_recommend(cfg, user_id, rec_out, dump_dir);
    if (evaluate->parsed()) return cmd_evaluate(cfg, report_path, dump_dir);
    if (sweep->parsed()) {
      return cmd_sweep(cfg, sweep_kind, sweep_out, alphas_text, limits_text);
    }
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const DomainError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
