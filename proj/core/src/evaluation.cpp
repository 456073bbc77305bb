#include "bookrec/evaluation.hpp"

#include <algorithm>
#include <future>
#include <ostream>
#include <set>
#include <unordered_map>
#include <unordered_set>

#include "bookrec/errors.hpp"
#include "bookrec/io.hpp"
#include "json.hpp"

namespace bookrec {

namespace {

// relevant books per user index, plus which users have any test event at all
struct TestView {
  std::unordered_map<UserIndex, std::set<BookIndex>> relevant;
  std::unordered_set<UserIndex> has_test_event;
  int skipped_cold_start = 0;
};

TestView view_test(const std::vector<RatingEvent>& test, const Catalog& catalog,
                   int relevance_threshold) {
  TestView v;
  std::set<std::string> cold;
  for (const auto& e : test) {
    const auto u = catalog.users.find(e.user_id);
    if (!u) {
      cold.insert(e.user_id);
      continue;
    }
    v.has_test_event.insert(*u);
    if (e.rating < relevance_threshold) continue;
    const auto b = catalog.books.find(e.book_id);
    if (!b) continue;  // unseen book cannot be recommended anyway
    v.relevant[*u].insert(*b);
  }
  v.skipped_cold_start = static_cast<int>(cold.size());
  return v;
}

}  // namespace

EvalReport mrr(const std::vector<RecommendationList>& lists,
               const std::vector<RatingEvent>& test, const Catalog& catalog,
               int relevance_threshold) {
  if (test.empty()) throw EmptyTestSet();
  const auto view = view_test(test, catalog, relevance_threshold);

  EvalReport report;
  report.skipped_cold_start = view.skipped_cold_start;
  double sum = 0.0;
  for (const auto& list : lists) {
    if (!view.has_test_event.count(list.user)) continue;
    double rr = 0.0;
    if (auto it = view.relevant.find(list.user); it != view.relevant.end()) {
      for (std::size_t pos = 0; pos < list.entries.size(); ++pos) {
        if (it->second.count(list.entries[pos].first)) {
          rr = 1.0 / static_cast<double>(pos + 1);
          break;
        }
      }
    }
    report.per_user.emplace_back(list.user, rr);
    sum += rr;
  }
  report.n_users_evaluated = static_cast<int>(report.per_user.size());
  report.mrr = report.n_users_evaluated > 0
                   ? sum / static_cast<double>(report.n_users_evaluated)
                   : 0.0;
  return report;
}

EvalReport evaluate_with_engine(const Engine& engine,
                                const std::vector<RatingEvent>& test,
                                const EvalConfig& config) {
  if (config.relevance_threshold < 1 || config.relevance_threshold > 5) {
    throw InvalidParameter("relevance_threshold must be in [1,5]");
  }
  if (test.empty()) throw EmptyTestSet();
  const Catalog& catalog = engine.catalog();
  const auto view = view_test(test, catalog, config.relevance_threshold);

  std::vector<UserIndex> users;
  for (UserIndex u = 0; u < catalog.users.size(); ++u) {
    if (view.has_test_event.count(u)) users.push_back(u);
  }
  if (users.empty()) throw NoEvaluableUsers();

  std::vector<RecommendationList> lists;
  lists.reserve(users.size());
  for (const UserIndex u : users) {
    lists.push_back(
        engine.recommend(u, config.fusion, config.agg_author, config.agg_book));
  }

  auto report = mrr(lists, test, catalog, config.relevance_threshold);
  report.config = config;
  report.config.scheme = engine.config().scheme;
  report.config.preference_threshold = engine.config().preference_threshold;
  return report;
}

EvalReport evaluate(const SplitCorpus& corpus, const EvalConfig& config) {
  EngineConfig engine_config{config.scheme, config.preference_threshold};
  const auto engine = Engine::train(corpus.train, engine_config);
  return evaluate_with_engine(engine, corpus.test, config);
}

std::string to_json_string(const EvalReport& report, int indent) {
  nlohmann::json config{
      {"scheme", to_string(report.config.scheme)},
      {"agg_author", to_string(report.config.agg_author.function)},
      {"agg_book", to_string(report.config.agg_book.function)},
      {"rrf_k", report.config.agg_book.rrf_k},
      {"alpha", report.config.fusion.alpha},
      {"max_books_per_author", report.config.fusion.max_books_per_author},
      {"top_n", report.config.fusion.top_n},
      {"preference_threshold", report.config.preference_threshold},
      {"relevance_threshold", report.config.relevance_threshold},
  };
  nlohmann::json j{
      {"mrr", report.mrr},
      {"n_users_evaluated", report.n_users_evaluated},
      {"skipped_cold_start", report.skipped_cold_start},
      {"config", std::move(config)},
  };
  return j.dump(indent) + "\n";
}

namespace {

constexpr AggFunction kAggs[] = {AggFunction::rrf, AggFunction::cfpa};

// Runs independent sweep cells concurrently; results land by cell index so
// output order never depends on scheduling.
template <typename Row, typename Fn>
std::vector<Row> run_cells(std::size_t n, Fn&& make_row) {
  std::vector<std::future<Row>> futures;
  futures.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    futures.push_back(std::async(std::launch::async, make_row, i));
  }
  std::vector<Row> rows;
  rows.reserve(n);
  for (auto& f : futures) rows.push_back(f.get());
  return rows;
}

template <typename Row>
void fill_cell(Row& row, const Engine& engine,
               const std::vector<RatingEvent>& test, const EvalConfig& config) {
  try {
    row.mrr = evaluate_with_engine(engine, test, config).mrr;
    row.ok = true;
  } catch (const std::exception& e) {
    row.ok = false;
    row.error = e.what();
  }
}

}  // namespace

std::vector<SimilaritySweepRow> sweep_similarity(const SplitCorpus& corpus,
                                                 const EvalConfig& base) {
  constexpr Scheme schemes[] = {Scheme::cosine, Scheme::ieuc, Scheme::cooc,
                                Scheme::cooc2_cosine, Scheme::cooc2_ieuc};
  std::vector<SimilaritySweepRow> rows;
  for (const Scheme scheme : schemes) {
    Engine engine;
    std::string train_error;
    try {
      engine = Engine::train(corpus.train,
                             {scheme, base.preference_threshold});
    } catch (const std::exception& e) {
      train_error = e.what();
    }

    struct Cell {
      Kind kind;
      AggFunction agg;
    };
    std::vector<Cell> cells;
    for (const Kind kind : {Kind::book, Kind::author}) {
      for (const AggFunction agg : kAggs) cells.push_back({kind, agg});
    }

    auto cell_rows = run_cells<SimilaritySweepRow>(
        cells.size(), [&](std::size_t i) {
          const auto [kind, agg] = cells[i];
          SimilaritySweepRow row;
          row.kind = kind;
          row.scheme = scheme;
          row.aggregation = agg;
          if (!train_error.empty()) {
            row.ok = false;
            row.error = train_error;
            return row;
          }
          EvalConfig config = base;
          config.scheme = scheme;
          if (kind == Kind::book) {
            config.fusion.alpha = 0.0;
            config.agg_book.function = agg;
          } else {
            config.fusion.alpha = 1.0;
            config.agg_author.function = agg;
          }
          fill_cell(row, engine, corpus.test, config);
          return row;
        });
    rows.insert(rows.end(), cell_rows.begin(), cell_rows.end());
  }
  std::stable_sort(rows.begin(), rows.end(),
                   [](const SimilaritySweepRow& a, const SimilaritySweepRow& b) {
                     return a.kind < b.kind;
                   });
  return rows;
}

std::vector<LimitSweepRow> sweep_book_limit(const SplitCorpus& corpus,
                                            const EvalConfig& base,
                                            const std::vector<int>& limits) {
  const auto engine =
      Engine::train(corpus.train, {base.scheme, base.preference_threshold});

  struct Cell {
    int limit;
    AggFunction agg;
  };
  std::vector<Cell> cells;
  for (const int limit : limits) {
    for (const AggFunction agg : kAggs) cells.push_back({limit, agg});
  }
  return run_cells<LimitSweepRow>(cells.size(), [&](std::size_t i) {
    const auto [limit, agg] = cells[i];
    LimitSweepRow row;
    row.limit = limit;
    row.aggregation = agg;
    EvalConfig config = base;
    config.fusion.alpha = 1.0;  // author-only pipeline
    config.fusion.max_books_per_author = limit;
    config.agg_author.function = agg;
    fill_cell(row, engine, corpus.test, config);
    return row;
  });
}

std::vector<AlphaSweepRow> sweep_alpha(const SplitCorpus& corpus,
                                       const EvalConfig& base,
                                       const std::vector<double>& alphas) {
  const auto engine =
      Engine::train(corpus.train, {base.scheme, base.preference_threshold});

  struct Cell {
    double alpha;
    AggFunction agg_author;
    AggFunction agg_book;
  };
  std::vector<Cell> cells;
  for (const double alpha : alphas) {
    for (const AggFunction aa : kAggs) {
      for (const AggFunction ab : kAggs) cells.push_back({alpha, aa, ab});
    }
  }
  return run_cells<AlphaSweepRow>(cells.size(), [&](std::size_t i) {
    const auto [alpha, aa, ab] = cells[i];
    AlphaSweepRow row;
    row.alpha = alpha;
    row.agg_author = aa;
    row.agg_book = ab;
    EvalConfig config = base;
    config.fusion.alpha = alpha;
    config.agg_author.function = aa;
    config.agg_book.function = ab;
    fill_cell(row, engine, corpus.test, config);
    return row;
  });
}

namespace {

void write_mrr_field(std::ostream& out, bool ok, double value) {
  if (ok) {
    out << format_double(value);
  } else {
    out << "error";
  }
}

}  // namespace

void write_similarity_sweep_csv(const std::vector<SimilaritySweepRow>& rows,
                                std::ostream& out) {
  out << "kind,scheme,aggregation,mrr\n";
  for (const auto& r : rows) {
    out << to_string(r.kind) << ',' << to_string(r.scheme) << ','
        << to_string(r.aggregation) << ',';
    write_mrr_field(out, r.ok, r.mrr);
    out << '\n';
  }
}

void write_limit_sweep_csv(const std::vector<LimitSweepRow>& rows,
                           std::ostream& out) {
  out << "limit,aggregation,mrr\n";
  for (const auto& r : rows) {
    out << r.limit << ',' << to_string(r.aggregation) << ',';
    write_mrr_field(out, r.ok, r.mrr);
    out << '\n';
  }
}

void write_alpha_sweep_csv(const std::vector<AlphaSweepRow>& rows,
                           std::ostream& out) {
  out << "alpha,agg_author,agg_book,mrr\n";
  for (const auto& r : rows) {
    out << format_double(r.alpha) << ',' << to_string(r.agg_author) << ','
        << to_string(r.agg_book) << ',';
    write_mrr_field(out, r.ok, r.mrr);
    out << '\n';
  }
}

std::vector<double> default_alpha_grid() {
  std::vector<double> grid;
  for (int i = 0; i <= 10; ++i) grid.push_back(i / 10.0);
  return grid;
}

std::vector<int> default_limit_range() {
  std::vector<int> limits;
  for (int i = 1; i <= 8; ++i) limits.push_back(i);
  return limits;
}

}  // namespace bookrec
