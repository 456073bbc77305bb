#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "bookrec/corpus.hpp"
#include "bookrec/engine.hpp"
#include "bookrec/hybrid.hpp"
#include "bookrec/predictor.hpp"

namespace bookrec {

struct EvalConfig {
  Scheme scheme = Scheme::cooc;
  AggregationSpec agg_author{AggFunction::cfpa};
  AggregationSpec agg_book{AggFunction::rrf};
  FusionSpec fusion;
  int preference_threshold = 4;
  int relevance_threshold = 4;  // test-side "good book" cutoff
};

struct EvalReport {
  double mrr = 0.0;
  int n_users_evaluated = 0;
  int skipped_cold_start = 0;  // users with test events but no train history
  std::vector<std::pair<UserIndex, double>> per_user;  // reciprocal ranks
  EvalConfig config;
};

// Mean reciprocal rank over the given lists: per user, 1/position of the
// first list entry that the user rated >= relevance_threshold in test, or 0
// when no entry hits. Lists whose user has no test events are excluded from
// the denominator.
EvalReport mrr(const std::vector<RecommendationList>& lists,
               const std::vector<RatingEvent>& test, const Catalog& catalog,
               int relevance_threshold);

// Trains on corpus.train only, recommends for every user with both training
// history and at least one test event, and scores the lists with mrr().
EvalReport evaluate(const SplitCorpus& corpus, const EvalConfig& config);

// Same protocol with an already trained engine; the engine's scheme and
// preference threshold take precedence over the config's.
EvalReport evaluate_with_engine(const Engine& engine,
                                const std::vector<RatingEvent>& test,
                                const EvalConfig& config);

std::string to_json_string(const EvalReport& report, int indent = 2);

// Sweep cells record either an MRR or the error that prevented one; no cell
// is silently skipped.
struct SimilaritySweepRow {
  Kind kind = Kind::book;
  Scheme scheme = Scheme::cooc;
  AggFunction aggregation = AggFunction::rrf;
  double mrr = 0.0;
  bool ok = true;
  std::string error;
};

struct LimitSweepRow {
  int limit = 1;
  AggFunction aggregation = AggFunction::rrf;
  double mrr = 0.0;
  bool ok = true;
  std::string error;
};

struct AlphaSweepRow {
  double alpha = 0.0;
  AggFunction agg_author = AggFunction::rrf;
  AggFunction agg_book = AggFunction::rrf;
  double mrr = 0.0;
  bool ok = true;
  std::string error;
};

// All five schemes x both aggregations, book-only (alpha=0) and author-only
// (alpha=1): 20 rows.
std::vector<SimilaritySweepRow> sweep_similarity(const SplitCorpus& corpus,
                                                 const EvalConfig& base);

// Author-only pipeline (alpha=1) for each expansion limit x aggregation.
std::vector<LimitSweepRow> sweep_book_limit(const SplitCorpus& corpus,
                                            const EvalConfig& base,
                                            const std::vector<int>& limits);

// All four aggregation combinations across the alpha grid.
std::vector<AlphaSweepRow> sweep_alpha(const SplitCorpus& corpus,
                                       const EvalConfig& base,
                                       const std::vector<double>& alphas);

// CSV emitters; headers exactly kind,scheme,aggregation,mrr /
// limit,aggregation,mrr / alpha,agg_author,agg_book,mrr. Failed cells write
// the literal word `error` in the mrr column.
void write_similarity_sweep_csv(const std::vector<SimilaritySweepRow>& rows,
                                std::ostream& out);
void write_limit_sweep_csv(const std::vector<LimitSweepRow>& rows,
                           std::ostream& out);
void write_alpha_sweep_csv(const std::vector<AlphaSweepRow>& rows,
                           std::ostream& out);

std::vector<double> default_alpha_grid();  // 0.0, 0.1, ..., 1.0
std::vector<int> default_limit_range();    // 1..8

}  // namespace bookrec
