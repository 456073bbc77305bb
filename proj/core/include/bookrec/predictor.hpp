#pragma once

#include <map>
#include <span>
#include <vector>

#include "bookrec/corpus.hpp"
#include "bookrec/similarity.hpp"
#include "bookrec/types.hpp"

namespace bookrec {

// Item -> score. Items absent from `scores` are semantically zero; stored
// scores are strictly positive and finite.
struct RankVector {
  Kind kind = Kind::book;
  Provenance provenance = Provenance::icfb;
  std::map<ItemIndex, double> scores;

  double at(ItemIndex item) const {
    auto it = scores.find(item);
    return it == scores.end() ? 0.0 : it->second;
  }
};

struct AggregationSpec {
  AggFunction function = AggFunction::rrf;
  double rrf_k = 60.0;
};

// One similarity-matrix column per seed item. The span views into the
// matrix, which must outlive the column.
struct SeedColumn {
  ItemIndex seed = -1;
  std::span<const std::pair<ItemIndex, double>> column;
};

// Columns for the given seeds in ascending seed order. Each column excludes
// the seed itself (zero diagonal).
std::vector<SeedColumn> select_columns(const SimilarityMatrix& sim,
                                       std::vector<ItemIndex> seeds);

// Reciprocal rank fusion: within each column, positive-score items are
// ranked 1..m by descending score (ties to the lower item index) and item d
// collects 1/(k + rank(d)) per column that retrieves it.
RankVector rrf_aggregate(std::span<const SeedColumn> columns, double k,
                         Kind kind);

// Rating-weighted column sum: for book seeds the weight is the user's rating
// of the seed, for author seeds the user's average rating for that author.
RankVector cfpa_aggregate(std::span<const SeedColumn> columns,
                          const UserProfile& profile, Kind kind);

RankVector aggregate(std::span<const SeedColumn> columns,
                     const UserProfile& profile, Kind kind,
                     const AggregationSpec& spec);

// Seeds = the user's preferred books; provenance icfb.
RankVector predict_books(const SimilarityMatrix& sim,
                         const UserProfile& profile,
                         const AggregationSpec& spec);

// Seeds = authors with at least one preferred book; provenance icfa.
RankVector predict_authors(const SimilarityMatrix& sim,
                           const UserProfile& profile,
                           const AggregationSpec& spec);

}  // namespace bookrec
