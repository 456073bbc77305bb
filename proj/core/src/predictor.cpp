#include "bookrec/predictor.hpp"

#include <algorithm>

#include "bookrec/errors.hpp"

namespace bookrec {

std::vector<SeedColumn> select_columns(const SimilarityMatrix& sim,
                                       std::vector<ItemIndex> seeds) {
  std::sort(seeds.begin(), seeds.end());
  seeds.erase(std::unique(seeds.begin(), seeds.end()), seeds.end());
  std::vector<SeedColumn> columns;
  columns.reserve(seeds.size());
  for (const ItemIndex seed : seeds) {
    if (seed < 0 || seed >= sim.n_items) {
      throw UnknownItem(to_string(sim.kind) + " index " + std::to_string(seed));
    }
    columns.push_back({seed, std::span(sim.rows[seed])});
  }
  return columns;
}

RankVector rrf_aggregate(std::span<const SeedColumn> columns, double k,
                         Kind kind) {
  if (!(k > 0.0)) {
    throw InvalidParameter("rrf k must be > 0, got " + std::to_string(k));
  }
  RankVector rv;
  rv.kind = kind;
  std::vector<std::pair<ItemIndex, double>> ranked;
  for (const auto& col : columns) {
    ranked.clear();
    for (const auto& [item, score] : col.column) {
      if (score > 0.0) ranked.emplace_back(item, score);
    }
    std::sort(ranked.begin(), ranked.end(),
              [](const auto& a, const auto& b) {
                if (a.second != b.second) return a.second > b.second;
                return a.first < b.first;
              });
    for (std::size_t r = 0; r < ranked.size(); ++r) {
      rv.scores[ranked[r].first] += 1.0 / (k + static_cast<double>(r + 1));
    }
  }
  return rv;
}

RankVector cfpa_aggregate(std::span<const SeedColumn> columns,
                          const UserProfile& profile, Kind kind) {
  RankVector rv;
  rv.kind = kind;
  for (const auto& col : columns) {
    double weight = 0.0;
    if (kind == Kind::book) {
      auto it = profile.book_ratings.find(col.seed);
      if (it == profile.book_ratings.end()) {
        throw MissingWeight("no rating for seed book " + std::to_string(col.seed));
      }
      weight = static_cast<double>(it->second);
    } else {
      auto it = profile.author_avg_rating.find(col.seed);
      if (it == profile.author_avg_rating.end()) {
        throw MissingWeight("no average rating for seed author " +
                            std::to_string(col.seed));
      }
      weight = it->second;
    }
    for (const auto& [item, score] : col.column) {
      if (score > 0.0) rv.scores[item] += weight * score;
    }
  }
  return rv;
}

RankVector aggregate(std::span<const SeedColumn> columns,
                     const UserProfile& profile, Kind kind,
                     const AggregationSpec& spec) {
  if (spec.function == AggFunction::rrf) {
    return rrf_aggregate(columns, spec.rrf_k, kind);
  }
  return cfpa_aggregate(columns, profile, kind);
}

RankVector predict_books(const SimilarityMatrix& sim,
                         const UserProfile& profile,
                         const AggregationSpec& spec) {
  if (sim.kind != Kind::book) {
    throw KindMismatch("predict_books needs a book matrix");
  }
  const auto columns = select_columns(sim, profile.preferred_books);
  auto rv = aggregate(columns, profile, Kind::book, spec);
  rv.provenance = Provenance::icfb;
  return rv;
}

RankVector predict_authors(const SimilarityMatrix& sim,
                           const UserProfile& profile,
                           const AggregationSpec& spec) {
  if (sim.kind != Kind::author) {
    throw KindMismatch("predict_authors needs an author matrix");
  }
  std::vector<ItemIndex> seeds;
  for (const auto& [author, count] : profile.author_pref_count) {
    if (count >= 1) seeds.push_back(author);
  }
  const auto columns = select_columns(sim, std::move(seeds));
  auto rv = aggregate(columns, profile, Kind::author, spec);
  rv.provenance = Provenance::icfa;
  return rv;
}

}  // namespace bookrec
