#pragma once

#include <string>
#include <vector>

#include "bookrec/corpus.hpp"
#include "bookrec/hybrid.hpp"
#include "bookrec/predictor.hpp"
#include "bookrec/similarity.hpp"

namespace bookrec {

struct EngineConfig {
  Scheme scheme = Scheme::cooc;
  int preference_threshold = 4;
};

// Immutable trained state: catalog, the two similarity matrices and all user
// profiles. Safe to share read-only across threads; recommend() is const.
class Engine {
 public:
  Engine() = default;

  static Engine train(std::vector<RatingEvent> train_events,
                      const EngineConfig& config = {});

  // Assembles an engine from precomputed matrices (e.g. a disk cache). The
  // matrices must match the catalog built from `train_events`.
  static Engine from_parts(std::vector<RatingEvent> train_events,
                           Catalog catalog, SimilarityMatrix book_sim,
                           SimilarityMatrix author_sim,
                           const EngineConfig& config);

  bool trained() const { return trained_; }
  const EngineConfig& config() const { return config_; }
  const Catalog& catalog() const;
  const std::vector<RatingEvent>& train_events() const;
  const SimilarityMatrix& book_sim() const;
  const SimilarityMatrix& author_sim() const;
  const UserProfile& profile(UserIndex user) const;

  RecommendationList recommend(UserIndex user, const FusionSpec& fusion,
                               const AggregationSpec& agg_author,
                               const AggregationSpec& agg_book) const;

  RecommendationList recommend(const std::string& user_id,
                               const FusionSpec& fusion,
                               const AggregationSpec& agg_author,
                               const AggregationSpec& agg_book) const;

 private:
  bool trained_ = false;
  EngineConfig config_;
  std::vector<RatingEvent> train_;
  Catalog catalog_;
  SimilarityMatrix book_sim_;
  SimilarityMatrix author_sim_;
  std::vector<UserProfile> profiles_;

  void require_trained() const;
};

}  // namespace bookrec
