#include "bookrec/engine.hpp"

#include <utility>

#include "bookrec/errors.hpp"

namespace bookrec {

Engine Engine::train(std::vector<RatingEvent> train_events,
                     const EngineConfig& config) {
  Engine e;
  e.config_ = config;
  e.catalog_ = build_catalog(train_events);
  e.book_sim_ = build_matrix(train_events, e.catalog_, Kind::book,
                             config.scheme, config.preference_threshold);
  e.author_sim_ = build_matrix(train_events, e.catalog_, Kind::author,
                               config.scheme, config.preference_threshold);
  e.profiles_ =
      build_profiles(train_events, e.catalog_, config.preference_threshold);
  e.train_ = std::move(train_events);
  e.trained_ = true;
  return e;
}

Engine Engine::from_parts(std::vector<RatingEvent> train_events,
                          Catalog catalog, SimilarityMatrix book_sim,
                          SimilarityMatrix author_sim,
                          const EngineConfig& config) {
  if (book_sim.kind != Kind::book || author_sim.kind != Kind::author) {
    throw KindMismatch("from_parts: matrices have the wrong kinds");
  }
  if (book_sim.n_items != catalog.books.size() ||
      author_sim.n_items != catalog.authors.size()) {
    throw KindMismatch("from_parts: matrix sizes disagree with the catalog");
  }
  Engine e;
  e.config_ = config;
  e.catalog_ = std::move(catalog);
  e.book_sim_ = std::move(book_sim);
  e.author_sim_ = std::move(author_sim);
  e.profiles_ =
      build_profiles(train_events, e.catalog_, config.preference_threshold);
  e.train_ = std::move(train_events);
  e.trained_ = true;
  return e;
}

void Engine::require_trained() const {
  if (!trained_) throw UntrainedEngine();
}

const Catalog& Engine::catalog() const {
  require_trained();
  return catalog_;
}

const std::vector<RatingEvent>& Engine::train_events() const {
  require_trained();
  return train_;
}

const SimilarityMatrix& Engine::book_sim() const {
  require_trained();
  return book_sim_;
}

const SimilarityMatrix& Engine::author_sim() const {
  require_trained();
  return author_sim_;
}

const UserProfile& Engine::profile(UserIndex user) const {
  require_trained();
  if (user < 0 || user >= static_cast<UserIndex>(profiles_.size())) {
    throw UnknownUser("index " + std::to_string(user));
  }
  return profiles_[user];
}

RecommendationList Engine::recommend(UserIndex user, const FusionSpec& fusion,
                                     const AggregationSpec& agg_author,
                                     const AggregationSpec& agg_book) const {
  const UserProfile& prof = profile(user);

  auto book_rv = normalize_rv(predict_books(book_sim_, prof, agg_book));
  auto author_rv = predict_authors(author_sim_, prof, agg_author);
  auto expanded = normalize_rv(
      expand_authors(author_rv, catalog_, fusion.max_books_per_author));
  auto fused = wam_fuse(expanded, book_rv, fusion.alpha);
  return top_n(fused, prof, fusion);
}

RecommendationList Engine::recommend(const std::string& user_id,
                                     const FusionSpec& fusion,
                                     const AggregationSpec& agg_author,
                                     const AggregationSpec& agg_book) const {
  require_trained();
  const auto user = catalog_.users.find(user_id);
  if (!user) throw UnknownUser(user_id);
  return recommend(*user, fusion, agg_author, agg_book);
}

}  // namespace bookrec
