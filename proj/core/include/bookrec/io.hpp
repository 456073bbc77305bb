#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "bookrec/corpus.hpp"
#include "bookrec/hybrid.hpp"
#include "bookrec/similarity.hpp"
#include "bookrec/types.hpp"

namespace bookrec {

// Stable content hash over the event sequence (order sensitive).
std::uint64_t corpus_hash(const std::vector<RatingEvent>& events);

// Writes via a temp file in the same directory, then renames.
void write_text_atomic(const std::string& path, const std::string& content);

std::string ratings_to_csv(const std::vector<RatingEvent>& events);

// Recommendation CSV: header user_id,rank,book_id,score.
std::string recommendations_to_csv(const RecommendationList& list,
                                   const Catalog& catalog);

// Rank vector inspection CSV: header item_id,score, items in index order.
std::string rank_vector_to_csv(const RankVector& rv, const Catalog& catalog);

// Binary matrix snapshot for the on-disk cache; doubles round-trip exactly.
void save_matrix(const SimilarityMatrix& m, const std::string& path);
std::optional<SimilarityMatrix> load_matrix(const std::string& path);

// Compact decimal formatting that round-trips a double.
std::string format_double(double v);

}  // namespace bookrec
