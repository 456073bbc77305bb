#pragma once

#include <utility>
#include <vector>

#include "bookrec/corpus.hpp"
#include "bookrec/predictor.hpp"
#include "bookrec/types.hpp"

namespace bookrec {

struct FusionSpec {
  double alpha = 0.1;            // author weight in the fused score
  int max_books_per_author = 4;  // expansion cap
  int top_n = 10;
};

// Final per-user output: (book, fused score) strictly ordered by
// (score desc, book index asc), never containing a train-rated book.
struct RecommendationList {
  UserIndex user = -1;
  std::vector<std::pair<BookIndex, double>> entries;
};

// Turns an author rank vector into a book rank vector: each scored author
// contributes its `limit` most popular books with score
// author_score * popularity(b) / max_popularity.
RankVector expand_authors(const RankVector& author_rv, const Catalog& catalog,
                          int limit);

// Min-max normalization of the nonzero entries to [0,1]; zeros stay zero and
// an all-equal vector maps to all ones. Monotone, so orderings survive.
RankVector normalize_rv(const RankVector& rv);

// (alpha * author_books + (1-alpha) * icf_books) / 2 over the union of keys.
RankVector wam_fuse(const RankVector& author_books, const RankVector& icf_books,
                    double alpha);

// Drops train-rated books, sorts by (score desc, index asc) and keeps the
// first top_n positive-score entries.
RecommendationList top_n(const RankVector& fused, const UserProfile& profile,
                         const FusionSpec& spec);

}  // namespace bookrec
