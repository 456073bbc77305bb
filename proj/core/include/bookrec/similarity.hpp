#pragma once

#include <cstdint>
#include <iosfwd>
#include <utility>
#include <vector>

#include "bookrec/corpus.hpp"
#include "bookrec/types.hpp"

namespace bookrec {

// Sparse entries sorted by their dimension index; absent entries are zero.
using SparseVec = std::vector<std::pair<std::int32_t, double>>;

// Items as sparse vectors over users. Book rows carry ratings, author rows
// the user's mean rating over that author's books.
struct ItemUserMatrix {
  Kind kind = Kind::book;
  std::int32_t n_items = 0;
  std::int32_t n_users = 0;
  std::vector<SparseVec> rows;
};

// Symmetric item x item scores. Rows store both (i,j) and (j,i) with only
// strictly positive scores; the diagonal is never stored.
struct SimilarityMatrix {
  Kind kind = Kind::book;
  Scheme scheme = Scheme::cooc;
  std::int32_t n_items = 0;
  std::vector<SparseVec> rows;

  double score(std::int32_t i, std::int32_t j) const;
};

ItemUserMatrix build_item_user(const std::vector<RatingEvent>& train,
                               const Catalog& catalog, Kind kind);

// cos(v_i, v_j); zero if either vector has zero norm.
SimilarityMatrix cosine_matrix(const ItemUserMatrix& m);

// 1 / max(euclidean distance, 1e-9), missing entries treated as zero.
// Identical vectors hit the floor and score 1e9.
SimilarityMatrix ieuc_matrix(const ItemUserMatrix& m);

// Counts users preferring both items. Set semantics: one user adds at most
// one to any cell. For authors, "preferring" means at least one preferred
// book by that author.
SimilarityMatrix cooccurrence_matrix(const std::vector<RatingEvent>& train,
                                     const Catalog& catalog, Kind kind,
                                     int preference_threshold);

// Items represented by their co-occurrence rows, compared pairwise with
// cosine or ieuc. `metric` must be Scheme::cosine or Scheme::ieuc.
SimilarityMatrix second_order_matrix(const SimilarityMatrix& cooc,
                                     Scheme metric);

// Dispatches on scheme: cosine/ieuc over item-user vectors, cooc counts,
// or a geometric metric over second-order co-occurrence rows.
SimilarityMatrix build_matrix(const std::vector<RatingEvent>& train,
                              const Catalog& catalog, Kind kind, Scheme scheme,
                              int preference_threshold);

// Stable content hash over kind, scheme and all stored scores.
std::uint64_t fingerprint(const SimilarityMatrix& m);

// Debug dump: header item_i,item_j,score with i<j by index.
void dump_matrix_csv(const SimilarityMatrix& m, std::ostream& out);

}  // namespace bookrec
