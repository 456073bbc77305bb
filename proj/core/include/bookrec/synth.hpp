#pragma once

#include <cstdint>
#include <vector>

#include "bookrec/types.hpp"

namespace bookrec {

struct SynthParams {
  int n_users = 200;
  int n_authors = 40;
  int books_per_author = 6;
  double affinity = 0.8;  // in [0,1]
  std::uint64_t seed = 1;
};

// Generated corpus plus the planted ground truth, for statistical checks.
struct SynthCorpus {
  std::vector<RatingEvent> events;
  std::vector<std::vector<AuthorIndex>> liked_authors;  // per user, ascending
};

// Deterministic synthetic rating corpus with planted author affinity.
// Authors sit on a ring and each user likes a contiguous arc of 3-4 of
// them, so author preferences correlate across users with a graded
// neighborhood structure; within an author's catalog picks follow a
// heavy-tailed popularity weight. The higher the affinity, the more a user
// both picks books by liked authors and rates them 4-5 while rating
// everything else 1-3. At affinity 0 ratings are independent of authorship;
// at affinity 1 every rating >= 4 belongs to a liked author. Review dates
// strictly increase in generation order, which interleaves users
// round-robin so a temporal split leaves most users present on both sides.
SynthCorpus synth_generate_detailed(const SynthParams& params);

std::vector<RatingEvent> synth_generate(int n_users, int n_authors,
                                        int books_per_author, double affinity,
                                        std::uint64_t seed);

}  // namespace bookrec
