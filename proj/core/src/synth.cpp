#include "bookrec/synth.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <set>

#include "bookrec/errors.hpp"

namespace bookrec {

namespace {

std::string padded(const char* prefix, int idx, int width) {
  std::string digits = std::to_string(idx);
  if (static_cast<int>(digits.size()) < width) {
    digits.insert(0, width - digits.size(), '0');
  }
  return prefix + digits;
}

int digits_for(int count) {
  int w = 1;
  for (int v = count - 1; v >= 10; v /= 10) ++w;
  return std::max(w, 2);
}

}  // namespace

SynthCorpus synth_generate_detailed(const SynthParams& params) {
  if (params.n_users < 1 || params.n_authors < 1 || params.books_per_author < 1) {
    throw InvalidParameter("synth: all counts must be >= 1");
  }
  if (params.affinity < 0.0 || params.affinity > 1.0) {
    throw InvalidParameter("synth: affinity must be in [0,1]");
  }

  const int n_books = params.n_authors * params.books_per_author;
  std::mt19937_64 rng(params.seed);

  const int user_w = digits_for(params.n_users);
  const int author_w = digits_for(params.n_authors);
  const int book_w = digits_for(params.books_per_author);

  std::vector<std::string> author_ids(params.n_authors);
  std::vector<std::string> book_ids(n_books);
  std::vector<AuthorIndex> book_author(n_books);
  for (int a = 0; a < params.n_authors; ++a) {
    author_ids[a] = padded("a", a, author_w);
    for (int j = 0; j < params.books_per_author; ++j) {
      const int b = a * params.books_per_author + j;
      book_ids[b] = author_ids[a] + "_" + padded("b", j, book_w);
      book_author[b] = a;
    }
  }

  // Planted structure: authors sit on a ring and each user likes a
  // contiguous arc of 3-4 of them, so nearby authors are co-liked by many
  // users and author similarity is graded by ring distance. Selection of the
  // next book to rate leans toward liked authors, and ratings for liked
  // authors' books lean high, both scaled by the affinity knob. Within an
  // author's catalog picks follow a heavy-tailed weight, giving the corpus a
  // realistic popularity skew.
  const double p_pick_liked = 0.25 + 0.5 * params.affinity;
  const double base_high = 0.35;
  const double p_high_liked = base_high + (1.0 - base_high) * params.affinity;
  const double p_high_other = base_high * (1.0 - params.affinity);

  std::uniform_real_distribution<double> coin(0.0, 1.0);
  std::uniform_int_distribution<int> high_rating(4, 5);
  std::uniform_int_distribution<int> low_rating(1, 3);

  std::vector<double> pick_weight(n_books);
  for (int b = 0; b < n_books; ++b) {
    pick_weight[b] = 1.0 / std::pow(1.0 + b % params.books_per_author, 1.5);
  }

  SynthCorpus out;
  out.liked_authors.resize(params.n_users);
  std::vector<std::vector<BookIndex>> liked_pool(params.n_users);
  std::vector<std::vector<BookIndex>> other_pool(params.n_users);
  std::vector<int> quota(params.n_users);

  // few ratings per user: specific book pairs stay rare across readers while
  // author pairs, pooled over a whole arc neighborhood, stay dense
  const int hi = std::min(n_books, 8);
  const int lo = std::min(hi, std::max(2, std::min(4, n_books / 4)));
  std::uniform_int_distribution<int> quota_dist(lo, hi);
  std::uniform_int_distribution<int> n_liked_dist(3, 4);

  for (int u = 0; u < params.n_users; ++u) {
    const int n_liked = std::min(params.n_authors, n_liked_dist(rng));
    const int arc_start =
        std::uniform_int_distribution<int>(0, params.n_authors - 1)(rng);
    std::set<AuthorIndex> liked;
    for (int k = 0; k < n_liked; ++k) {
      liked.insert((arc_start + k) % params.n_authors);
    }
    out.liked_authors[u].assign(liked.begin(), liked.end());
    for (int b = 0; b < n_books; ++b) {
      (liked.count(book_author[b]) ? liked_pool[u] : other_pool[u]).push_back(b);
    }
    quota[u] = quota_dist(rng);
  }

  auto draw_from = [&](std::vector<BookIndex>& pool) -> BookIndex {
    double total = 0.0;
    for (const BookIndex b : pool) total += pick_weight[b];
    double x = coin(rng) * total;
    std::size_t i = 0;
    for (; i + 1 < pool.size(); ++i) {
      x -= pick_weight[pool[i]];
      if (x <= 0.0) break;
    }
    const BookIndex b = pool[i];
    pool.erase(pool.begin() + i);
    return b;
  };

  // Round-robin over users so review dates interleave: a temporal split
  // then leaves most users with history on both sides.
  const std::int32_t day0 = parse_date("2010-01-01");
  std::int32_t day = day0;
  const int max_quota = *std::max_element(quota.begin(), quota.end());
  for (int round = 0; round < max_quota; ++round) {
    for (int u = 0; u < params.n_users; ++u) {
      if (round >= quota[u]) continue;
      if (liked_pool[u].empty() && other_pool[u].empty()) continue;

      BookIndex b;
      const bool want_liked = coin(rng) < p_pick_liked;
      if (want_liked && !liked_pool[u].empty()) {
        b = draw_from(liked_pool[u]);
      } else if (!other_pool[u].empty()) {
        b = draw_from(other_pool[u]);
      } else {
        b = draw_from(liked_pool[u]);
      }

      const bool by_liked =
          std::binary_search(out.liked_authors[u].begin(),
                             out.liked_authors[u].end(), book_author[b]);
      const double p_high = by_liked ? p_high_liked : p_high_other;
      const int rating = coin(rng) < p_high ? high_rating(rng) : low_rating(rng);

      RatingEvent e;
      e.user_id = padded("u", u, user_w);
      e.book_id = book_ids[b];
      e.author_id = author_ids[book_author[b]];
      e.rating = rating;
      e.review_date = day++;
      out.events.push_back(std::move(e));
    }
  }
  return out;
}

std::vector<RatingEvent> synth_generate(int n_users, int n_authors,
                                        int books_per_author, double affinity,
                                        std::uint64_t seed) {
  SynthParams p;
  p.n_users = n_users;
  p.n_authors = n_authors;
  p.books_per_author = books_per_author;
  p.affinity = affinity;
  p.seed = seed;
  return synth_generate_detailed(p).events;
}

}  // namespace bookrec
