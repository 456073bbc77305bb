#include "bookrec/hybrid.hpp"

#include <algorithm>
#include <limits>

#include "bookrec/errors.hpp"

namespace bookrec {

RankVector expand_authors(const RankVector& author_rv, const Catalog& catalog,
                          int limit) {
  if (author_rv.kind != Kind::author) {
    throw KindMismatch("expand_authors needs an author rank vector");
  }
  if (limit < 1) throw InvalidLimit(limit);

  RankVector out;
  out.kind = Kind::book;
  out.provenance = Provenance::expanded;
  const double max_pop = static_cast<double>(catalog.max_popularity);
  for (const auto& [author, score] : author_rv.scores) {
    if (score <= 0.0) continue;
    if (author < 0 || author >= catalog.authors.size()) {
      throw UnknownItem("author index " + std::to_string(author));
    }
    auto books = catalog.author_books[author];
    std::sort(books.begin(), books.end(), [&](BookIndex a, BookIndex b) {
      if (catalog.popularity[a] != catalog.popularity[b]) {
        return catalog.popularity[a] > catalog.popularity[b];
      }
      return a < b;
    });
    const auto keep = std::min<std::size_t>(books.size(), limit);
    for (std::size_t i = 0; i < keep; ++i) {
      const BookIndex b = books[i];
      const double s = score * (catalog.popularity[b] / max_pop);
      if (s > 0.0) out.scores[b] = s;  // one author per book: no collisions
    }
  }
  return out;
}

RankVector normalize_rv(const RankVector& rv) {
  RankVector out;
  out.kind = rv.kind;
  out.provenance = rv.provenance;
  if (rv.scores.empty()) return out;

  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  for (const auto& [item, s] : rv.scores) {
    lo = std::min(lo, s);
    hi = std::max(hi, s);
  }
  const double range = hi - lo;
  for (const auto& [item, s] : rv.scores) {
    const double v = range > 0.0 ? (s - lo) / range : 1.0;
    if (v > 0.0) out.scores[item] = v;
  }
  return out;
}

RankVector wam_fuse(const RankVector& author_books, const RankVector& icf_books,
                    double alpha) {
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw AlphaOutOfRange(alpha);
  if (author_books.kind != Kind::book || icf_books.kind != Kind::book) {
    throw KindMismatch("wam_fuse needs two book rank vectors");
  }
  RankVector out;
  out.kind = Kind::book;
  out.provenance = Provenance::fused;
  auto add = [&](const RankVector& rv, double weight) {
    for (const auto& [item, s] : rv.scores) {
      const double v = weight * s / 2.0;
      if (v > 0.0) out.scores[item] += v;
    }
  };
  add(author_books, alpha);
  add(icf_books, 1.0 - alpha);
  return out;
}

RecommendationList top_n(const RankVector& fused, const UserProfile& profile,
                         const FusionSpec& spec) {
  if (fused.kind != Kind::book) {
    throw KindMismatch("top_n needs a book rank vector");
  }
  if (spec.top_n < 1) throw InvalidParameter("top_n must be >= 1");

  std::vector<std::pair<BookIndex, double>> candidates;
  for (const auto& [book, score] : fused.scores) {
    if (score <= 0.0) continue;
    if (profile.book_ratings.count(book)) continue;  // rated in train
    candidates.emplace_back(book, score);
  }
  std::sort(candidates.begin(), candidates.end(),
            [](const auto& a, const auto& b) {
              if (a.second != b.second) return a.second > b.second;
              return a.first < b.first;
            });
  if (candidates.size() > static_cast<std::size_t>(spec.top_n)) {
    candidates.resize(spec.top_n);
  }
  RecommendationList list;
  list.user = profile.user;
  list.entries = std::move(candidates);
  return list;
}

}  // namespace bookrec
