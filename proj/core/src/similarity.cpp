#include "bookrec/similarity.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <map>
#include <ostream>
#include <tuple>
#include <unordered_map>

#include "bookrec/errors.hpp"
#include "bookrec/io.hpp"

namespace bookrec {

double SimilarityMatrix::score(std::int32_t i, std::int32_t j) const {
  if (i == j) return 0.0;
  const auto& row = rows.at(i);
  auto it = std::lower_bound(row.begin(), row.end(), j,
                             [](const std::pair<std::int32_t, double>& e,
                                std::int32_t idx) { return e.first < idx; });
  if (it == row.end() || it->first != j) return 0.0;
  return it->second;
}

namespace {

using PairKey = std::int64_t;

PairKey key_of(std::int32_t i, std::int32_t j, std::int32_t n) {
  return static_cast<PairKey>(i) * n + j;
}

// Dot products of all row pairs sharing at least one dimension, accumulated
// dimension by dimension so sums never depend on container order.
std::unordered_map<PairKey, double> pairwise_dots(
    const std::vector<SparseVec>& rows, std::int32_t n_items,
    std::int32_t n_dims) {
  std::vector<std::vector<std::pair<std::int32_t, double>>> by_dim(n_dims);
  for (std::int32_t i = 0; i < n_items; ++i) {
    for (const auto& [dim, value] : rows[i]) {
      by_dim[dim].emplace_back(i, value);
    }
  }
  std::unordered_map<PairKey, double> dots;
  for (std::int32_t dim = 0; dim < n_dims; ++dim) {
    const auto& list = by_dim[dim];
    for (std::size_t x = 0; x < list.size(); ++x) {
      for (std::size_t y = x + 1; y < list.size(); ++y) {
        dots[key_of(list[x].first, list[y].first, n_items)] +=
            list[x].second * list[y].second;
      }
    }
  }
  return dots;
}

std::vector<double> squared_norms(const std::vector<SparseVec>& rows) {
  std::vector<double> normsq(rows.size(), 0.0);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (const auto& [dim, value] : rows[i]) normsq[i] += value * value;
  }
  return normsq;
}

SimilarityMatrix from_triples(
    Kind kind, Scheme scheme, std::int32_t n_items,
    std::vector<std::tuple<std::int32_t, std::int32_t, double>> triples) {
  std::sort(triples.begin(), triples.end());
  SimilarityMatrix m;
  m.kind = kind;
  m.scheme = scheme;
  m.n_items = n_items;
  m.rows.assign(n_items, {});
  for (const auto& [i, j, s] : triples) {
    m.rows[i].emplace_back(j, s);
    m.rows[j].emplace_back(i, s);
  }
  for (auto& row : m.rows) {
    std::sort(row.begin(), row.end());
  }
  return m;
}

SimilarityMatrix pairwise_cosine(const std::vector<SparseVec>& rows,
                                 std::int32_t n_dims, Kind kind,
                                 Scheme scheme) {
  const auto n = static_cast<std::int32_t>(rows.size());
  const auto dots = pairwise_dots(rows, n, n_dims);
  const auto normsq = squared_norms(rows);
  std::vector<double> norm(normsq.size());
  for (std::size_t i = 0; i < normsq.size(); ++i) norm[i] = std::sqrt(normsq[i]);

  std::vector<std::tuple<std::int32_t, std::int32_t, double>> triples;
  triples.reserve(dots.size());
  for (const auto& [key, dot] : dots) {
    const auto i = static_cast<std::int32_t>(key / n);
    const auto j = static_cast<std::int32_t>(key % n);
    if (dot <= 0.0) continue;  // shared dims imply positive dot here
    const double s = dot / (norm[i] * norm[j]);
    triples.emplace_back(i, j, s);
  }
  return from_triples(kind, scheme, n, std::move(triples));
}

constexpr double kDistanceFloor = 1e-9;

SimilarityMatrix pairwise_ieuc(const std::vector<SparseVec>& rows,
                               std::int32_t n_dims, Kind kind, Scheme scheme) {
  const auto n = static_cast<std::int32_t>(rows.size());
  const auto dots = pairwise_dots(rows, n, n_dims);
  const auto normsq = squared_norms(rows);

  std::vector<std::tuple<std::int32_t, std::int32_t, double>> triples;
  triples.reserve(static_cast<std::size_t>(n) * (n - 1) / 2);
  for (std::int32_t i = 0; i < n; ++i) {
    for (std::int32_t j = i + 1; j < n; ++j) {
      double dot = 0.0;
      if (auto it = dots.find(key_of(i, j, n)); it != dots.end()) {
        dot = it->second;
      }
      const double dsq = std::max(normsq[i] + normsq[j] - 2.0 * dot, 0.0);
      const double dist = std::sqrt(dsq);
      triples.emplace_back(i, j, 1.0 / std::max(dist, kDistanceFloor));
    }
  }
  return from_triples(kind, scheme, n, std::move(triples));
}

}  // namespace

ItemUserMatrix build_item_user(const std::vector<RatingEvent>& train,
                               const Catalog& catalog, Kind kind) {
  const auto rows = dedup_latest(train, catalog);
  ItemUserMatrix m;
  m.kind = kind;
  m.n_users = catalog.users.size();
  m.n_items = kind == Kind::book ? catalog.books.size() : catalog.authors.size();
  m.rows.assign(m.n_items, {});

  if (kind == Kind::book) {
    for (const auto& r : rows) {
      m.rows[r.book].emplace_back(r.user, static_cast<double>(r.rating));
    }
  } else {
    // (author, user) -> mean rating over that author's books rated by the user
    std::map<std::pair<AuthorIndex, UserIndex>, std::pair<double, int>> acc;
    for (const auto& r : rows) {
      auto& [sum, count] = acc[{catalog.book_author[r.book], r.user}];
      sum += r.rating;
      count += 1;
    }
    for (const auto& [au, sc] : acc) {
      m.rows[au.first].emplace_back(au.second, sc.first / sc.second);
    }
  }
  for (auto& row : m.rows) std::sort(row.begin(), row.end());
  return m;
}

SimilarityMatrix cosine_matrix(const ItemUserMatrix& m) {
  return pairwise_cosine(m.rows, m.n_users, m.kind, Scheme::cosine);
}

SimilarityMatrix ieuc_matrix(const ItemUserMatrix& m) {
  return pairwise_ieuc(m.rows, m.n_users, m.kind, Scheme::ieuc);
}

SimilarityMatrix cooccurrence_matrix(const std::vector<RatingEvent>& train,
                                     const Catalog& catalog, Kind kind,
                                     int preference_threshold) {
  const auto rows = dedup_latest(train, catalog);
  const auto n_items =
      kind == Kind::book ? catalog.books.size() : catalog.authors.size();

  // per-user sets of preferred items
  std::vector<std::vector<ItemIndex>> preferred(catalog.users.size());
  for (const auto& r : rows) {
    if (r.rating < preference_threshold) continue;
    auto& items = preferred[r.user];
    const ItemIndex item =
        kind == Kind::book ? r.book : catalog.book_author[r.book];
    if (items.empty() || items.back() != item) items.push_back(item);
  }

  std::unordered_map<PairKey, std::int64_t> counts;
  for (auto& items : preferred) {
    std::sort(items.begin(), items.end());
    items.erase(std::unique(items.begin(), items.end()), items.end());
    for (std::size_t x = 0; x < items.size(); ++x) {
      for (std::size_t y = x + 1; y < items.size(); ++y) {
        counts[key_of(items[x], items[y], n_items)] += 1;
      }
    }
  }

  std::vector<std::tuple<std::int32_t, std::int32_t, double>> triples;
  triples.reserve(counts.size());
  for (const auto& [key, c] : counts) {
    triples.emplace_back(static_cast<std::int32_t>(key / n_items),
                         static_cast<std::int32_t>(key % n_items),
                         static_cast<double>(c));
  }
  return from_triples(kind, Scheme::cooc, n_items, std::move(triples));
}

SimilarityMatrix second_order_matrix(const SimilarityMatrix& cooc,
                                     Scheme metric) {
  if (cooc.scheme != Scheme::cooc) {
    throw SchemeMismatch("second_order_matrix expects a cooc matrix, got " +
                         to_string(cooc.scheme));
  }
  if (metric == Scheme::cosine) {
    return pairwise_cosine(cooc.rows, cooc.n_items, cooc.kind,
                           Scheme::cooc2_cosine);
  }
  if (metric == Scheme::ieuc) {
    return pairwise_ieuc(cooc.rows, cooc.n_items, cooc.kind,
                         Scheme::cooc2_ieuc);
  }
  throw InvalidParameter("second-order metric must be cosine or ieuc");
}

SimilarityMatrix build_matrix(const std::vector<RatingEvent>& train,
                              const Catalog& catalog, Kind kind, Scheme scheme,
                              int preference_threshold) {
  switch (scheme) {
    case Scheme::cosine:
      return cosine_matrix(build_item_user(train, catalog, kind));
    case Scheme::ieuc:
      return ieuc_matrix(build_item_user(train, catalog, kind));
    case Scheme::cooc:
      return cooccurrence_matrix(train, catalog, kind, preference_threshold);
    case Scheme::cooc2_cosine:
      return second_order_matrix(
          cooccurrence_matrix(train, catalog, kind, preference_threshold),
          Scheme::cosine);
    case Scheme::cooc2_ieuc:
      return second_order_matrix(
          cooccurrence_matrix(train, catalog, kind, preference_threshold),
          Scheme::ieuc);
  }
  throw InvalidParameter("unknown scheme");
}

std::uint64_t fingerprint(const SimilarityMatrix& m) {
  std::uint64_t h = 14695981039346656037ull;
  auto mix = [&h](std::uint64_t v) {
    for (int b = 0; b < 8; ++b) {
      h ^= (v >> (8 * b)) & 0xff;
      h *= 1099511628211ull;
    }
  };
  mix(static_cast<std::uint64_t>(m.kind));
  mix(static_cast<std::uint64_t>(m.scheme));
  mix(static_cast<std::uint64_t>(m.n_items));
  for (const auto& row : m.rows) {
    mix(row.size());
    for (const auto& [j, s] : row) {
      mix(static_cast<std::uint64_t>(j));
      std::uint64_t bits;
      static_assert(sizeof(bits) == sizeof(s));
      std::memcpy(&bits, &s, sizeof(bits));
      mix(bits);
    }
  }
  return h;
}

void dump_matrix_csv(const SimilarityMatrix& m, std::ostream& out) {
  out << "item_i,item_j,score\n";
  for (std::int32_t i = 0; i < m.n_items; ++i) {
    for (const auto& [j, s] : m.rows[i]) {
      if (j <= i) continue;
      out << i << ',' << j << ',' << format_double(s) << '\n';
    }
  }
}

}  // namespace bookrec
