#include <random>
#include <set>
#include <sstream>

#include "bookrec/corpus.hpp"
#include "bookrec/errors.hpp"
#include "bookrec/similarity.hpp"
#include "corpora.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace bookrec;

namespace {

RatingEvent ev(const std::string& u, const std::string& b, const std::string& a,
               int rating, int day) {
  return {u, b, a, rating, day};
}

ItemUserMatrix make_matrix(Kind kind, std::vector<SparseVec> rows, int n_users) {
  ItemUserMatrix m;
  m.kind = kind;
  m.n_items = static_cast<std::int32_t>(rows.size());
  m.n_users = n_users;
  m.rows = std::move(rows);
  return m;
}

std::vector<std::vector<double>> dense_rows(const ItemUserMatrix& m) {
  std::vector<std::vector<double>> rows(m.n_items,
                                        std::vector<double>(m.n_users, 0.0));
  for (std::int32_t i = 0; i < m.n_items; ++i) {
    for (const auto& [u, v] : m.rows[i]) rows[i][u] = v;
  }
  return rows;
}

bool matrices_equal(const SimilarityMatrix& a, const SimilarityMatrix& b) {
  return a.kind == b.kind && a.scheme == b.scheme && a.n_items == b.n_items &&
         a.rows == b.rows;
}

}  // namespace

TEST_SUITE("similarity") {

TEST_CASE("build_item_user places book ratings and author means") {
  const std::vector<RatingEvent> train{
      ev("u1", "b1", "a1", 5, 10),
      ev("u1", "b2", "a1", 4, 11),
      ev("u1", "b3", "a1", 2, 12),
      ev("u2", "b1", "a1", 3, 13),
  };
  const auto catalog = build_catalog(train);
  const auto books = build_item_user(train, catalog, Kind::book);
  const auto u1 = *catalog.users.find("u1");
  const auto u2 = *catalog.users.find("u2");
  const auto b1 = *catalog.books.find("b1");
  REQUIRE(books.rows[b1].size() == 2);
  CHECK(books.rows[b1][u1 < u2 ? 0 : 1].second == 5.0);

  const auto authors = build_item_user(train, catalog, Kind::author);
  REQUIRE(authors.n_items == 1);
  // u1 rated 5, 4 and 2 for a1's books: mean 11/3
  bool found = false;
  for (const auto& [u, v] : authors.rows[0]) {
    if (u == u1) {
      CHECK(v == doctest::Approx(11.0 / 3.0).epsilon(1e-12));
      found = true;
    }
  }
  CHECK(found);
}

TEST_CASE("author row carries the per user mean of 4 and 2") {
  const std::vector<RatingEvent> train{
      ev("u1", "b1", "a1", 4, 10),
      ev("u1", "b2", "a1", 2, 11),
  };
  const auto catalog = build_catalog(train);
  const auto authors = build_item_user(train, catalog, Kind::author);
  REQUIRE(authors.rows[0].size() == 1);
  CHECK(authors.rows[0][0].second == doctest::Approx(3.0));
}

TEST_CASE("cosine_matrix hand cases") {
  // items over 2 users: identical, disjoint, and the 0.8 pair
  const auto m = make_matrix(Kind::book,
                             {
                                 {{0, 5.0}},          // v0 = (5,0)
                                 {{0, 4.0}, {1, 3.0}},  // v1 = (4,3)
                                 {{1, 2.0}},          // v2 = (0,2)
                                 {{0, 5.0}},          // v3 = (5,0), same as v0
                             },
                             2);
  const auto sim = cosine_matrix(m);
  CHECK(sim.score(0, 1) == doctest::Approx(0.8).epsilon(1e-12));
  CHECK(sim.score(0, 2) == 0.0);  // disjoint support
  CHECK(sim.score(0, 3) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(sim.score(0, 0) == 0.0);  // diagonal excluded
  CHECK(sim.scheme == Scheme::cosine);
}

TEST_CASE("cosine of a zero vector is zero") {
  const auto m = make_matrix(Kind::book, {{}, {{0, 3.0}}}, 1);
  const auto sim = cosine_matrix(m);
  CHECK(sim.score(0, 1) == 0.0);
}

TEST_CASE("ieuc_matrix hand cases") {
  const auto m = make_matrix(Kind::book,
                             {
                                 {},                    // v0 = (0,0)
                                 {{0, 3.0}, {1, 4.0}},  // v1 = (3,4)
                                 {{0, 3.0}, {1, 4.0}},  // v2 = v1
                                 {{0, 4.0}, {1, 4.0}},  // v3: dist(v1,v3) = 1
                             },
                             2);
  const auto sim = ieuc_matrix(m);
  CHECK(sim.score(0, 1) == doctest::Approx(0.2).epsilon(1e-12));
  CHECK(sim.score(1, 2) == doctest::Approx(1e9).epsilon(1e-12));  // floored
  CHECK(sim.score(1, 3) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("cooccurrence hand case for books") {
  // u1 prefers {b1,b2}; u2 prefers {b1,b2,b3}
  const std::vector<RatingEvent> train{
      ev("u1", "b1", "a1", 5, 1), ev("u1", "b2", "a1", 4, 2),
      ev("u2", "b1", "a1", 4, 3), ev("u2", "b2", "a1", 5, 4),
      ev("u2", "b3", "a1", 4, 5),
  };
  const auto catalog = build_catalog(train);
  const auto sim = cooccurrence_matrix(train, catalog, Kind::book, 4);
  const auto b1 = *catalog.books.find("b1");
  const auto b2 = *catalog.books.find("b2");
  const auto b3 = *catalog.books.find("b3");
  CHECK(sim.score(b1, b2) == 2.0);
  CHECK(sim.score(b1, b3) == 1.0);
  CHECK(sim.score(b2, b3) == 1.0);
  CHECK(sim.score(b2, b1) == 2.0);  // symmetric
}

TEST_CASE("single preferring user produces no pairs") {
  const std::vector<RatingEvent> train{ev("u1", "b1", "a1", 5, 1),
                                       ev("u2", "b2", "a1", 2, 2)};
  const auto catalog = build_catalog(train);
  const auto sim = cooccurrence_matrix(train, catalog, Kind::book, 4);
  for (const auto& row : sim.rows) CHECK(row.empty());
}

TEST_CASE("author cooccurrence counts users preferring both authors") {
  const std::vector<RatingEvent> train{
      ev("u1", "b1", "a1", 5, 1), ev("u1", "b2", "a2", 4, 2),
      ev("u2", "b3", "a1", 4, 3), ev("u2", "b4", "a2", 5, 4),
  };
  const auto catalog = build_catalog(train);
  const auto sim = cooccurrence_matrix(train, catalog, Kind::author, 4);
  CHECK(sim.score(*catalog.authors.find("a1"), *catalog.authors.find("a2")) ==
        2.0);
}

TEST_CASE("duplicate ratings by one user count once in cooccurrence") {
  const std::vector<RatingEvent> train{
      ev("u1", "b1", "a1", 5, 1), ev("u1", "b1", "a1", 4, 9),
      ev("u1", "b2", "a1", 5, 2),
  };
  const auto catalog = build_catalog(train);
  const auto sim = cooccurrence_matrix(train, catalog, Kind::book, 4);
  CHECK(sim.score(*catalog.books.find("b1"), *catalog.books.find("b2")) == 1.0);
}

TEST_CASE("a later low re-rating removes the book from the preferred set") {
  const std::vector<RatingEvent> train{
      ev("u1", "b1", "a1", 5, 1), ev("u1", "b1", "a1", 2, 9),
      ev("u1", "b2", "a1", 5, 2),
  };
  const auto catalog = build_catalog(train);
  const auto sim = cooccurrence_matrix(train, catalog, Kind::book, 4);
  CHECK(sim.score(*catalog.books.find("b1"), *catalog.books.find("b2")) == 0.0);
}

TEST_CASE("second_order_matrix matches the dense oracle on a toy matrix") {
  // 3 preferred-pair users over 4 books give an interesting cooc structure
  const std::vector<RatingEvent> train{
      ev("u1", "b1", "a1", 5, 1), ev("u1", "b2", "a2", 5, 2),
      ev("u2", "b1", "a1", 5, 3), ev("u2", "b3", "a3", 4, 4),
      ev("u3", "b2", "a2", 4, 5), ev("u3", "b3", "a3", 5, 6),
      ev("u4", "b4", "a4", 4, 7), ev("u4", "b1", "a1", 4, 8),
  };
  const auto catalog = build_catalog(train);
  const auto cooc = cooccurrence_matrix(train, catalog, Kind::book, 4);

  for (const Scheme metric : {Scheme::cosine, Scheme::ieuc}) {
    const auto second = second_order_matrix(cooc, metric);
    // dense rows of the cooc matrix
    const int n = cooc.n_items;
    std::vector<std::vector<double>> rows(n, std::vector<double>(n, 0.0));
    for (int i = 0; i < n; ++i) {
      for (const auto& [j, s] : cooc.rows[i]) rows[i][j] = s;
    }
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        const double expected =
            i == j ? 0.0
                   : (metric == Scheme::cosine ? oracle::cosine(rows[i], rows[j])
                                               : oracle::ieuc(rows[i], rows[j]));
        CHECK(second.score(i, j) == doctest::Approx(expected).epsilon(1e-9));
      }
    }
  }
  CHECK_THROWS_AS(second_order_matrix(second_order_matrix(cooc, Scheme::cosine),
                                      Scheme::cosine),
                  SchemeMismatch);
}

TEST_CASE("identical cooc rows score cosine 1 and zero rows score 0") {
  SimilarityMatrix cooc;
  cooc.kind = Kind::book;
  cooc.scheme = Scheme::cooc;
  cooc.n_items = 4;
  cooc.rows.assign(4, {});
  // items 0 and 1 share the row {2: 3.0}; item 3 has an all-zero row
  cooc.rows[0] = {{2, 3.0}};
  cooc.rows[1] = {{2, 3.0}};
  cooc.rows[2] = {{0, 3.0}, {1, 3.0}};
  const auto second = second_order_matrix(cooc, Scheme::cosine);
  CHECK(second.score(0, 1) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(second.score(3, 0) == 0.0);
  CHECK(second.score(3, 2) == 0.0);
}

TEST_CASE("cooccurrence equals pairwise enumeration on random corpora") {
  std::mt19937_64 rng(57);
  for (int iter = 0; iter < 25; ++iter) {
    const auto tiny = corpora::random_tiny(rng, 5, 10);
    const auto events = corpora::train_events(tiny);
    const auto catalog = build_catalog(events);

    for (const Kind kind : {Kind::book, Kind::author}) {
      const auto sim = cooccurrence_matrix(events, catalog, kind, 4);
      std::vector<std::set<int>> preferred(tiny.n_users);
      for (int u = 0; u < tiny.n_users; ++u) {
        for (int b = 0; b < tiny.n_books; ++b) {
          if (tiny.rating[u][b] >= 4) {
            preferred[u].insert(kind == Kind::book ? b : tiny.book_author[b]);
          }
        }
      }
      const int n = kind == Kind::book ? tiny.n_books : tiny.n_authors;
      const auto expected = oracle::cooc(preferred, n);
      for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
          CHECK(sim.score(i, j) == static_cast<double>(i == j ? 0 : expected[i][j]));
        }
      }
    }
  }
}

TEST_CASE("geometric matrices match the dense oracle on random corpora") {
  std::mt19937_64 rng(77);
  for (int iter = 0; iter < 10; ++iter) {
    const auto tiny = corpora::random_tiny(rng, 5, 8);
    const auto events = corpora::train_events(tiny);
    const auto catalog = build_catalog(events);
    for (const Kind kind : {Kind::book, Kind::author}) {
      const auto m = build_item_user(events, catalog, kind);
      const auto rows = dense_rows(m);
      const auto cos = cosine_matrix(m);
      const auto inv = ieuc_matrix(m);
      for (int i = 0; i < m.n_items; ++i) {
        for (int j = 0; j < m.n_items; ++j) {
          if (i == j) continue;
          CHECK(cos.score(i, j) ==
                doctest::Approx(oracle::cosine(rows[i], rows[j])).epsilon(1e-9));
          CHECK(inv.score(i, j) ==
                doctest::Approx(oracle::ieuc(rows[i], rows[j])).epsilon(1e-9));
        }
      }
    }
  }
}

TEST_CASE("all schemes produce exactly symmetric non-negative matrices") {
  std::mt19937_64 rng(91);
  for (int iter = 0; iter < 8; ++iter) {
    const auto tiny = corpora::random_tiny(rng);
    const auto events = corpora::train_events(tiny);
    const auto catalog = build_catalog(events);
    for (const Scheme scheme :
         {Scheme::cosine, Scheme::ieuc, Scheme::cooc, Scheme::cooc2_cosine,
          Scheme::cooc2_ieuc}) {
      for (const Kind kind : {Kind::book, Kind::author}) {
        const auto sim = build_matrix(events, catalog, kind, scheme, 4);
        for (std::int32_t i = 0; i < sim.n_items; ++i) {
          for (const auto& [j, s] : sim.rows[i]) {
            CHECK(s > 0.0);
            CHECK(sim.score(j, i) == s);
            if (scheme == Scheme::cosine) CHECK(s <= 1.0 + 1e-12);
            if (scheme == Scheme::cooc) CHECK(s == static_cast<std::int64_t>(s));
          }
        }
      }
    }
  }
}

TEST_CASE("event order never changes a matrix") {
  std::mt19937_64 rng(113);
  for (int iter = 0; iter < 5; ++iter) {
    const auto tiny = corpora::random_tiny(rng);
    auto events = corpora::train_events(tiny);
    auto shuffled = events;
    corpora::shuffle(shuffled, rng);
    const auto cat1 = build_catalog(events);
    const auto cat2 = build_catalog(shuffled);
    CHECK(cat1.users.ids() == cat2.users.ids());
    for (const Scheme scheme :
         {Scheme::cosine, Scheme::ieuc, Scheme::cooc, Scheme::cooc2_cosine,
          Scheme::cooc2_ieuc}) {
      for (const Kind kind : {Kind::book, Kind::author}) {
        const auto a = build_matrix(events, cat1, kind, scheme, 4);
        const auto b = build_matrix(shuffled, cat2, kind, scheme, 4);
        CHECK(matrices_equal(a, b));
        CHECK(fingerprint(a) == fingerprint(b));
      }
    }
  }
}

TEST_CASE("fingerprint distinguishes different matrices") {
  const std::vector<RatingEvent> train{
      ev("u1", "b1", "a1", 5, 1), ev("u1", "b2", "a1", 4, 2),
      ev("u2", "b1", "a1", 4, 3), ev("u2", "b2", "a1", 5, 4),
  };
  const auto catalog = build_catalog(train);
  const auto a = cooccurrence_matrix(train, catalog, Kind::book, 4);
  auto b = a;
  b.rows[0][0].second += 1.0;
  CHECK(fingerprint(a) != fingerprint(b));
}

TEST_CASE("matrix dump lists upper triangle pairs") {
  const std::vector<RatingEvent> train{
      ev("u1", "b1", "a1", 5, 1), ev("u1", "b2", "a1", 4, 2),
      ev("u2", "b1", "a1", 4, 3), ev("u2", "b2", "a1", 5, 4),
  };
  const auto catalog = build_catalog(train);
  const auto sim = cooccurrence_matrix(train, catalog, Kind::book, 4);
  std::ostringstream out;
  dump_matrix_csv(sim, out);
  CHECK(out.str() == "item_i,item_j,score\n0,1,2\n");
}

}  // TEST_SUITE
