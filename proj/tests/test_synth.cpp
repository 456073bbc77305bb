#include <algorithm>
#include <set>

#include "bookrec/corpus.hpp"
#include "bookrec/errors.hpp"
#include "bookrec/io.hpp"
#include "bookrec/synth.hpp"
#include "doctest.h"

using namespace bookrec;

TEST_SUITE("synth") {

TEST_CASE("same seed yields byte identical output") {
  const auto a = synth_generate(20, 5, 3, 0.6, 42);
  const auto b = synth_generate(20, 5, 3, 0.6, 42);
  CHECK(a == b);
  CHECK(ratings_to_csv(a) == ratings_to_csv(b));
  const auto c = synth_generate(20, 5, 3, 0.6, 43);
  CHECK(a != c);
}

TEST_CASE("parameters are validated") {
  CHECK_THROWS_AS(synth_generate(0, 5, 3, 0.5, 1), InvalidParameter);
  CHECK_THROWS_AS(synth_generate(5, 0, 3, 0.5, 1), InvalidParameter);
  CHECK_THROWS_AS(synth_generate(5, 5, 0, 0.5, 1), InvalidParameter);
  CHECK_THROWS_AS(synth_generate(5, 5, 3, -0.1, 1), InvalidParameter);
  CHECK_THROWS_AS(synth_generate(5, 5, 3, 1.5, 1), InvalidParameter);
}

TEST_CASE("review dates strictly increase in generation order") {
  const auto events = synth_generate(30, 6, 4, 0.7, 9);
  REQUIRE(events.size() > 1);
  for (std::size_t i = 1; i < events.size(); ++i) {
    CHECK(events[i].review_date > events[i - 1].review_date);
  }
}

TEST_CASE("ratings stay in range and ids are consistent") {
  SynthParams p;
  p.n_users = 25;
  p.n_authors = 6;
  p.books_per_author = 3;
  p.affinity = 0.5;
  p.seed = 5;
  const auto corpus = synth_generate_detailed(p);
  std::set<std::string> users, books, authors;
  for (const auto& e : corpus.events) {
    CHECK(e.rating >= 1);
    CHECK(e.rating <= 5);
    CHECK(e.book_id.substr(0, e.author_id.size()) == e.author_id);
    users.insert(e.user_id);
    books.insert(e.book_id);
    authors.insert(e.author_id);
  }
  CHECK(users.size() == 25);
  CHECK(books.size() <= 18);
  CHECK(authors.size() <= 6);
  CHECK(corpus.liked_authors.size() == 25);
}

TEST_CASE("affinity 1 confines high ratings to liked authors") {
  SynthParams p;
  p.n_users = 40;
  p.n_authors = 8;
  p.books_per_author = 4;
  p.affinity = 1.0;
  p.seed = 77;
  const auto corpus = synth_generate_detailed(p);
  int highs = 0;
  for (const auto& e : corpus.events) {
    const int u = std::stoi(e.user_id.substr(1));
    const int a = std::stoi(e.author_id.substr(1));
    const auto& liked = corpus.liked_authors[u];
    const bool is_liked = std::binary_search(liked.begin(), liked.end(), a);
    if (e.rating >= 4) {
      ++highs;
      CHECK(is_liked);
    } else {
      CHECK(!is_liked);
    }
  }
  CHECK(highs > 0);
}

TEST_CASE("affinity 0 leaves ratings independent of authorship") {
  SynthParams p;
  p.n_users = 120;
  p.n_authors = 12;
  p.books_per_author = 4;
  p.affinity = 0.0;
  p.seed = 101;
  const auto corpus = synth_generate_detailed(p);

  // 2x2 contingency: liked authorship x high rating
  double n[2][2] = {{0, 0}, {0, 0}};
  for (const auto& e : corpus.events) {
    const int u = std::stoi(e.user_id.substr(1));
    const int a = std::stoi(e.author_id.substr(1));
    const auto& liked = corpus.liked_authors[u];
    const int row = std::binary_search(liked.begin(), liked.end(), a) ? 1 : 0;
    const int col = e.rating >= 4 ? 1 : 0;
    n[row][col] += 1;
  }
  const double total = n[0][0] + n[0][1] + n[1][0] + n[1][1];
  REQUIRE(total > 500);
  double chi2 = 0.0;
  for (int r = 0; r < 2; ++r) {
    for (int c = 0; c < 2; ++c) {
      const double expected =
          (n[r][0] + n[r][1]) * (n[0][c] + n[1][c]) / total;
      chi2 += (n[r][c] - expected) * (n[r][c] - expected) / expected;
    }
  }
  // df=1 critical value at p=0.01
  CHECK(chi2 < 6.635);
}

}  // TEST_SUITE
