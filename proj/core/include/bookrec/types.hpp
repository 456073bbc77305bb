#pragma once

#include <cstdint>
#include <string>

namespace bookrec {

// Dense indices assigned by the catalog registries.
using UserIndex = std::int32_t;
using BookIndex = std::int32_t;
using AuthorIndex = std::int32_t;
using ItemIndex = std::int32_t;

enum class Kind { book, author };

enum class Scheme { cosine, ieuc, cooc, cooc2_cosine, cooc2_ieuc };

enum class AggFunction { rrf, cfpa };

enum class Provenance { icfb, icfa, expanded, fused };

std::string to_string(Kind k);
std::string to_string(Scheme s);
std::string to_string(AggFunction f);
std::string to_string(Provenance p);

Kind kind_from_string(const std::string& s);
Scheme scheme_from_string(const std::string& s);
AggFunction agg_from_string(const std::string& s);

// Calendar dates are stored as days since 1970-01-01 (day resolution).
std::int32_t parse_date(const std::string& iso_ymd);
std::string format_date(std::int32_t days);

// One (user, book, rating, date) observation. The corpus atom.
struct RatingEvent {
  std::string user_id;
  std::string book_id;
  std::string author_id;
  int rating = 0;                // integer in [1,5]
  std::int32_t review_date = 0;  // days since epoch

  friend bool operator==(const RatingEvent&, const RatingEvent&) = default;
};

}  // namespace bookrec
