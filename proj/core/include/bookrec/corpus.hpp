#pragma once

#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "bookrec/types.hpp"

namespace bookrec {

// String id <-> dense index registry. Indices are assigned in lexicographic
// id order so a catalog never depends on the order events arrive in.
class Registry {
 public:
  Registry() = default;
  explicit Registry(std::vector<std::string> sorted_unique_ids);

  std::int32_t size() const { return static_cast<std::int32_t>(ids_.size()); }
  const std::string& id_of(std::int32_t index) const { return ids_.at(index); }
  std::optional<std::int32_t> find(const std::string& id) const;
  bool contains(const std::string& id) const { return find(id).has_value(); }
  const std::vector<std::string>& ids() const { return ids_; }

 private:
  std::vector<std::string> ids_;
  std::unordered_map<std::string, std::int32_t> index_;
};

struct Catalog {
  Registry users;
  Registry books;
  Registry authors;
  std::vector<AuthorIndex> book_author;            // book -> its single author
  std::vector<std::int32_t> popularity;            // book -> train rating count
  std::vector<std::vector<BookIndex>> author_books;  // author -> books, ascending
  std::int32_t max_popularity = 0;
  std::vector<std::string> warnings;  // e.g. conflicting authorship records
};

struct SplitCorpus {
  std::vector<RatingEvent> train;
  std::vector<RatingEvent> test;
  double split_fraction = 0.9;
};

struct UserProfile {
  UserIndex user = -1;
  std::vector<BookIndex> preferred_books;          // rating >= threshold, ascending
  std::map<BookIndex, int> book_ratings;           // deduplicated, latest wins
  std::map<AuthorIndex, double> author_avg_rating; // mean over the user's rated books
  std::map<AuthorIndex, int> author_pref_count;    // preferred books per author
};

enum class RatingsFormat { csv, jsonl };

// Reads a ratings file. CSV layout: header
//   user_id,book_id,author_id,rating,review_date
// with review_date in ISO-8601 YYYY-MM-DD. JSON-lines: one object per line
// with the same five keys. Bad records abort the load with a line number.
std::vector<RatingEvent> load_ratings(const std::string& path,
                                      RatingsFormat format = RatingsFormat::csv);

// Sorts events by (review_date, user_id, book_id) ascending and cuts the
// first ceil(fraction * N) into train, the rest into test.
SplitCorpus temporal_split(std::vector<RatingEvent> events, double fraction);

Catalog build_catalog(const std::vector<RatingEvent>& train);

// Duplicate (user, book) ratings collapsed to the latest by review date.
struct DedupedRating {
  UserIndex user;
  BookIndex book;
  int rating;
  std::int32_t date;
};

// One row per (user, book), sorted by (user, book). Order independent:
// among duplicates the (date, rating)-lexicographic maximum wins.
std::vector<DedupedRating> dedup_latest(const std::vector<RatingEvent>& train,
                                        const Catalog& catalog);

UserProfile build_profile(const std::vector<RatingEvent>& train,
                          const Catalog& catalog, UserIndex user,
                          int preference_threshold);

// All profiles in one pass; indexable by UserIndex.
std::vector<UserProfile> build_profiles(const std::vector<RatingEvent>& train,
                                        const Catalog& catalog,
                                        int preference_threshold);

}  // namespace bookrec
