#include "bookrec/corpus.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "bookrec/errors.hpp"
#include "json.hpp"

namespace bookrec {

Registry::Registry(std::vector<std::string> sorted_unique_ids)
    : ids_(std::move(sorted_unique_ids)) {
  index_.reserve(ids_.size());
  for (std::int32_t i = 0; i < static_cast<std::int32_t>(ids_.size()); ++i) {
    index_.emplace(ids_[i], i);
  }
}

std::optional<std::int32_t> Registry::find(const std::string& id) const {
  auto it = index_.find(id);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

namespace {

constexpr const char* kCsvHeader = "user_id,book_id,author_id,rating,review_date";

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream ss(line);
  while (std::getline(ss, field, ',')) fields.push_back(field);
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

int parse_rating(const std::string& text, long line_no) {
  if (text.empty()) throw MalformedRecord(line_no, "empty rating");
  size_t pos = 0;
  int value = 0;
  try {
    value = std::stoi(text, &pos);
  } catch (const std::exception&) {
    throw MalformedRecord(line_no, "unparseable rating '" + text + "'");
  }
  if (pos != text.size()) {
    throw MalformedRecord(line_no, "unparseable rating '" + text + "'");
  }
  if (value < 1 || value > 5) throw RatingOutOfRange(line_no, value);
  return value;
}

std::int32_t parse_date_at(const std::string& text, long line_no) {
  try {
    return parse_date(text);
  } catch (const InvalidParameter& e) {
    throw MalformedRecord(line_no, e.what());
  }
}

std::vector<RatingEvent> load_csv(std::ifstream& in, const std::string& path) {
  std::vector<RatingEvent> events;
  std::string line;
  long line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line_no == 1) {
      if (line != kCsvHeader) {
        throw MalformedRecord(1, "expected header '" + std::string(kCsvHeader) +
                                     "' in " + path);
      }
      continue;
    }
    if (line.empty()) continue;
    auto fields = split_csv_line(line);
    if (fields.size() != 5) {
      throw MalformedRecord(line_no, "expected 5 fields, got " +
                                         std::to_string(fields.size()));
    }
    RatingEvent e;
    e.user_id = fields[0];
    e.book_id = fields[1];
    e.author_id = fields[2];
    if (e.user_id.empty() || e.book_id.empty() || e.author_id.empty()) {
      throw MalformedRecord(line_no, "empty id field");
    }
    e.rating = parse_rating(fields[3], line_no);
    e.review_date = parse_date_at(fields[4], line_no);
    events.push_back(std::move(e));
  }
  return events;
}

std::vector<RatingEvent> load_jsonl(std::ifstream& in) {
  std::vector<RatingEvent> events;
  std::string line;
  long line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    nlohmann::json obj;
    try {
      obj = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      throw MalformedRecord(line_no, e.what());
    }
    if (!obj.is_object()) throw MalformedRecord(line_no, "not a JSON object");
    for (const char* key :
         {"user_id", "book_id", "author_id", "rating", "review_date"}) {
      if (!obj.contains(key)) {
        throw MalformedRecord(line_no, std::string("missing key '") + key + "'");
      }
    }
    RatingEvent e;
    try {
      e.user_id = obj.at("user_id").get<std::string>();
      e.book_id = obj.at("book_id").get<std::string>();
      e.author_id = obj.at("author_id").get<std::string>();
    } catch (const nlohmann::json::exception& ex) {
      throw MalformedRecord(line_no, ex.what());
    }
    if (e.user_id.empty() || e.book_id.empty() || e.author_id.empty()) {
      throw MalformedRecord(line_no, "empty id field");
    }
    const auto& rating = obj.at("rating");
    if (rating.is_number_integer()) {
      const auto value = rating.get<std::int64_t>();
      if (value < 1 || value > 5) {
        throw RatingOutOfRange(line_no, static_cast<int>(value));
      }
      e.rating = static_cast<int>(value);
    } else if (rating.is_string()) {
      e.rating = parse_rating(rating.get<std::string>(), line_no);
    } else {
      throw MalformedRecord(line_no, "rating is neither integer nor string");
    }
    const auto& date = obj.at("review_date");
    if (!date.is_string()) throw MalformedRecord(line_no, "review_date not a string");
    e.review_date = parse_date_at(date.get<std::string>(), line_no);
    events.push_back(std::move(e));
  }
  return events;
}

}  // namespace

std::vector<RatingEvent> load_ratings(const std::string& path,
                                      RatingsFormat format) {
  std::ifstream in(path);
  if (!in) throw MissingFile(path);
  if (format == RatingsFormat::csv) return load_csv(in, path);
  return load_jsonl(in);
}

SplitCorpus temporal_split(std::vector<RatingEvent> events, double fraction) {
  if (events.empty()) throw EmptyInput("temporal_split: no events");
  if (!(fraction > 0.0 && fraction < 1.0)) {
    throw InvalidParameter("split fraction must be in (0,1), got " +
                           std::to_string(fraction));
  }
  std::sort(events.begin(), events.end(),
            [](const RatingEvent& a, const RatingEvent& b) {
              if (a.review_date != b.review_date)
                return a.review_date < b.review_date;
              if (a.user_id != b.user_id) return a.user_id < b.user_id;
              return a.book_id < b.book_id;
            });
  const auto n = events.size();
  // ceil(fraction*n) in real arithmetic; the tiny bias guards against fp
  // noise pushing an exact product just above the integer.
  auto n_train = static_cast<std::size_t>(
      std::ceil(fraction * static_cast<double>(n) - 1e-9));
  n_train = std::clamp<std::size_t>(n_train, 1, n);

  SplitCorpus corpus;
  corpus.split_fraction = fraction;
  corpus.train.assign(events.begin(), events.begin() + n_train);
  corpus.test.assign(events.begin() + n_train, events.end());
  return corpus;
}

Catalog build_catalog(const std::vector<RatingEvent>& train) {
  if (train.empty()) throw EmptyInput("build_catalog: no training events");

  std::set<std::string> user_ids, book_ids, author_ids;
  for (const auto& e : train) {
    user_ids.insert(e.user_id);
    book_ids.insert(e.book_id);
    author_ids.insert(e.author_id);
  }
  Catalog c;
  c.users = Registry({user_ids.begin(), user_ids.end()});
  c.books = Registry({book_ids.begin(), book_ids.end()});
  c.authors = Registry({author_ids.begin(), author_ids.end()});

  c.book_author.assign(c.books.size(), -1);
  c.popularity.assign(c.books.size(), 0);
  std::set<std::pair<BookIndex, AuthorIndex>> conflicts_seen;
  for (const auto& e : train) {
    const BookIndex b = *c.books.find(e.book_id);
    const AuthorIndex a = *c.authors.find(e.author_id);
    c.popularity[b] += 1;
    if (c.book_author[b] < 0) {
      c.book_author[b] = a;
    } else if (c.book_author[b] != a && conflicts_seen.emplace(b, a).second) {
      c.warnings.push_back("book '" + e.book_id + "' also appears with author '" +
                           e.author_id + "'; keeping first-seen '" +
                           c.authors.id_of(c.book_author[b]) + "'");
    }
  }

  c.author_books.assign(c.authors.size(), {});
  for (BookIndex b = 0; b < c.books.size(); ++b) {
    c.author_books[c.book_author[b]].push_back(b);
  }
  c.max_popularity = *std::max_element(c.popularity.begin(), c.popularity.end());
  return c;
}

std::vector<DedupedRating> dedup_latest(const std::vector<RatingEvent>& train,
                                        const Catalog& catalog) {
  std::vector<DedupedRating> rows;
  rows.reserve(train.size());
  for (const auto& e : train) {
    auto u = catalog.users.find(e.user_id);
    auto b = catalog.books.find(e.book_id);
    if (!u || !b) continue;  // entity unknown to this catalog
    rows.push_back({*u, *b, e.rating, e.review_date});
  }
  std::sort(rows.begin(), rows.end(), [](const DedupedRating& x,
                                         const DedupedRating& y) {
    if (x.user != y.user) return x.user < y.user;
    if (x.book != y.book) return x.book < y.book;
    if (x.date != y.date) return x.date < y.date;
    return x.rating < y.rating;
  });
  std::vector<DedupedRating> out;
  out.reserve(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    // keep only the last row of each (user, book) run: latest date wins,
    // equal dates resolved by the higher rating
    if (i + 1 < rows.size() && rows[i].user == rows[i + 1].user &&
        rows[i].book == rows[i + 1].book) {
      continue;
    }
    out.push_back(rows[i]);
  }
  return out;
}

namespace {

UserProfile profile_from_rows(const Catalog& catalog, UserIndex user,
                              const DedupedRating* begin,
                              const DedupedRating* end,
                              int preference_threshold) {
  UserProfile p;
  p.user = user;
  std::map<AuthorIndex, std::pair<double, int>> author_sum;  // sum, count
  for (const auto* r = begin; r != end; ++r) {
    p.book_ratings[r->book] = r->rating;
    const AuthorIndex a = catalog.book_author[r->book];
    auto& [sum, count] = author_sum[a];
    sum += r->rating;
    count += 1;
    if (r->rating >= preference_threshold) {
      p.preferred_books.push_back(r->book);
      p.author_pref_count[a] += 1;
    }
  }
  for (const auto& [a, sc] : author_sum) {
    p.author_avg_rating[a] = sc.first / sc.second;
  }
  return p;
}

}  // namespace

UserProfile build_profile(const std::vector<RatingEvent>& train,
                          const Catalog& catalog, UserIndex user,
                          int preference_threshold) {
  if (user < 0 || user >= catalog.users.size()) {
    throw UnknownUser("index " + std::to_string(user));
  }
  const auto rows = dedup_latest(train, catalog);
  auto lo = std::lower_bound(rows.begin(), rows.end(), user,
                             [](const DedupedRating& r, UserIndex u) {
                               return r.user < u;
                             });
  auto hi = std::upper_bound(rows.begin(), rows.end(), user,
                             [](UserIndex u, const DedupedRating& r) {
                               return u < r.user;
                             });
  return profile_from_rows(catalog, user, rows.data() + (lo - rows.begin()),
                           rows.data() + (hi - rows.begin()),
                           preference_threshold);
}

std::vector<UserProfile> build_profiles(const std::vector<RatingEvent>& train,
                                        const Catalog& catalog,
                                        int preference_threshold) {
  const auto rows = dedup_latest(train, catalog);
  std::vector<UserProfile> profiles(catalog.users.size());
  std::size_t i = 0;
  for (UserIndex u = 0; u < catalog.users.size(); ++u) {
    std::size_t j = i;
    while (j < rows.size() && rows[j].user == u) ++j;
    profiles[u] = profile_from_rows(catalog, u, rows.data() + i,
                                    rows.data() + j, preference_threshold);
    i = j;
  }
  return profiles;
}

}  // namespace bookrec
