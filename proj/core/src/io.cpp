#include "bookrec/io.hpp"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "bookrec/errors.hpp"

namespace bookrec {

namespace {

struct Fnv64 {
  std::uint64_t h = 14695981039346656037ull;
  void bytes(const void* data, std::size_t n) {
    const auto* p = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < n; ++i) {
      h ^= p[i];
      h *= 1099511628211ull;
    }
  }
  void str(const std::string& s) {
    bytes(s.data(), s.size());
    const char sep = '\0';
    bytes(&sep, 1);
  }
  template <typename T>
  void pod(T v) {
    bytes(&v, sizeof(v));
  }
};

}  // namespace

std::uint64_t corpus_hash(const std::vector<RatingEvent>& events) {
  Fnv64 f;
  f.pod<std::uint64_t>(events.size());
  for (const auto& e : events) {
    f.str(e.user_id);
    f.str(e.book_id);
    f.str(e.author_id);
    f.pod<std::int32_t>(e.rating);
    f.pod<std::int32_t>(e.review_date);
  }
  return f.h;
}

void write_text_atomic(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  if (target.has_parent_path()) {
    fs::create_directories(target.parent_path());
  }
  const fs::path tmp = target.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw InputError("cannot write " + tmp.string());
    out << content;
    if (!out.flush()) throw InputError("write failed for " + tmp.string());
  }
  fs::rename(tmp, target);
}

std::string format_double(double v) {
  char buf[40];
  for (int precision = 1; precision <= 17; ++precision) {
    std::snprintf(buf, sizeof(buf), "%.*g", precision, v);
    if (std::strtod(buf, nullptr) == v) break;
  }
  return buf;
}

std::string ratings_to_csv(const std::vector<RatingEvent>& events) {
  std::ostringstream out;
  out << "user_id,book_id,author_id,rating,review_date\n";
  for (const auto& e : events) {
    out << e.user_id << ',' << e.book_id << ',' << e.author_id << ','
        << e.rating << ',' << format_date(e.review_date) << '\n';
  }
  return out.str();
}

std::string recommendations_to_csv(const RecommendationList& list,
                                   const Catalog& catalog) {
  std::ostringstream out;
  out << "user_id,rank,book_id,score\n";
  const std::string& user = catalog.users.id_of(list.user);
  for (std::size_t i = 0; i < list.entries.size(); ++i) {
    out << user << ',' << (i + 1) << ','
        << catalog.books.id_of(list.entries[i].first) << ','
        << format_double(list.entries[i].second) << '\n';
  }
  return out.str();
}

std::string rank_vector_to_csv(const RankVector& rv, const Catalog& catalog) {
  std::ostringstream out;
  out << "item_id,score\n";
  const Registry& items =
      rv.kind == Kind::book ? catalog.books : catalog.authors;
  for (const auto& [item, score] : rv.scores) {
    out << items.id_of(item) << ',' << format_double(score) << '\n';
  }
  return out.str();
}

namespace {

constexpr char kMatrixMagic[8] = {'B', 'R', 'S', 'M', '0', '0', '1', '\n'};

template <typename T>
void put(std::ostream& out, T v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof(v));
}

template <typename T>
bool get(std::istream& in, T& v) {
  in.read(reinterpret_cast<char*>(&v), sizeof(v));
  return static_cast<bool>(in);
}

}  // namespace

void save_matrix(const SimilarityMatrix& m, const std::string& path) {
  std::ostringstream out(std::ios::binary);
  out.write(kMatrixMagic, sizeof(kMatrixMagic));
  put<std::int32_t>(out, static_cast<std::int32_t>(m.kind));
  put<std::int32_t>(out, static_cast<std::int32_t>(m.scheme));
  put<std::int32_t>(out, m.n_items);
  std::uint64_t count = 0;
  for (std::int32_t i = 0; i < m.n_items; ++i) {
    for (const auto& [j, s] : m.rows[i]) {
      if (j > i) ++count;
    }
  }
  put<std::uint64_t>(out, count);
  for (std::int32_t i = 0; i < m.n_items; ++i) {
    for (const auto& [j, s] : m.rows[i]) {
      if (j <= i) continue;
      put<std::int32_t>(out, i);
      put<std::int32_t>(out, j);
      put<double>(out, s);
    }
  }
  write_text_atomic(path, out.str());
}

std::optional<SimilarityMatrix> load_matrix(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::nullopt;
  char magic[8];
  in.read(magic, sizeof(magic));
  if (!in || std::memcmp(magic, kMatrixMagic, sizeof(magic)) != 0) {
    return std::nullopt;
  }
  std::int32_t kind, scheme, n_items;
  std::uint64_t count;
  if (!get(in, kind) || !get(in, scheme) || !get(in, n_items) ||
      !get(in, count)) {
    return std::nullopt;
  }
  if (n_items < 0 || kind < 0 || kind > 1 || scheme < 0 || scheme > 4) {
    return std::nullopt;
  }
  SimilarityMatrix m;
  m.kind = static_cast<Kind>(kind);
  m.scheme = static_cast<Scheme>(scheme);
  m.n_items = n_items;
  m.rows.assign(n_items, {});
  for (std::uint64_t t = 0; t < count; ++t) {
    std::int32_t i, j;
    double s;
    if (!get(in, i) || !get(in, j) || !get(in, s)) return std::nullopt;
    if (i < 0 || j < 0 || i >= n_items || j >= n_items) return std::nullopt;
    m.rows[i].emplace_back(j, s);
    m.rows[j].emplace_back(i, s);
  }
  for (auto& row : m.rows) std::sort(row.begin(), row.end());
  return m;
}

}  // namespace bookrec
