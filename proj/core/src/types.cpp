#include "bookrec/types.hpp"

#include <array>
#include <cstdio>

#include "bookrec/errors.hpp"

namespace bookrec {

std::string to_string(Kind k) {
  return k == Kind::book ? "book" : "author";
}

std::string to_string(Scheme s) {
  switch (s) {
    case Scheme::cosine: return "cosine";
    case Scheme::ieuc: return "ieuc";
    case Scheme::cooc: return "cooc";
    case Scheme::cooc2_cosine: return "cooc2-cosine";
    case Scheme::cooc2_ieuc: return "cooc2-ieuc";
  }
  return "?";
}

std::string to_string(AggFunction f) {
  return f == AggFunction::rrf ? "rrf" : "cfpa";
}

std::string to_string(Provenance p) {
  switch (p) {
    case Provenance::icfb: return "icfb";
    case Provenance::icfa: return "icfa";
    case Provenance::expanded: return "expanded";
    case Provenance::fused: return "fused";
  }
  return "?";
}

Kind kind_from_string(const std::string& s) {
  if (s == "book") return Kind::book;
  if (s == "author") return Kind::author;
  throw InvalidParameter("unknown kind '" + s + "'");
}

Scheme scheme_from_string(const std::string& s) {
  if (s == "cosine") return Scheme::cosine;
  if (s == "ieuc") return Scheme::ieuc;
  if (s == "cooc") return Scheme::cooc;
  if (s == "cooc2-cosine") return Scheme::cooc2_cosine;
  if (s == "cooc2-ieuc") return Scheme::cooc2_ieuc;
  throw InvalidParameter("unknown scheme '" + s + "'");
}

AggFunction agg_from_string(const std::string& s) {
  if (s == "rrf") return AggFunction::rrf;
  if (s == "cfpa") return AggFunction::cfpa;
  throw InvalidParameter("unknown aggregation '" + s + "'");
}

namespace {

bool is_leap(int y) {
  return (y % 4 == 0 && y % 100 != 0) || y % 400 == 0;
}

int days_in_month(int y, int m) {
  static constexpr std::array<int, 12> lengths = {31, 28, 31, 30, 31, 30,
                                                  31, 31, 30, 31, 30, 31};
  if (m == 2 && is_leap(y)) return 29;
  return lengths[m - 1];
}

// Days since 1970-01-01 for a civil date (proleptic Gregorian).
std::int64_t days_from_civil(std::int64_t y, int m, int d) {
  y -= m <= 2;
  const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
  const unsigned yoe = static_cast<unsigned>(y - era * 400);
  const unsigned doy = (153u * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
  const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
  return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

void civil_from_days(std::int64_t z, int& y, int& m, int& d) {
  z += 719468;
  const std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
  const unsigned doe = static_cast<unsigned>(z - era * 146097);
  const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
  const std::int64_t yr = static_cast<std::int64_t>(yoe) + era * 400;
  const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
  const unsigned mp = (5 * doy + 2) / 153;
  d = static_cast<int>(doy - (153 * mp + 2) / 5 + 1);
  m = static_cast<int>(mp + (mp < 10 ? 3 : -9));
  y = static_cast<int>(yr + (m <= 2));
}

}  // namespace

std::int32_t parse_date(const std::string& iso_ymd) {
  auto fail = [&] {
    throw InvalidParameter("bad date '" + iso_ymd + "', expected YYYY-MM-DD");
  };
  if (iso_ymd.size() != 10 || iso_ymd[4] != '-' || iso_ymd[7] != '-') fail();
  for (int i : {0, 1, 2, 3, 5, 6, 8, 9}) {
    if (iso_ymd[i] < '0' || iso_ymd[i] > '9') fail();
  }
  const int y = std::stoi(iso_ymd.substr(0, 4));
  const int m = std::stoi(iso_ymd.substr(5, 2));
  const int d = std::stoi(iso_ymd.substr(8, 2));
  if (m < 1 || m > 12 || d < 1 || d > days_in_month(y, m)) fail();
  return static_cast<std::int32_t>(days_from_civil(y, m, d));
}

std::string format_date(std::int32_t days) {
  int y, m, d;
  civil_from_days(days, y, m, d);
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%04d-%02d-%02d", y, m, d);
  return buf;
}

}  // namespace bookrec
