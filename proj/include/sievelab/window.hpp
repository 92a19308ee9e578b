// window.hpp
//
// Finite observation windows over Z^k: an interval [a..b] or a box
// prod_j [a_j..b_j], with row-major flattening (last component contiguous).
// The named families used for densities are interval(1..N), interval(0..N),
// the symmetric box [-N..N]^k and its translates.

#pragma once

#include <string>
#include <vector>

#include "sievelab/core.hpp"

namespace sievelab {

struct Window {
  std::vector<std::pair<i64, i64>> ranges;  // inclusive

  static Window interval(i64 lo, i64 hi) {
    Window w;
    w.ranges = {{lo, hi}};
    w.validate();
    return w;
  }

  static Window box(std::vector<std::pair<i64, i64>> r) {
    Window w;
    w.ranges = std::move(r);
    w.validate();
    return w;
  }

  static Window symmetric_box(int k, i64 N) {
    Window w;
    w.ranges.assign(size_t(k), {-N, N});
    w.validate();
    return w;
  }

  void validate() const {
    if (ranges.empty()) throw Error(Errc::BadInput, "empty window");
    for (auto& [lo, hi] : ranges)
      if (lo > hi) throw Error(Errc::BadInput, "window range is empty");
  }

  int arity() const { return int(ranges.size()); }

  i64 extent(int j) const {
    return checked_add(ranges[size_t(j)].second - ranges[size_t(j)].first, 1);
  }

  i64 size() const {
    i64 s = 1;
    for (int j = 0; j < arity(); ++j) s = checked_mul(s, extent(j));
    return s;
  }

  bool contains(const Point& p) const {
    for (int j = 0; j < arity(); ++j)
      if (p.x[size_t(j)] < ranges[size_t(j)].first ||
          p.x[size_t(j)] > ranges[size_t(j)].second)
        return false;
    return true;
  }

  i64 index_of(const Point& p) const {
    i64 idx = 0;
    for (int j = 0; j < arity(); ++j)
      idx = idx * extent(j) + (p.x[size_t(j)] - ranges[size_t(j)].first);
    return idx;
  }

  Point point_at(i64 idx) const {
    std::vector<i64> x(size_t(arity()), 0);
    for (int j = arity() - 1; j >= 0; --j) {
      i64 e = extent(j);
      x[size_t(j)] = ranges[size_t(j)].first + idx % e;
      idx /= e;
    }
    return Point(std::move(x));
  }

  // Window enlarged so that w + delta stays inside for every delta in hull.
  Window padded(const std::vector<Point>& hull) const {
    Window w = *this;
    for (const auto& p : hull)
      for (int j = 0; j < arity(); ++j) {
        w.ranges[size_t(j)].first =
            std::min(w.ranges[size_t(j)].first,
                     checked_add(ranges[size_t(j)].first, p.x[size_t(j)]));
        w.ranges[size_t(j)].second =
            std::max(w.ranges[size_t(j)].second,
                     checked_add(ranges[size_t(j)].second, p.x[size_t(j)]));
      }
    return w;
  }

  std::string to_string() const {
    std::string s;
    for (int j = 0; j < arity(); ++j) {
      if (j) s += ",";
      s += std::to_string(ranges[size_t(j)].first) + ".." +
           std::to_string(ranges[size_t(j)].second);
    }
    return s;
  }

  // "a..b" or "a..b,c..d"
  static Window parse(const std::string& text) {
    Window w;
    size_t pos = 0;
    while (pos <= text.size()) {
      size_t comma = text.find(',', pos);
      std::string part = text.substr(pos, comma == std::string::npos
                                              ? std::string::npos
                                              : comma - pos);
      size_t dots = part.find("..");
      if (dots == std::string::npos)
        throw Error(Errc::BadInput, "window range must look like a..b");
      try {
        w.ranges.emplace_back(std::stoll(part.substr(0, dots)),
                              std::stoll(part.substr(dots + 2)));
      } catch (const Error&) {
        throw;
      } catch (...) {
        throw Error(Errc::BadInput, "bad window bound in '" + part + "'");
      }
      if (comma == std::string::npos) break;
      pos = comma + 1;
    }
    w.validate();
    return w;
  }
};

}  // namespace sievelab
