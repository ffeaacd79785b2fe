#include "diar/intervals.hpp"

#include <algorithm>
#include <cmath>

namespace diar {

namespace {
constexpr double kEps = 1e-12;

std::vector<Interval> merge_sorted(std::vector<Interval> iv, double max_gap, bool strict_gap) {
  if (iv.empty()) return iv;
  std::sort(iv.begin(), iv.end(),
            [](const Interval& a, const Interval& b) { return a.onset < b.onset; });
  std::vector<Interval> out;
  out.push_back(iv.front());
  for (std::size_t i = 1; i < iv.size(); ++i) {
    double gap = iv[i].onset - out.back().offset;
    bool join = strict_gap ? gap < max_gap - kEps : gap <= max_gap + kEps;
    if (join) {
      out.back().offset = std::max(out.back().offset, iv[i].offset);
    } else {
      out.push_back(iv[i]);
    }
  }
  return out;
}
}  // namespace

std::vector<Interval> merge_overlapping(std::vector<Interval> intervals) {
  return merge_sorted(std::move(intervals), 0.0, /*strict_gap=*/false);
}

std::vector<Interval> merge_with_gap(std::vector<Interval> intervals, double max_gap) {
  return merge_sorted(std::move(intervals), max_gap, /*strict_gap=*/true);
}

std::vector<Interval> intersect_intervals(const std::vector<Interval>& a,
                                          const std::vector<Interval>& b) {
  std::vector<Interval> out;
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    double lo = std::max(a[i].onset, b[j].onset);
    double hi = std::min(a[i].offset, b[j].offset);
    if (hi > lo + kEps) out.push_back({lo, hi});
    if (a[i].offset < b[j].offset) {
      ++i;
    } else {
      ++j;
    }
  }
  return out;
}

std::vector<Interval> subtract_intervals(const std::vector<Interval>& a,
                                         const std::vector<Interval>& b) {
  std::vector<Interval> out;
  std::size_t j = 0;
  for (const Interval& cur : a) {
    double pos = cur.onset;
    while (j < b.size() && b[j].offset <= cur.onset) ++j;
    std::size_t k = j;
    while (k < b.size() && b[k].onset < cur.offset) {
      if (b[k].onset > pos + kEps) out.push_back({pos, std::min(b[k].onset, cur.offset)});
      pos = std::max(pos, b[k].offset);
      if (pos >= cur.offset) break;
      ++k;
    }
    if (pos < cur.offset - kEps) out.push_back({pos, cur.offset});
  }
  return out;
}

double total_length(const std::vector<Interval>& intervals) {
  double sum = 0.0;
  for (const Interval& iv : intervals) sum += iv.length();
  return sum;
}

std::pair<std::size_t, std::size_t> frame_index_range(double onset, double offset,
                                                      double frame_rate) {
  // Frame f is inside iff (f + 0.5) / fps >= onset and < offset.
  auto first_at_or_after = [&](double t) {
    double x = t * frame_rate - 0.5;
    auto f = static_cast<long long>(std::ceil(x - 1e-9));
    return f < 0 ? std::size_t{0} : static_cast<std::size_t>(f);
  };
  std::size_t first = first_at_or_after(onset);
  std::size_t last = std::max(first, first_at_or_after(offset));
  return {first, last};
}

std::vector<Interval> frames_to_intervals(const std::vector<unsigned char>& active,
                                          double frame_rate) {
  std::vector<Interval> out;
  std::size_t i = 0;
  while (i < active.size()) {
    if (!active[i]) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < active.size() && active[j]) ++j;
    out.push_back({static_cast<double>(i) / frame_rate, static_cast<double>(j) / frame_rate});
    i = j;
  }
  return out;
}

}  // namespace diar
