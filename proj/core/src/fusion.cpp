#include "diar/fusion.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <set>

#include "diar/assignment.hpp"
#include "diar/errors.hpp"
#include "diar/intervals.hpp"

namespace diar {

FusionWeights FusionWeights::custom(std::vector<double> weights) {
  FusionWeights w;
  w.mode = Mode::kCustom;
  w.custom_weights = std::move(weights);
  return w;
}

FusionWeights FusionWeights::rank_based(double exponent) {
  FusionWeights w;
  w.mode = Mode::kRankBased;
  w.rank_exponent = exponent;
  return w;
}

std::vector<double> compute_rank_weights(std::size_t k, double exponent) {
  if (k == 0) throw ValidationError("compute_rank_weights: k must be >= 1");
  std::vector<double> weights(k);
  double sum = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    weights[i] = 1.0 / std::pow(static_cast<double>(i + 1), exponent);
    sum += weights[i];
  }
  for (double& w : weights) w /= sum;
  return weights;
}

std::vector<Timeline> map_labels(const std::vector<Timeline>& hypotheses) {
  if (hypotheses.empty()) throw ValidationError("map_labels: no hypotheses");
  if (hypotheses.size() == 1) return hypotheses;
  for (std::size_t i = 1; i < hypotheses.size(); ++i)
    if (hypotheses[i].recording_id() != hypotheses[0].recording_id())
      throw ValidationError("map_labels: hypotheses from different recordings");

  // Longest total speech anchors the mapping; ties keep input order.
  std::vector<std::size_t> order(hypotheses.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return hypotheses[a].total_speech() > hypotheses[b].total_speech();
  });

  // Running reference: per-speaker merged activity under canonical labels.
  std::map<std::string, std::vector<Interval>> reference;
  std::vector<Timeline> result(hypotheses.size());

  for (std::size_t pos = 0; pos < order.size(); ++pos) {
    const Timeline& hyp = hypotheses[order[pos]];
    std::vector<std::string> speakers = hyp.speakers();
    std::map<std::string, std::string> rename;

    if (pos == 0) {
      for (const std::string& s : speakers) rename[s] = s;
    } else {
      std::vector<std::string> ref_labels;
      for (const auto& [label, iv] : reference) ref_labels.push_back(label);
      std::vector<double> overlap(speakers.size() * ref_labels.size(), 0.0);
      for (std::size_t i = 0; i < speakers.size(); ++i) {
        std::vector<Interval> mine = hyp.speaker_intervals(speakers[i]);
        for (std::size_t j = 0; j < ref_labels.size(); ++j)
          overlap[i * ref_labels.size() + j] =
              total_length(intersect_intervals(mine, reference.at(ref_labels[j])));
      }
      std::vector<int> match =
          max_weight_assignment(overlap, speakers.size(), ref_labels.size());
      std::set<std::string> taken;
      for (const auto& [label, iv] : reference) taken.insert(label);
      for (std::size_t i = 0; i < speakers.size(); ++i)
        if (match[i] >= 0) {
          rename[speakers[i]] = ref_labels[static_cast<std::size_t>(match[i])];
          taken.insert(rename[speakers[i]]);
        }
      for (std::size_t i = 0; i < speakers.size(); ++i) {
        if (match[i] >= 0) continue;
        // Unmatched speakers keep their own label unless it is taken.
        std::string fresh = speakers[i];
        int suffix = 2;
        while (taken.count(fresh)) fresh = speakers[i] + "#" + std::to_string(suffix++);
        taken.insert(fresh);
        rename[speakers[i]] = fresh;
      }
    }

    Timeline relabeled(hyp.recording_id());
    for (const Turn& t : hyp.turns()) relabeled.insert(Turn{rename[t.speaker], t.onset, t.duration});
    for (const std::string& s : speakers) {
      auto& acc = reference[rename[s]];
      for (const Interval& iv : hyp.speaker_intervals(s)) acc.push_back(iv);
      acc = merge_overlapping(std::move(acc));
    }
    result[order[pos]] = std::move(relabeled);
  }
  return result;
}

namespace {

// Weighted median with half-up rounding on exact half-weight splits.
double weighted_median(std::vector<std::pair<int, double>> values_weights) {
  std::sort(values_weights.begin(), values_weights.end());
  double total = 0.0;
  for (const auto& [v, w] : values_weights) total += w;
  double cum = 0.0;
  for (std::size_t i = 0; i < values_weights.size(); ++i) {
    cum += values_weights[i].second;
    if (cum >= total / 2.0 - 1e-12) {
      if (std::abs(cum - total / 2.0) <= 1e-12 && i + 1 < values_weights.size())
        return 0.5 * (values_weights[i].first + values_weights[i + 1].first);
      return values_weights[i].first;
    }
  }
  return values_weights.back().first;
}

}  // namespace

Timeline fuse(const std::vector<Timeline>& hypotheses, const FusionWeights& weights) {
  if (hypotheses.empty()) throw ValidationError("fuse: no hypotheses");

  std::vector<double> w;
  switch (weights.mode) {
    case FusionWeights::Mode::kCustom: {
      if (weights.custom_weights.size() != hypotheses.size())
        throw ValidationError("fuse: " + std::to_string(weights.custom_weights.size()) +
                              " weights for " + std::to_string(hypotheses.size()) +
                              " hypotheses");
      double sum = 0.0;
      for (double x : weights.custom_weights) {
        if (!(x > 0.0)) throw ValidationError("fuse: custom weights must be positive");
        sum += x;
      }
      w = weights.custom_weights;
      for (double& x : w) x /= sum;  // scaling invariance
      break;
    }
    case FusionWeights::Mode::kRankBased:
      w = compute_rank_weights(hypotheses.size(), weights.rank_exponent);
      break;
  }

  std::vector<Timeline> mapped = map_labels(hypotheses);

  const double fps = kDefaultFrameRate;
  double end = 0.0;
  for (const Timeline& t : mapped) end = std::max(end, t.extent());
  auto frames = static_cast<std::size_t>(std::ceil(end * fps - 1e-9));

  // Rasterize every (hypothesis, speaker) once.
  std::set<std::string> label_set;
  for (const Timeline& t : mapped)
    for (const std::string& s : t.speakers()) label_set.insert(s);
  std::vector<std::string> labels(label_set.begin(), label_set.end());

  const std::size_t nh = mapped.size(), ns = labels.size();
  std::vector<std::vector<unsigned char>> active(nh * ns);
  for (std::size_t h = 0; h < nh; ++h)
    for (std::size_t s = 0; s < ns; ++s) {
      std::vector<unsigned char> bitmap(frames, 0);
      for (const Interval& iv : mapped[h].speaker_intervals(labels[s])) {
        auto [first, last] = frame_index_range(iv.onset, iv.offset, fps);
        last = std::min<std::size_t>(last, frames);
        for (std::size_t f = first; f < last; ++f) bitmap[f] = 1;
      }
      active[h * ns + s] = std::move(bitmap);
    }

  std::vector<std::vector<unsigned char>> fused(ns, std::vector<unsigned char>(frames, 0));
  std::vector<std::pair<int, double>> counts(nh);
  std::vector<std::pair<double, std::size_t>> votes;
  for (std::size_t f = 0; f < frames; ++f) {
    int max_count = 0;
    for (std::size_t h = 0; h < nh; ++h) {
      int c = 0;
      for (std::size_t s = 0; s < ns; ++s) c += active[h * ns + s][f];
      counts[h] = {c, w[h]};
      max_count = std::max(max_count, c);
    }
    if (max_count == 0) continue;

    double median = weighted_median(counts);
    int target = std::min(static_cast<int>(std::floor(median + 0.5)), max_count);
    if (target <= 0) continue;

    votes.clear();
    for (std::size_t s = 0; s < ns; ++s) {
      double v = 0.0;
      for (std::size_t h = 0; h < nh; ++h)
        if (active[h * ns + s][f]) v += w[h];
      if (v > 0.0) votes.emplace_back(v, s);
    }
    std::sort(votes.begin(), votes.end(), [&](const auto& a, const auto& b) {
      if (a.first != b.first) return a.first > b.first;
      return labels[a.second] < labels[b.second];  // ties by label
    });
    for (std::size_t i = 0; i < votes.size() && i < static_cast<std::size_t>(target); ++i)
      fused[votes[i].second][f] = 1;
  }

  Timeline out(mapped.front().recording_id());
  for (std::size_t s = 0; s < ns; ++s)
    for (const Interval& run : frames_to_intervals(fused[s], fps))
      out.insert(Turn{labels[s], run.onset, run.length()});
  return out;
}

}  // namespace diar
