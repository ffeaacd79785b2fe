#include "diar/ahc.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "diar/errors.hpp"

namespace diar {

namespace {

constexpr double kEps = 1e-9;

Cluster make_cluster(std::vector<Embedding> members) {
  Cluster c;
  c.total_duration = 0.0;
  for (const Embedding& e : members) c.total_duration += e.segment.length();
  c.centroid = centroid(members);
  c.members = std::move(members);
  std::sort(c.members.begin(), c.members.end(),
            [](const Embedding& a, const Embedding& b) { return a.segment.onset < b.segment.onset; });
  return c;
}

}  // namespace

std::vector<Interval> uniform_segments(const std::vector<Interval>& speech, double window,
                                       double shift) {
  if (!(shift > 0.0) || shift > window + kEps)
    throw ValidationError("uniform_segments requires 0 < shift <= window");
  std::vector<Interval> out;
  for (const Interval& region : speech) {
    double length = region.length();
    if (length <= 0.0) continue;
    if (length < window - kEps) {
      out.push_back(region);  // short region kept whole
      continue;
    }
    double last_end = region.onset;
    for (std::size_t k = 0;; ++k) {
      double start = region.onset + static_cast<double>(k) * shift;
      if (start + window > region.offset + kEps) break;
      out.push_back({start, start + window});
      last_end = start + window;
    }
    if (last_end < region.offset - kEps) out.push_back({region.offset - window, region.offset});
  }
  return out;
}

std::pair<std::vector<Interval>, std::vector<Embedding>> merge_consecutive(
    const std::vector<Interval>& segments, const std::vector<Embedding>& embeddings,
    double segment_threshold) {
  if (segments.size() != embeddings.size())
    throw ValidationError("merge_consecutive: segments and embeddings misaligned");
  for (std::size_t i = 1; i < segments.size(); ++i)
    if (segments[i].onset < segments[i - 1].onset - kEps)
      throw ValidationError("merge_consecutive: segments not time-ordered");

  std::vector<Interval> merged_segments;
  std::vector<Embedding> merged_embeddings;
  std::vector<Embedding> group;
  double group_offset = 0.0;

  auto flush = [&]() {
    if (group.empty()) return;
    Embedding mean = centroid(group);
    merged_segments.push_back(mean.segment);
    merged_embeddings.push_back(std::move(mean));
    group.clear();
  };

  for (std::size_t i = 0; i < segments.size(); ++i) {
    Embedding e = embeddings[i];
    e.segment = segments[i];
    if (!group.empty() && segments[i].onset <= group_offset + 1e-6 &&
        cosine_similarity(centroid(group).vector, e.vector) >= segment_threshold) {
      group_offset = std::max(group_offset, segments[i].offset);
      group.push_back(std::move(e));
    } else {
      flush();
      group_offset = segments[i].offset;
      group.push_back(std::move(e));
    }
  }
  flush();
  return {std::move(merged_segments), std::move(merged_embeddings)};
}

std::vector<Cluster> plain_ahc(const std::vector<Embedding>& embeddings, double stop_threshold) {
  if (embeddings.empty()) throw ValidationError("plain_ahc: no embeddings");
  const std::size_t n = embeddings.size();

  // Pairwise cosine similarities once; average linkage evolves by the
  // Lance-Williams update.
  std::vector<std::vector<double>> link(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      link[i][j] = link[j][i] = cosine_similarity(embeddings[i], embeddings[j]);

  std::vector<std::vector<std::size_t>> members(n);
  for (std::size_t i = 0; i < n; ++i) members[i] = {i};

  while (members.size() > 1) {
    std::size_t best_i = 0, best_j = 0;
    double best = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < members.size(); ++i)
      for (std::size_t j = i + 1; j < members.size(); ++j)
        if (link[i][j] > best) {  // strict: ties keep the smallest (i, j)
          best = link[i][j];
          best_i = i;
          best_j = j;
        }
    if (best < stop_threshold) break;

    const double wi = static_cast<double>(members[best_i].size());
    const double wj = static_cast<double>(members[best_j].size());
    for (std::size_t k = 0; k < members.size(); ++k) {
      if (k == best_i || k == best_j) continue;
      double merged = (wi * link[best_i][k] + wj * link[best_j][k]) / (wi + wj);
      link[best_i][k] = link[k][best_i] = merged;
    }
    members[best_i].insert(members[best_i].end(), members[best_j].begin(),
                           members[best_j].end());
    members.erase(members.begin() + static_cast<std::ptrdiff_t>(best_j));
    for (auto& row : link) row.erase(row.begin() + static_cast<std::ptrdiff_t>(best_j));
    link.erase(link.begin() + static_cast<std::ptrdiff_t>(best_j));
  }

  std::vector<Cluster> out;
  out.reserve(members.size());
  for (const auto& idx : members) {
    std::vector<Embedding> group;
    group.reserve(idx.size());
    for (std::size_t i : idx) group.push_back(embeddings[i]);
    out.push_back(make_cluster(std::move(group)));
  }
  return out;
}

std::vector<Cluster> assign_short_clusters(const std::vector<Cluster>& clusters,
                                           double long_min_duration, double speaker_threshold) {
  if (clusters.empty()) throw ValidationError("assign_short_clusters: no clusters");

  std::vector<std::size_t> long_idx, short_idx;
  for (std::size_t i = 0; i < clusters.size(); ++i) {
    if (clusters[i].total_duration >= long_min_duration - kEps)
      long_idx.push_back(i);
    else
      short_idx.push_back(i);
  }
  if (long_idx.empty()) return clusters;  // nothing to anchor on: all stand alone

  // Assignments are computed against the frozen initial centroids, visiting
  // short clusters in descending duration order.
  std::sort(short_idx.begin(), short_idx.end(), [&](std::size_t a, std::size_t b) {
    if (clusters[a].total_duration != clusters[b].total_duration)
      return clusters[a].total_duration > clusters[b].total_duration;
    return a < b;
  });

  std::vector<std::vector<Embedding>> absorbed(long_idx.size());
  std::vector<std::size_t> promoted;
  for (std::size_t s : short_idx) {
    std::size_t best_long = 0;
    double best_sim = -std::numeric_limits<double>::infinity();
    for (std::size_t li = 0; li < long_idx.size(); ++li) {
      double sim = cosine_similarity(clusters[long_idx[li]].centroid.vector,
                                     clusters[s].centroid.vector);
      if (sim > best_sim) {  // strict: ties keep the lower-indexed long cluster
        best_sim = sim;
        best_long = li;
      }
    }
    if (best_sim < speaker_threshold) {
      promoted.push_back(s);
    } else {
      absorbed[best_long].insert(absorbed[best_long].end(), clusters[s].members.begin(),
                                 clusters[s].members.end());
    }
  }

  std::vector<Cluster> out;
  for (std::size_t li = 0; li < long_idx.size(); ++li) {
    std::vector<Embedding> group = clusters[long_idx[li]].members;
    group.insert(group.end(), absorbed[li].begin(), absorbed[li].end());
    out.push_back(make_cluster(std::move(group)));
  }
  std::sort(promoted.begin(), promoted.end());
  for (std::size_t s : promoted) out.push_back(clusters[s]);
  return out;
}

Timeline ahc_diarize(const std::string& recording_id, const std::vector<Interval>& speech,
                     const EmbeddingProvider& provider, const AhcConfig& config) {
  if (speech.empty()) throw ValidationError("ahc_diarize: empty speech region list");

  std::vector<Interval> segments = uniform_segments(speech, config.window, config.shift);
  std::vector<Embedding> embeddings = provider.embed(recording_id, segments);
  auto [merged_segments, merged_embeddings] =
      merge_consecutive(segments, embeddings, config.segment_threshold);
  std::vector<Cluster> clusters = plain_ahc(merged_embeddings, config.stop_threshold);
  clusters = assign_short_clusters(clusters, config.long_cluster_min_duration,
                                   config.speaker_threshold);

  // Label clusters by earliest member onset for reproducible speaker ids.
  std::vector<std::size_t> order(clusters.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return clusters[a].members.front().segment.onset < clusters[b].members.front().segment.onset;
  });

  Timeline out(recording_id);
  for (std::size_t rank = 0; rank < order.size(); ++rank) {
    const Cluster& c = clusters[order[rank]];
    std::string label = "spk" + std::to_string(rank);
    for (const Embedding& e : c.members)
      out.insert(Turn{label, e.segment.onset, e.segment.length()});
  }
  return out;
}

}  // namespace diar
