#include "diar/timeline.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "diar/errors.hpp"

namespace diar {

namespace {

constexpr double kEps = 1e-9;

bool has_whitespace(const std::string& s) {
  return std::any_of(s.begin(), s.end(), [](unsigned char c) { return std::isspace(c); });
}

void validate_turn(const Turn& turn) {
  if (turn.speaker.empty() || has_whitespace(turn.speaker))
    throw ValidationError("speaker label must be non-empty without whitespace: '" + turn.speaker +
                          "'");
  if (!(turn.duration > 0.0))
    throw ValidationError("turn duration must be positive, got " + std::to_string(turn.duration));
  if (turn.onset < 0.0)
    throw ValidationError("turn onset must be non-negative, got " + std::to_string(turn.onset));
}

bool turn_before(const Turn& a, const Turn& b) {
  if (a.onset != b.onset) return a.onset < b.onset;
  return a.speaker < b.speaker;
}

double parse_time_field(const std::string& field, int line_no, const char* what) {
  try {
    std::size_t used = 0;
    double v = std::stod(field, &used);
    if (used != field.size()) throw std::invalid_argument(field);
    return v;
  } catch (const std::exception&) {
    throw ParseError("line " + std::to_string(line_no) + ": bad " + what + " '" + field + "'");
  }
}

}  // namespace

void Timeline::insert(Turn turn) {
  validate_turn(turn);
  // Absorb every same-speaker turn that overlaps or abuts the new one.
  double onset = turn.onset;
  double offset = turn.offset();
  for (auto it = turns_.begin(); it != turns_.end();) {
    if (it->speaker == turn.speaker && it->onset <= offset + kEps &&
        it->offset() >= onset - kEps) {
      onset = std::min(onset, it->onset);
      offset = std::max(offset, it->offset());
      it = turns_.erase(it);
    } else {
      ++it;
    }
  }
  turn.onset = onset;
  turn.duration = offset - onset;
  auto pos = std::upper_bound(turns_.begin(), turns_.end(), turn, turn_before);
  turns_.insert(pos, std::move(turn));
}

double Timeline::extent() const {
  double end = 0.0;
  for (const Turn& t : turns_) end = std::max(end, t.offset());
  return end;
}

std::vector<std::string> Timeline::speakers() const {
  std::vector<std::string> out;
  for (const Turn& t : turns_) out.push_back(t.speaker);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<Interval> Timeline::speaker_intervals(const std::string& speaker) const {
  std::vector<Interval> out;
  for (const Turn& t : turns_)
    if (t.speaker == speaker) out.push_back({t.onset, t.offset()});
  return out;  // already disjoint and sorted by the insertion invariant
}

double Timeline::speaker_duration(const std::string& speaker) const {
  return total_length(speaker_intervals(speaker));
}

double Timeline::total_speech() const {
  double sum = 0.0;
  for (const Turn& t : turns_) sum += t.duration;
  return sum;
}

std::map<std::string, Timeline> parse_rttm(const std::string& text) {
  std::map<std::string, Timeline> out;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == ';' || line[0] == '#') continue;
    std::istringstream fields(line);
    std::vector<std::string> f;
    std::string tok;
    while (fields >> tok) f.push_back(tok);
    if (f.empty()) continue;
    if (f.size() < 9)
      throw ParseError("line " + std::to_string(line_no) + ": expected >= 9 fields, got " +
                       std::to_string(f.size()));
    if (f[0] != "SPEAKER")
      throw ParseError("line " + std::to_string(line_no) + ": expected SPEAKER record, got '" +
                       f[0] + "'");
    const std::string& rec = f[1];
    double onset = parse_time_field(f[3], line_no, "onset");
    double duration = parse_time_field(f[4], line_no, "duration");
    if (duration <= 0.0)
      throw ValidationError("line " + std::to_string(line_no) + ": non-positive duration " +
                            f[4]);
    if (onset < 0.0)
      throw ValidationError("line " + std::to_string(line_no) + ": negative onset " + f[3]);
    out.try_emplace(rec, Timeline(rec)).first->second.insert(Turn{f[7], onset, duration});
  }
  return out;
}

std::string serialize_rttm(const std::map<std::string, Timeline>& timelines) {
  std::string out;
  char buf[256];
  for (const auto& [rec, timeline] : timelines) {
    for (const Turn& t : timeline.turns()) {
      std::snprintf(buf, sizeof(buf), "SPEAKER %s 1 %.2f %.2f <NA> <NA> %s <NA> <NA>\n",
                    rec.c_str(), t.onset, t.duration, t.speaker.c_str());
      out += buf;
    }
  }
  return out;
}

std::map<std::string, Timeline> load_rttm_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open RTTM file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_rttm(ss.str());
}

void write_rttm_file(const std::string& path, const std::map<std::string, Timeline>& timelines) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write RTTM file: " + path);
  out << serialize_rttm(timelines);
}

FrameLabelMatrix timeline_to_label_matrix(const Timeline& timeline, double frame_rate,
                                          std::size_t total_frames) {
  if (frame_rate <= 0.0) throw ValidationError("frame rate must be positive");
  auto required =
      static_cast<std::size_t>(std::ceil(timeline.extent() * frame_rate - 1e-9));
  if (total_frames < required)
    throw ValidationError("total_frames " + std::to_string(total_frames) +
                          " smaller than required " + std::to_string(required));
  FrameLabelMatrix m;
  m.frame_rate = frame_rate;
  m.frames = total_frames;
  m.speaker_order = timeline.speakers();
  m.values.assign(total_frames * m.speaker_order.size(), 0);
  for (const Turn& t : timeline.turns()) {
    auto col = static_cast<std::size_t>(
        std::lower_bound(m.speaker_order.begin(), m.speaker_order.end(), t.speaker) -
        m.speaker_order.begin());
    auto [first, last] = frame_index_range(t.onset, t.offset(), frame_rate);
    last = std::min(last, total_frames);
    for (std::size_t f = first; f < last; ++f) m.at(f, col) = 1;
  }
  return m;
}

Timeline label_matrix_to_timeline(const FrameLabelMatrix& matrix,
                                  const std::string& recording_id) {
  Timeline out(recording_id);
  for (std::size_t s = 0; s < matrix.num_speakers(); ++s) {
    std::vector<unsigned char> column(matrix.frames);
    for (std::size_t f = 0; f < matrix.frames; ++f) column[f] = matrix.at(f, s);
    for (const Interval& run : frames_to_intervals(column, matrix.frame_rate))
      out.insert(Turn{matrix.speaker_order[s], run.onset, run.length()});
  }
  return out;
}

std::vector<Interval> speech_regions(const Timeline& timeline, double frame_rate) {
  if (frame_rate <= 0.0) throw ValidationError("frame rate must be positive");
  std::vector<Interval> all;
  for (const Turn& t : timeline.turns()) all.push_back({t.onset, t.offset()});
  return merge_with_gap(std::move(all), 1.0 / frame_rate);
}

}  // namespace diar
