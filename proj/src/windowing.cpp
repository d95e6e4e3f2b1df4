#include "interpeval/windowing.hpp"

#include <algorithm>

#include "interpeval/error.hpp"

namespace interpeval {

const char* to_string(WindowPolicy p) {
  return p == WindowPolicy::tumbling ? "tumbling" : "sliding";
}

std::optional<WindowPolicy> parse_window_policy(std::string_view s) {
  if (s == "tumbling") return WindowPolicy::tumbling;
  if (s == "sliding") return WindowPolicy::sliding;
  return std::nullopt;
}

namespace {

void check_spec(const WindowSpec& spec) {
  if (spec.k < 1 || spec.k > kMaxWindowSize) {
    throw ConfigError("window size must be in 1.." + std::to_string(kMaxWindowSize) +
                      ", got " + std::to_string(spec.k));
  }
}

void check_segments(std::span<const SegmentPair> segments) {
  for (std::size_t i = 0; i < segments.size(); ++i) {
    if (segments[i].speech_id != segments[0].speech_id ||
        segments[i].translation_kind != segments[0].translation_kind) {
      throw DataError("build_windows: segments span multiple (speech, kind) groups");
    }
    if (segments[i].segment_index != segments[0].segment_index + static_cast<int>(i)) {
      throw DataError("build_windows: segment indices not contiguous at position " +
                      std::to_string(i));
    }
  }
}

WindowedPair make_window(std::span<const SegmentPair> segments, std::size_t begin,
                         std::size_t end, int window_index, int k) {
  WindowedPair w;
  w.speech_id = segments[0].speech_id;
  w.translation_kind = segments[0].translation_kind;
  w.window_index = window_index;
  w.window_size = k;
  for (std::size_t i = begin; i < end; ++i) {
    w.member_indices.push_back(segments[i].segment_index);
    if (i > begin) {
      w.source_text += ' ';
      w.target_text += ' ';
    }
    w.source_text += segments[i].source_text;
    w.target_text += segments[i].target_text;
  }
  return w;
}

}  // namespace

std::vector<WindowedPair> build_windows(std::span<const SegmentPair> segments,
                                        const WindowSpec& spec) {
  check_spec(spec);
  if (segments.empty()) {
    return {};
  }
  check_segments(segments);

  const std::size_t n = segments.size();
  const std::size_t k = static_cast<std::size_t>(spec.k);
  std::vector<WindowedPair> windows;

  if (spec.policy == WindowPolicy::tumbling) {
    windows.reserve((n + k - 1) / k);
    int index = 0;
    for (std::size_t begin = 0; begin < n; begin += k) {
      windows.push_back(make_window(segments, begin, std::min(begin + k, n), index++, spec.k));
    }
  } else {
    if (n < k) {
      return {};
    }
    windows.reserve(n - k + 1);
    for (std::size_t begin = 0; begin + k <= n; ++begin) {
      windows.push_back(
          make_window(segments, begin, begin + k, static_cast<int>(begin), spec.k));
    }
  }
  return windows;
}

std::vector<WindowedPair> build_windows(const std::vector<const SegmentPair*>& segments,
                                        const WindowSpec& spec) {
  std::vector<SegmentPair> copy;
  copy.reserve(segments.size());
  for (const SegmentPair* s : segments) {
    copy.push_back(*s);
  }
  return build_windows(std::span<const SegmentPair>(copy), spec);
}

double window_rating(const RatingTable& table, const WindowedPair& window,
                     RatingGranularity granularity, Dimension dimension) {
  if (granularity == RatingGranularity::speech) {
    return mean_rating(table, window.speech_id, window.translation_kind,
                       RatingUnit::speech(), dimension)
        .mean;
  }
  if (window.member_indices.empty()) {
    throw DataError("window_rating: window has no members");
  }
  double sum = 0.0;
  for (int idx : window.member_indices) {
    sum += mean_rating(table, window.speech_id, window.translation_kind,
                       RatingUnit::segment(idx), dimension)
               .mean;
  }
  return sum / static_cast<double>(window.member_indices.size());
}

}  // namespace interpeval
