#ifndef INTERPEVAL_WINDOWING_HPP_
#define INTERPEVAL_WINDOWING_HPP_

#include <span>
#include <string>
#include <vector>

#include "interpeval/corpus.hpp"
#include "interpeval/ratings.hpp"

namespace interpeval {

enum class WindowPolicy { tumbling, sliding };

const char* to_string(WindowPolicy p);
std::optional<WindowPolicy> parse_window_policy(std::string_view s);

// Window size is soft-capped at 16; published studies use 1..5.
inline constexpr int kMaxWindowSize = 16;

struct WindowSpec {
  int k = 1;
  WindowPolicy policy = WindowPolicy::tumbling;
};

// k consecutive segments merged into one evaluation unit. Texts are the
// member texts joined with a single space. member_indices are consecutive
// original segment indices; only the final tumbling window may be shorter
// than k.
struct WindowedPair {
  std::string speech_id;
  TranslationKind translation_kind = TranslationKind::H;
  int window_index = 0;
  int window_size = 1;  // the spec k, not the member count
  std::vector<int> member_indices;
  std::string source_text;
  std::string target_text;
};

// Splits the ordered segments of one (speech, kind) into windows.
// Tumbling: ceil(n/k) windows partitioning the input, last may be partial.
// Sliding: n-k+1 stride-1 windows; empty when n < k. An empty segment list
// yields an empty result.
std::vector<WindowedPair> build_windows(std::span<const SegmentPair> segments,
                                        const WindowSpec& spec);
std::vector<WindowedPair> build_windows(const std::vector<const SegmentPair*>& segments,
                                        const WindowSpec& spec);

// Human consensus score for one window. Segment granularity averages the
// per-segment consensus means over the window's members and requires every
// member to be rated; speech granularity returns the speech-level consensus
// mean, constant across that speech's windows.
double window_rating(const RatingTable& table, const WindowedPair& window,
                     RatingGranularity granularity,
                     Dimension dimension = Dimension::accuracy);

}  // namespace interpeval

#endif  // INTERPEVAL_WINDOWING_HPP_
