#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cobandit/linalg.hpp"

namespace cobandit {

struct Candidate {
  std::string arm_id;
  Vec features;
};

/// One logged interaction: what was shown, whether it was clicked, and the
/// candidate pool it was chosen from.
struct EventRecord {
  std::int64_t timestamp = 0;
  std::string displayed_arm;
  int click = 0;  // 0 or 1
  Vec user_features;
  std::vector<Candidate> pool;
};

}  // namespace cobandit
