#pragma once

#include <algorithm>
#include <vector>

namespace apc {

struct ScoreEntry {
  int item = 0;
  double score = 0.0;
  double initial = 0.0;  // immutable once set
};

// Per-candidate prediction scores. Scores live in [floor, 1]; callers clamp
// after every update so downstream power weights stay well defined.
struct ScoreVector {
  std::vector<ScoreEntry> entries;
  double floor = 1e-6;

  void clamp_all() {
    for (auto& e : entries) e.score = std::clamp(e.score, floor, 1.0);
  }

  const ScoreEntry* find(int item) const {
    for (const auto& e : entries)
      if (e.item == item) return &e;
    return nullptr;
  }
};

}  // namespace apc
