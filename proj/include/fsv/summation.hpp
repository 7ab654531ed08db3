#pragma once

#include <array>
#include <cstdint>

namespace fsv {

/// Pairwise (binary-tree) summation with a topology fixed by the order in
/// which terms arrive: slot[k] always holds the sum of exactly 2^k addends,
/// and merges follow the binary-counter carry chain. Two passes that feed the
/// same term sequence produce bit-identical totals, independent of chunking.
class PairwiseAccumulator {
 public:
  void add(double v) {
    int k = 0;
    while ((count_ >> k) & 1ull) {
      v += slot_[k];
      ++k;
    }
    slot_[k] = v;
    ++count_;
  }

  /// Folds the occupied slots from the lowest level upward (fixed order).
  double total() const {
    double t = 0.0;
    for (int k = 0; k < 64; ++k) {
      if ((count_ >> k) & 1ull) t += slot_[k];
    }
    return t;
  }

  std::uint64_t count() const { return count_; }

 private:
  std::array<double, 64> slot_{};
  std::uint64_t count_ = 0;
};

}  // namespace fsv
