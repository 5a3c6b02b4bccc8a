#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <vector>

#include "moran/rng.hpp"

namespace moran {

/// Dynamic discrete distribution over event ids with weights given as log2.
///
/// Events are grouped by binary exponent floor(log2 w); inside a bin every
/// weight is a mantissa in [1, 2), so a bin is sampled by rejection with
/// acceptance >= 1/2. Bins are combined after shifting by the largest
/// exponent, which keeps weights spanning thousands of binades usable.
class BinnedSampler {
 public:
  explicit BinnedSampler(std::size_t events = 0);

  void resize(std::size_t events);
  /// Sets the weight of `id`; kLog2Zero removes it.
  void set(std::size_t id, double log2w);
  void clear();

  bool empty() const noexcept { return bins_.empty(); }
  double log2_weight(std::size_t id) const;
  /// log2 of the sum of all weights.
  double log2_total() const;

  std::size_t sample(Rng& rng) const;

 private:
  struct Bin {
    std::vector<std::uint32_t> ids;
    double sum = 0.0;
    std::uint32_t edits = 0;
  };

  void remove(std::size_t id);
  void refresh(Bin& bin) const;

  std::vector<double> mantissa_;  // 0 when absent
  std::vector<int> exponent_;
  std::vector<std::uint32_t> slot_;
  std::map<int, Bin> bins_;
};

}  // namespace moran
