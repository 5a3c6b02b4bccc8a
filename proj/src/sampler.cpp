#include "moran/sampler.hpp"

#include <cmath>

#include "moran/errors.hpp"
#include "moran/log_math.hpp"

namespace moran {

namespace {
// Running bin sums are rebuilt from scratch after this many edits.
constexpr std::uint32_t kRefreshEvery = 1024;
}  // namespace

BinnedSampler::BinnedSampler(std::size_t events) { resize(events); }

void BinnedSampler::resize(std::size_t events) {
  clear();
  mantissa_.assign(events, 0.0);
  exponent_.assign(events, 0);
  slot_.assign(events, 0);
}

void BinnedSampler::clear() {
  bins_.clear();
  std::fill(mantissa_.begin(), mantissa_.end(), 0.0);
}

void BinnedSampler::refresh(Bin& bin) const {
  double s = 0.0;
  for (std::uint32_t id : bin.ids) s += mantissa_[id];
  bin.sum = s;
  bin.edits = 0;
}

void BinnedSampler::remove(std::size_t id) {
  if (mantissa_[id] == 0.0) return;
  auto it = bins_.find(exponent_[id]);
  Bin& bin = it->second;
  const std::uint32_t pos = slot_[id];
  const std::uint32_t last = bin.ids.back();
  bin.ids[pos] = last;
  slot_[last] = pos;
  bin.ids.pop_back();
  if (bin.ids.empty()) {
    bins_.erase(it);
  } else {
    bin.sum -= mantissa_[id];
    if (++bin.edits >= kRefreshEvery) refresh(bin);
  }
  mantissa_[id] = 0.0;
}

void BinnedSampler::set(std::size_t id, double log2w) {
  remove(id);
  if (is_log2_zero(log2w)) return;
  if (!std::isfinite(log2w)) throw InputError("sampler weight must be finite");
  const double fl = std::floor(log2w);
  const int e = static_cast<int>(fl);
  double m = std::exp2(log2w - fl);
  if (m >= 2.0) m = std::nextafter(2.0, 1.0);
  exponent_[id] = e;
  mantissa_[id] = m;
  Bin& bin = bins_[e];
  slot_[id] = static_cast<std::uint32_t>(bin.ids.size());
  bin.ids.push_back(static_cast<std::uint32_t>(id));
  bin.sum += m;
  if (++bin.edits >= kRefreshEvery) refresh(bin);
}

double BinnedSampler::log2_weight(std::size_t id) const {
  if (mantissa_[id] == 0.0) return kLog2Zero;
  return exponent_[id] + std::log2(mantissa_[id]);
}

double BinnedSampler::log2_total() const {
  if (bins_.empty()) return kLog2Zero;
  const int top = bins_.rbegin()->first;
  double acc = 0.0;
  for (const auto& [e, bin] : bins_) acc += std::ldexp(bin.sum, e - top);
  return top + std::log2(acc);
}

std::size_t BinnedSampler::sample(Rng& rng) const {
  if (bins_.empty()) throw StructuralError("sampling from an empty distribution");
  const int top = bins_.rbegin()->first;
  double total = 0.0;
  for (const auto& [e, bin] : bins_) total += std::ldexp(bin.sum, e - top);
  double x = rng.uniform() * total;
  const Bin* chosen = &bins_.rbegin()->second;
  for (const auto& [e, bin] : bins_) {
    const double w = std::ldexp(bin.sum, e - top);
    if (x < w) {
      chosen = &bin;
      break;
    }
    x -= w;
  }
  for (;;) {
    const std::uint32_t id = chosen->ids[rng.below(chosen->ids.size())];
    if (rng.uniform() * 2.0 < mantissa_[id]) return id;
  }
}

}  // namespace moran
