#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "moran/graph.hpp"

namespace moran {

/// Mutant set over [0, n), bit-packed with a cached cardinality.
class Configuration {
 public:
  Configuration() = default;
  explicit Configuration(std::size_t n) : n_(n), words_((n + 63) / 64, 0) {}

  static Configuration empty(std::size_t n) { return Configuration(n); }
  static Configuration full(std::size_t n) {
    Configuration c(n);
    for (std::size_t u = 0; u < n; ++u) c.insert(static_cast<VertexId>(u));
    return c;
  }
  static Configuration singleton(std::size_t n, VertexId u) {
    Configuration c(n);
    c.insert(u);
    return c;
  }

  std::size_t n() const noexcept { return n_; }
  std::size_t count() const noexcept { return count_; }
  bool is_empty() const noexcept { return count_ == 0; }
  bool is_full() const noexcept { return count_ == n_; }
  bool is_absorbing() const noexcept { return is_empty() || is_full(); }

  bool contains(VertexId u) const noexcept { return (words_[u >> 6] >> (u & 63)) & 1u; }

  void insert(VertexId u) noexcept {
    if (!contains(u)) {
      words_[u >> 6] |= std::uint64_t{1} << (u & 63);
      ++count_;
    }
  }
  void erase(VertexId u) noexcept {
    if (contains(u)) {
      words_[u >> 6] &= ~(std::uint64_t{1} << (u & 63));
      --count_;
    }
  }
  void set(VertexId u, bool mutant) noexcept { mutant ? insert(u) : erase(u); }

  std::vector<VertexId> members() const {
    std::vector<VertexId> out;
    out.reserve(count_);
    for (std::size_t w = 0; w < words_.size(); ++w) {
      std::uint64_t bits = words_[w];
      while (bits) {
        out.push_back(static_cast<VertexId>(w * 64 + std::countr_zero(bits)));
        bits &= bits - 1;
      }
    }
    return out;
  }

  friend bool operator==(const Configuration&, const Configuration&) = default;

 private:
  std::size_t n_ = 0;
  std::size_t count_ = 0;
  std::vector<std::uint64_t> words_;
};

}  // namespace moran
