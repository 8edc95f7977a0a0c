#pragma once

#include <array>
#include <bit>
#include <cstdint>
#include <initializer_list>
#include <stdexcept>
#include <vector>

namespace hxt {

// Hard cap on vertex ids across the whole toolkit. Every vertex set is a
// fixed 512-bit mask so intersection tests stay branch-free and allocation
// free; set search dominates everything downstream.
inline constexpr int kMaxVertices = 512;

class VertexSet {
  static constexpr int kWords = kMaxVertices / 64;
  std::array<std::uint64_t, kWords> w_{};

public:
  constexpr VertexSet() = default;

  static VertexSet of(std::initializer_list<int> vs) {
    VertexSet s;
    for (int v : vs) s.set(v);
    return s;
  }

  template <typename It>
  static VertexSet from_range(It first, It last) {
    VertexSet s;
    for (; first != last; ++first) s.set(*first);
    return s;
  }

  static VertexSet from_vector(const std::vector<int>& vs) {
    return from_range(vs.begin(), vs.end());
  }

  static VertexSet interval(int lo, int hi) {  // [lo, hi)
    VertexSet s;
    for (int v = lo; v < hi; ++v) s.set(v);
    return s;
  }

  static VertexSet full(int n) {
    VertexSet s;
    for (int v = 0; v < n; ++v) s.set(v);
    return s;
  }

  void set(int v) {
    check(v);
    w_[v >> 6] |= (std::uint64_t{1} << (v & 63));
  }

  void reset(int v) {
    check(v);
    w_[v >> 6] &= ~(std::uint64_t{1} << (v & 63));
  }

  bool test(int v) const {
    if (v < 0 || v >= kMaxVertices) return false;
    return (w_[v >> 6] >> (v & 63)) & 1;
  }

  int count() const {
    int c = 0;
    for (auto w : w_) c += std::popcount(w);
    return c;
  }

  bool empty() const {
    for (auto w : w_)
      if (w) return false;
    return true;
  }

  bool contains(const VertexSet& other) const {
    for (int i = 0; i < kWords; ++i)
      if ((other.w_[i] & ~w_[i]) != 0) return false;
    return true;
  }

  bool intersects(const VertexSet& other) const {
    for (int i = 0; i < kWords; ++i)
      if (w_[i] & other.w_[i]) return true;
    return false;
  }

  int intersect_count(const VertexSet& other) const {
    int c = 0;
    for (int i = 0; i < kWords; ++i) c += std::popcount(w_[i] & other.w_[i]);
    return c;
  }

  VertexSet operator|(const VertexSet& o) const {
    VertexSet r;
    for (int i = 0; i < kWords; ++i) r.w_[i] = w_[i] | o.w_[i];
    return r;
  }

  VertexSet operator&(const VertexSet& o) const {
    VertexSet r;
    for (int i = 0; i < kWords; ++i) r.w_[i] = w_[i] & o.w_[i];
    return r;
  }

  // set difference
  VertexSet minus(const VertexSet& o) const {
    VertexSet r;
    for (int i = 0; i < kWords; ++i) r.w_[i] = w_[i] & ~o.w_[i];
    return r;
  }

  VertexSet& operator|=(const VertexSet& o) {
    for (int i = 0; i < kWords; ++i) w_[i] |= o.w_[i];
    return *this;
  }

  VertexSet& operator&=(const VertexSet& o) {
    for (int i = 0; i < kWords; ++i) w_[i] &= o.w_[i];
    return *this;
  }

  bool operator==(const VertexSet& o) const { return w_ == o.w_; }
  bool operator!=(const VertexSet& o) const { return w_ != o.w_; }
  bool operator<(const VertexSet& o) const { return w_ < o.w_; }

  int lowest() const {
    for (int i = 0; i < kWords; ++i)
      if (w_[i]) return i * 64 + std::countr_zero(w_[i]);
    return -1;
  }

  template <typename F>
  void for_each(F&& f) const {
    for (int i = 0; i < kWords; ++i) {
      std::uint64_t w = w_[i];
      while (w) {
        int b = std::countr_zero(w);
        f(i * 64 + b);
        w &= w - 1;
      }
    }
  }

  std::vector<int> to_vector() const {
    std::vector<int> out;
    out.reserve(static_cast<std::size_t>(count()));
    for_each([&](int v) { out.push_back(v); });
    return out;
  }

  std::size_t hash() const {
    std::uint64_t h = 0x9E3779B97F4A7C15ull;
    for (auto w : w_) {
      h ^= w + 0x9E3779B97F4A7C15ull + (h << 6) + (h >> 2);
      h *= 0xBF58476D1CE4E5B9ull;
      h ^= h >> 29;
    }
    return static_cast<std::size_t>(h);
  }

private:
  static void check(int v) {
    if (v < 0 || v >= kMaxVertices)
      throw std::invalid_argument("vertex id out of range: " + std::to_string(v));
  }
};

struct VertexSetHash {
  std::size_t operator()(const VertexSet& s) const { return s.hash(); }
};

}  // namespace hxt
