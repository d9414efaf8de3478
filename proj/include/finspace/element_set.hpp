#pragma once

#include <array>
#include <bit>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <vector>

namespace finspace {

/// Index of an element inside its owning poset.
using Element = int;

/// Hard upper bound on the number of elements of any poset handled by the
/// library. Derived posets (intervals, chain posets) must also fit.
inline constexpr int kMaxElements = 256;

class CapacityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Fixed-capacity bitset over the elements of a poset.
class ElementSet {
 public:
  static constexpr int kWords = kMaxElements / 64;

  constexpr ElementSet() = default;

  static ElementSet range(int n) {
    check(n == 0 ? 0 : n - 1);
    ElementSet s;
    for (int w = 0; w < kWords; ++w) {
      int lo = w * 64;
      if (n >= lo + 64) {
        s.words_[w] = ~std::uint64_t{0};
      } else if (n > lo) {
        s.words_[w] = (std::uint64_t{1} << (n - lo)) - 1;
      }
    }
    return s;
  }

  static ElementSet single(Element x) {
    ElementSet s;
    s.insert(x);
    return s;
  }

  static ElementSet of(std::initializer_list<Element> xs) {
    ElementSet s;
    for (Element x : xs) s.insert(x);
    return s;
  }

  bool contains(Element x) const {
    return (words_[x >> 6] >> (x & 63)) & 1U;
  }
  void insert(Element x) {
    check(x);
    words_[x >> 6] |= std::uint64_t{1} << (x & 63);
  }
  void erase(Element x) { words_[x >> 6] &= ~(std::uint64_t{1} << (x & 63)); }

  int size() const {
    int c = 0;
    for (auto w : words_) c += std::popcount(w);
    return c;
  }
  bool empty() const {
    for (auto w : words_)
      if (w) return false;
    return true;
  }

  /// Smallest member, or -1 when empty.
  Element first() const {
    for (int w = 0; w < kWords; ++w)
      if (words_[w]) return w * 64 + std::countr_zero(words_[w]);
    return -1;
  }

  /// Smallest member strictly greater than x, or -1.
  Element next(Element x) const {
    int pos = x + 1;
    if (pos >= kMaxElements) return -1;
    int w = pos >> 6;
    std::uint64_t cur = words_[w] & (~std::uint64_t{0} << (pos & 63));
    while (true) {
      if (cur) return w * 64 + std::countr_zero(cur);
      if (++w == kWords) return -1;
      cur = words_[w];
    }
  }

  std::vector<Element> members() const {
    std::vector<Element> out;
    out.reserve(static_cast<std::size_t>(size()));
    for_each([&](Element x) { out.push_back(x); });
    return out;
  }

  template <class F>
  void for_each(F&& f) const {
    for (int w = 0; w < kWords; ++w) {
      std::uint64_t bits = words_[w];
      while (bits) {
        f(static_cast<Element>(w * 64 + std::countr_zero(bits)));
        bits &= bits - 1;
      }
    }
  }

  bool subset_of(const ElementSet& o) const {
    for (int w = 0; w < kWords; ++w)
      if (words_[w] & ~o.words_[w]) return false;
    return true;
  }
  bool intersects(const ElementSet& o) const {
    for (int w = 0; w < kWords; ++w)
      if (words_[w] & o.words_[w]) return true;
    return false;
  }

  ElementSet& operator|=(const ElementSet& o) {
    for (int w = 0; w < kWords; ++w) words_[w] |= o.words_[w];
    return *this;
  }
  ElementSet& operator&=(const ElementSet& o) {
    for (int w = 0; w < kWords; ++w) words_[w] &= o.words_[w];
    return *this;
  }
  ElementSet& operator-=(const ElementSet& o) {
    for (int w = 0; w < kWords; ++w) words_[w] &= ~o.words_[w];
    return *this;
  }
  friend ElementSet operator|(ElementSet a, const ElementSet& b) { return a |= b; }
  friend ElementSet operator&(ElementSet a, const ElementSet& b) { return a &= b; }
  friend ElementSet operator-(ElementSet a, const ElementSet& b) { return a -= b; }

  friend bool operator==(const ElementSet&, const ElementSet&) = default;
  friend auto operator<=>(const ElementSet&, const ElementSet&) = default;

  std::size_t hash() const {
    std::size_t h = 1469598103934665603ULL;
    for (auto w : words_) h = (h ^ std::hash<std::uint64_t>{}(w)) * 1099511628211ULL;
    return h;
  }

  const std::array<std::uint64_t, kWords>& words() const { return words_; }

 private:
  static void check(Element x) {
    if (x < 0 || x >= kMaxElements)
      throw CapacityError("element index exceeds the supported poset size");
  }

  std::array<std::uint64_t, kWords> words_{};
};

struct ElementSetHash {
  std::size_t operator()(const ElementSet& s) const { return s.hash(); }
};

}  // namespace finspace
