#pragma once

#include <bit>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

namespace antimatroid {

// Elements of the ground set Q are dense ids 0..n-1.
using Element = std::uint32_t;

inline constexpr Element kNoElement = static_cast<Element>(-1);

// A subset of a ground set {0, ..., n-1}, stored as a packed bit vector.
//
// Membership, insertion and removal are O(1); set algebra is O(n / 64).
// Binary operations require both operands to share the same ground size and
// throw InputError otherwise.
class ElementSet {
 public:
  ElementSet() = default;
  explicit ElementSet(std::size_t ground_size);
  ElementSet(std::size_t ground_size, std::initializer_list<Element> members);
  ElementSet(std::size_t ground_size, std::span<const Element> members);

  static ElementSet full(std::size_t ground_size);

  std::size_t ground_size() const noexcept { return ground_size_; }

  // Element ids >= ground_size() are never members.
  bool contains(Element x) const noexcept {
    return x < ground_size_ && ((words_[x >> 6] >> (x & 63)) & 1u) != 0;
  }

  // Throws InputError when x is out of range.
  void insert(Element x);
  void erase(Element x);

  std::size_t size() const noexcept;
  bool empty() const noexcept;

  // Smallest member strictly greater than `after`, or kNoElement. Pass
  // kNoElement to get the smallest member.
  Element next_after(Element after) const noexcept;
  Element first() const noexcept { return next_after(kNoElement); }
  Element last() const noexcept;

  template <typename F>
  void for_each(F&& fn) const {
    for (std::size_t w = 0; w < words_.size(); ++w) {
      std::uint64_t bits = words_[w];
      while (bits != 0) {
        const int bit = std::countr_zero(bits);
        fn(static_cast<Element>(w * 64 + static_cast<std::size_t>(bit)));
        bits &= bits - 1;
      }
    }
  }

  std::vector<Element> elements() const;

  ElementSet& operator|=(const ElementSet& other);
  ElementSet& operator&=(const ElementSet& other);
  ElementSet& operator-=(const ElementSet& other);

  friend ElementSet operator|(ElementSet a, const ElementSet& b) { return a |= b; }
  friend ElementSet operator&(ElementSet a, const ElementSet& b) { return a &= b; }
  friend ElementSet operator-(ElementSet a, const ElementSet& b) { return a -= b; }

  // Copies with one element added / removed (the A + a and A - a of the
  // set-system literature).
  ElementSet with(Element x) const;
  ElementSet without(Element x) const;

  ElementSet complement() const;

  bool is_subset_of(const ElementSet& other) const;
  bool intersects(const ElementSet& other) const;

  bool operator==(const ElementSet& other) const = default;

  // Lexicographic order on the ascending member lists; sets over a smaller
  // ground set order first.
  std::strong_ordering operator<=>(const ElementSet& other) const;

  std::size_t hash() const noexcept;

  // "{0,2,5}"
  std::string to_string() const;

 private:
  void check_same_ground(const ElementSet& other) const;

  std::size_t ground_size_ = 0;
  std::vector<std::uint64_t> words_;
};

struct ElementSetHash {
  std::size_t operator()(const ElementSet& s) const noexcept { return s.hash(); }
};

}  // namespace antimatroid
