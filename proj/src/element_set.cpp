#include "antimatroid/element_set.hpp"

#include <algorithm>

#include "antimatroid/errors.hpp"

namespace antimatroid {

namespace {

std::size_t word_count(std::size_t ground_size) { return (ground_size + 63) / 64; }

}  // namespace

ElementSet::ElementSet(std::size_t ground_size)
    : ground_size_(ground_size), words_(word_count(ground_size), 0) {}

ElementSet::ElementSet(std::size_t ground_size, std::initializer_list<Element> members)
    : ElementSet(ground_size) {
  for (Element x : members) insert(x);
}

ElementSet::ElementSet(std::size_t ground_size, std::span<const Element> members)
    : ElementSet(ground_size) {
  for (Element x : members) insert(x);
}

ElementSet ElementSet::full(std::size_t ground_size) {
  ElementSet s(ground_size);
  std::fill(s.words_.begin(), s.words_.end(), ~std::uint64_t{0});
  if (const std::size_t tail = ground_size % 64; tail != 0) {
    s.words_.back() = (std::uint64_t{1} << tail) - 1;
  }
  return s;
}

void ElementSet::insert(Element x) {
  if (x >= ground_size_) {
    throw InputError("element " + std::to_string(x) + " outside ground set of size " +
                     std::to_string(ground_size_));
  }
  words_[x >> 6] |= std::uint64_t{1} << (x & 63);
}

void ElementSet::erase(Element x) {
  if (x >= ground_size_) {
    throw InputError("element " + std::to_string(x) + " outside ground set of size " +
                     std::to_string(ground_size_));
  }
  words_[x >> 6] &= ~(std::uint64_t{1} << (x & 63));
}

std::size_t ElementSet::size() const noexcept {
  std::size_t total = 0;
  for (std::uint64_t w : words_) total += static_cast<std::size_t>(std::popcount(w));
  return total;
}

bool ElementSet::empty() const noexcept {
  return std::all_of(words_.begin(), words_.end(), [](std::uint64_t w) { return w == 0; });
}

Element ElementSet::next_after(Element after) const noexcept {
  const std::size_t start = after == kNoElement ? 0 : static_cast<std::size_t>(after) + 1;
  if (start >= ground_size_) return kNoElement;
  std::size_t w = start >> 6;
  std::uint64_t bits = words_[w] & (~std::uint64_t{0} << (start & 63));
  while (true) {
    if (bits != 0) return static_cast<Element>(w * 64 + std::countr_zero(bits));
    if (++w == words_.size()) return kNoElement;
    bits = words_[w];
  }
}

Element ElementSet::last() const noexcept {
  for (std::size_t w = words_.size(); w-- > 0;) {
    if (words_[w] != 0) return static_cast<Element>(w * 64 + 63 - std::countl_zero(words_[w]));
  }
  return kNoElement;
}

std::vector<Element> ElementSet::elements() const {
  std::vector<Element> out;
  out.reserve(size());
  for_each([&](Element x) { out.push_back(x); });
  return out;
}

void ElementSet::check_same_ground(const ElementSet& other) const {
  if (ground_size_ != other.ground_size_) {
    throw InputError("ground size mismatch: " + std::to_string(ground_size_) + " vs " +
                     std::to_string(other.ground_size_));
  }
}

ElementSet& ElementSet::operator|=(const ElementSet& other) {
  check_same_ground(other);
  for (std::size_t i = 0; i < words_.size(); ++i) words_[i] |= other.words_[i];
  return *this;
}

ElementSet& ElementSet::operator&=(const ElementSet& other) {
  check_same_ground(other);
  for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= other.words_[i];
  return *this;
}

ElementSet& ElementSet::operator-=(const ElementSet& other) {
  check_same_ground(other);
  for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= ~other.words_[i];
  return *this;
}

ElementSet ElementSet::with(Element x) const {
  ElementSet copy = *this;
  copy.insert(x);
  return copy;
}

ElementSet ElementSet::without(Element x) const {
  ElementSet copy = *this;
  copy.erase(x);
  return copy;
}

ElementSet ElementSet::complement() const { return full(ground_size_) - *this; }

bool ElementSet::is_subset_of(const ElementSet& other) const {
  check_same_ground(other);
  for (std::size_t i = 0; i < words_.size(); ++i) {
    if ((words_[i] & ~other.words_[i]) != 0) return false;
  }
  return true;
}

bool ElementSet::intersects(const ElementSet& other) const {
  check_same_ground(other);
  for (std::size_t i = 0; i < words_.size(); ++i) {
    if ((words_[i] & other.words_[i]) != 0) return true;
  }
  return false;
}

std::strong_ordering ElementSet::operator<=>(const ElementSet& other) const {
  if (ground_size_ != other.ground_size_) return ground_size_ <=> other.ground_size_;
  Element a = first();
  Element b = other.first();
  while (a != kNoElement && b != kNoElement) {
    if (a != b) return a <=> b;
    a = next_after(a);
    b = other.next_after(b);
  }
  if (a == kNoElement && b == kNoElement) return std::strong_ordering::equal;
  return a == kNoElement ? std::strong_ordering::less : std::strong_ordering::greater;
}

std::size_t ElementSet::hash() const noexcept {
  std::uint64_t h = 0x9e3779b97f4a7c15ull ^ ground_size_;
  for (std::uint64_t w : words_) {
    h ^= w + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
  }
  return static_cast<std::size_t>(h);
}

std::string ElementSet::to_string() const {
  std::string out = "{";
  bool first_member = true;
  for_each([&](Element x) {
    if (!first_member) out += ',';
    out += std::to_string(x);
    first_member = false;
  });
  out += '}';
  return out;
}

}  // namespace antimatroid
