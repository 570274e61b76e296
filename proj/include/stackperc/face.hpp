#pragma once

#include <algorithm>
#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace stackperc {

/// Largest face cardinality supported (d + 2 <= kMaxFaceSize, so d <= 6).
inline constexpr int kMaxFaceSize = 8;
inline constexpr int kMaxDimension = kMaxFaceSize - 2;

class FaceError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A strictly increasing set of 1-based vertex labels. A d-dimensional face
/// has d + 1 labels; the same type also holds (d+2)-sets and links.
class Face {
 public:
  Face() = default;

  Face(std::initializer_list<int> labels) : Face(std::span<const int>(labels.begin(), labels.size())) {}

  explicit Face(std::span<const int> labels) {
    if (labels.size() > static_cast<std::size_t>(kMaxFaceSize))
      throw FaceError("face has " + std::to_string(labels.size()) + " labels, more than the supported " +
                      std::to_string(kMaxFaceSize));
    std::array<int, kMaxFaceSize> tmp{};
    std::copy(labels.begin(), labels.end(), tmp.begin());
    std::sort(tmp.begin(), tmp.begin() + static_cast<std::ptrdiff_t>(labels.size()));
    for (std::size_t i = 0; i < labels.size(); ++i) {
      if (tmp[i] < 1 || tmp[i] > 0xFFFF) throw FaceError("label " + std::to_string(tmp[i]) + " is not a positive 16-bit label");
      if (i > 0 && tmp[i] == tmp[i - 1]) throw FaceError("label " + std::to_string(tmp[i]) + " repeated");
      v_[i] = static_cast<std::uint16_t>(tmp[i]);
    }
    size_ = static_cast<std::uint8_t>(labels.size());
  }

  explicit Face(const std::vector<int>& labels) : Face(std::span<const int>(labels)) {}

  /// [1..k]
  static Face initial(int k) {
    Face f;
    for (int i = 0; i < k; ++i) f.v_[i] = static_cast<std::uint16_t>(i + 1);
    f.size_ = static_cast<std::uint8_t>(k);
    return f;
  }

  int size() const noexcept { return size_; }
  bool empty() const noexcept { return size_ == 0; }
  int operator[](int i) const noexcept { return v_[static_cast<std::size_t>(i)]; }
  int front() const noexcept { return v_[0]; }
  int back() const noexcept { return v_[size_ - 1u]; }

  const std::uint16_t* begin() const noexcept { return v_.data(); }
  const std::uint16_t* end() const noexcept { return v_.data() + size_; }

  bool contains(int x) const noexcept {
    return std::binary_search(begin(), end(), static_cast<std::uint16_t>(x));
  }

  /// Position of x (0-based), or -1.
  int index_of(int x) const noexcept {
    auto it = std::lower_bound(begin(), end(), static_cast<std::uint16_t>(x));
    return (it != end() && *it == x) ? static_cast<int>(it - begin()) : -1;
  }

  Face without_index(int i) const noexcept {
    Face f;
    int k = 0;
    for (int j = 0; j < size_; ++j)
      if (j != i) f.v_[k++] = v_[j];
    f.size_ = static_cast<std::uint8_t>(size_ - 1);
    return f;
  }

  Face without(int x) const {
    const int i = index_of(x);
    if (i < 0) throw FaceError("label " + std::to_string(x) + " not in face " + to_string());
    return without_index(i);
  }

  Face with(int x) const {
    if (contains(x)) throw FaceError("label " + std::to_string(x) + " already in face " + to_string());
    if (size_ >= kMaxFaceSize) throw FaceError("face too large to extend");
    Face f;
    int k = 0;
    bool placed = false;
    for (int j = 0; j < size_; ++j) {
      if (!placed && x < v_[j]) {
        f.v_[k++] = static_cast<std::uint16_t>(x);
        placed = true;
      }
      f.v_[k++] = v_[j];
    }
    if (!placed) f.v_[k++] = static_cast<std::uint16_t>(x);
    f.size_ = static_cast<std::uint8_t>(size_ + 1);
    return f;
  }

  /// (this \ {x}) ∪ {z}
  Face replace(int x, int z) const { return without(x).with(z); }

  std::vector<int> labels() const { return {begin(), end()}; }

  /// Checks the invariants of a d-face over [n]; throws FaceError naming the
  /// violated one.
  void validate(int n, int d) const {
    if (size_ != d + 1)
      throw FaceError("face " + to_string() + " has " + std::to_string(size_) + " labels, expected d+1 = " +
                      std::to_string(d + 1));
    if (size_ > 0 && back() > n)
      throw FaceError("face " + to_string() + " has label " + std::to_string(back()) + " outside [1, " +
                      std::to_string(n) + "]");
  }

  /// Compact rendering ("123") when all labels are single
  /// digits, otherwise "{1,12,30}".
  std::string to_string() const {
    const bool compact = size_ > 0 && back() < 10;
    std::string s = compact ? "" : "{";
    for (int i = 0; i < size_; ++i) {
      if (!compact && i > 0) s += ',';
      s += std::to_string(v_[i]);
    }
    if (!compact) s += '}';
    return s;
  }

  /// Lexicographic on the sorted label sequence (a shorter prefix sorts first).
  friend std::strong_ordering operator<=>(const Face& a, const Face& b) noexcept {
    return std::lexicographical_compare_three_way(a.begin(), a.end(), b.begin(), b.end());
  }
  friend bool operator==(const Face& a, const Face& b) noexcept {
    return a.size_ == b.size_ && std::equal(a.begin(), a.end(), b.begin());
  }

 private:
  std::array<std::uint16_t, kMaxFaceSize> v_{};
  std::uint8_t size_ = 0;
};

/// Colex order: compare the largest differing label.
struct ColexLess {
  bool operator()(const Face& a, const Face& b) const noexcept {
    for (int i = std::min(a.size(), b.size()) - 1, j = a.size() - 1, k = b.size() - 1; i >= 0; --i, --j, --k) {
      if (a[j] != b[k]) return a[j] < b[k];
    }
    return a.size() < b.size();
  }
};

struct FaceHash {
  std::size_t operator()(const Face& f) const noexcept {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (auto x : f) h = (h ^ x) * 0x100000001b3ull;
    return static_cast<std::size_t>(h);
  }
};

/// ∪ of labels.
template <class Range>
std::vector<int> label_union(const Range& faces) {
  std::vector<int> out;
  for (const Face& f : faces) out.insert(out.end(), f.begin(), f.end());
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace stackperc
