#pragma once

// The partition of F into seven classes M1..M7 by the set of right divisors
// of the canonical diagram among {X0, X0^-1, X1, X1^-1}.

#include <algorithm>
#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "thompson/diagrams.hpp"
#include "thompson/errors.hpp"
#include "thompson/words.hpp"

namespace thompson {

// Membership flags for X0, X0^-1, X1, X1^-1.
class DivisorSet {
 public:
  enum Flag : std::uint8_t {
    x0 = 1,
    x0_inv = 2,
    x1 = 4,
    x1_inv = 8,
  };

  constexpr DivisorSet() = default;
  constexpr explicit DivisorSet(std::uint8_t bits) : bits_(bits) {}

  static constexpr DivisorSet of(Index i, Sign sign) {
    if (i == 0) {
      return DivisorSet(sign == Sign::positive ? x0 : x0_inv);
    }
    return DivisorSet(sign == Sign::positive ? x1 : x1_inv);
  }

  constexpr bool contains(Flag f) const noexcept { return (bits_ & f) != 0; }
  constexpr std::uint8_t bits() const noexcept { return bits_; }
  constexpr DivisorSet operator|(DivisorSet o) const noexcept {
    return DivisorSet(static_cast<std::uint8_t>(bits_ | o.bits_));
  }

  std::string to_string() const {
    static constexpr std::array<std::pair<Flag, std::string_view>, 4> names{{
        {x0, "X0"}, {x0_inv, "X0^-1"}, {x1, "X1"}, {x1_inv, "X1^-1"}}};
    std::string out = "{";
    for (auto const& [flag, name] : names) {
      if (contains(flag)) {
        if (out.size() > 1) {
          out += ',';
        }
        out += name;
      }
    }
    return out + "}";
  }

  friend constexpr bool operator==(DivisorSet, DivisorSet) = default;

 private:
  std::uint8_t bits_ = 0;
};

enum class ClassLabel : std::uint8_t { M1, M2, M3, M4, M5, M6, M7 };

inline constexpr std::array<ClassLabel, 7> all_classes{
    ClassLabel::M1, ClassLabel::M2, ClassLabel::M3, ClassLabel::M4,
    ClassLabel::M5, ClassLabel::M6, ClassLabel::M7};

// Divisor set of each class, in class order.
inline constexpr std::array<DivisorSet, 7> class_divisors{
    DivisorSet(0),
    DivisorSet(DivisorSet::x0_inv),
    DivisorSet(DivisorSet::x0),
    DivisorSet(DivisorSet::x1_inv),
    DivisorSet(DivisorSet::x1),
    DivisorSet(DivisorSet::x0_inv | DivisorSet::x1_inv),
    DivisorSet(DivisorSet::x0_inv | DivisorSet::x1),
};

constexpr std::size_t to_index(ClassLabel c) noexcept {
  return static_cast<std::size_t>(c);
}

inline std::string to_string(ClassLabel c) {
  return "M" + std::to_string(to_index(c) + 1);
}

inline std::optional<ClassLabel> parse_class_label(std::string_view s) {
  if (s.size() == 2 && s[0] == 'M' && s[1] >= '1' && s[1] <= '7') {
    return static_cast<ClassLabel>(s[1] - '1');
  }
  return std::nullopt;
}

inline std::optional<ClassLabel> label_of(DivisorSet s) {
  auto it = std::find(class_divisors.begin(), class_divisors.end(), s);
  if (it == class_divisors.end()) {
    return std::nullopt;
  }
  return static_cast<ClassLabel>(it - class_divisors.begin());
}

// True iff d o X_i^-sign loses a cell to a dipole, i.e. d = d' o X_i^sign.
inline bool right_divisible(CanonicalDiagram const& d, Index i, Sign sign) {
  return cells(concat_product(d, atomic(i, -sign))) + 1 == cells(d);
}

// The divisor set without validation against the seven admissible values.
inline DivisorSet raw_right_divisors(CanonicalDiagram const& d) {
  DivisorSet out;
  for (Index i : {Index{0}, Index{1}}) {
    for (Sign s : {Sign::positive, Sign::negative}) {
      if (right_divisible(d, i, s)) {
        out = out | DivisorSet::of(i, s);
      }
    }
  }
  return out;
}

// Throws InvariantError if the set is not one of the seven admissible ones.
inline DivisorSet right_divisors(CanonicalDiagram const& d) {
  DivisorSet const s = raw_right_divisors(d);
  if (!label_of(s)) {
    throw InvariantError("divisor set " + s.to_string() + " of "
                         + format_diagram(d) + " is not one of the seven");
  }
  return s;
}

inline ClassLabel class_of(CanonicalDiagram const& d) {
  return *label_of(right_divisors(d));
}

inline ClassLabel class_of(NormalForm const& g) {
  return class_of(nf_to_diagram(g));
}

struct ClosureViolation {
  NormalForm element;
  char inclusion;  // 'a' .. 'd'
  ClassLabel from;
  ClassLabel to;

  std::string to_string() const {
    return std::string("(") + inclusion + ") " + format(element) + " in "
           + thompson::to_string(from) + " maps to "
           + thompson::to_string(to);
  }
};

struct PartitionViolation {
  NormalForm element;
  DivisorSet divisors;

  std::string to_string() const {
    return format(element) + " has divisor set " + divisors.to_string();
  }
};

namespace detail {

  template <typename V>
  void sort_by_formatted_element(std::vector<V>& v) {
    std::stable_sort(v.begin(), v.end(), [](V const& a, V const& b) {
      return format(a.element) < format(b.element);
    });
  }

}  // namespace detail

// Checks, for each g in the range:
//   (a) g in M1, M3, M4 or M5  =>  g x0    in M3
//   (b) g in M2 or M7          =>  g x1    in M7
//   (c) g in M7                =>  g x0^-1 in M2
//   (d) g in M3                =>  g x1^-1 in M4
template <typename Range>
std::vector<ClosureViolation> check_closures(Range const& elements) {
  using enum ClassLabel;
  struct Rule {
    char name;
    std::array<bool, 7> applies;
    Letter step;
    ClassLabel target;
  };
  static const std::array<Rule, 4> rules{{
      {'a', {true, false, true, true, true, false, false}, x(0), M3},
      {'b', {false, true, false, false, false, false, true}, x(1), M7},
      {'c', {false, false, false, false, false, false, true}, x_inv(0), M2},
      {'d', {false, false, true, false, false, false, false}, x_inv(1), M4},
  }};
  std::vector<ClosureViolation> out;
  for (NormalForm const& g : elements) {
    ClassLabel const from = class_of(g);
    for (Rule const& r : rules) {
      if (!r.applies[to_index(from)]) {
        continue;
      }
      ClassLabel const to = class_of(multiply_letter(g, r.step));
      if (to != r.target) {
        out.push_back({g, r.name, from, to});
      }
    }
  }
  detail::sort_by_formatted_element(out);
  return out;
}

// Every element's divisor set must be one of the seven admissible values.
template <typename Range>
std::vector<PartitionViolation> check_partition(Range const& elements) {
  std::vector<PartitionViolation> out;
  for (NormalForm const& g : elements) {
    DivisorSet const s = raw_right_divisors(nf_to_diagram(g));
    if (!label_of(s)) {
      out.push_back({g, s});
    }
  }
  detail::sort_by_formatted_element(out);
  return out;
}

}  // namespace thompson
