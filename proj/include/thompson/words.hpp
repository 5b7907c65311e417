#pragma once

// Words over the infinite generating set {x0, x1, x2, ...} of Thompson's
// group F, and the unique normal form
//
//   x_{i1} x_{i2} ... x_{is} x_{jt}^-1 ... x_{j2}^-1 x_{j1}^-1
//
// with i1 <= ... <= is, j1 <= ... <= jt, and the side condition that if x_i
// and x_i^-1 both occur then x_{i+1} or x_{i+1}^-1 occurs as well.

#include <algorithm>
#include <charconv>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "thompson/errors.hpp"

namespace thompson {

using Index = std::size_t;

enum class Sign : std::int8_t { negative = -1, positive = 1 };

constexpr Sign operator-(Sign s) noexcept {
  return s == Sign::positive ? Sign::negative : Sign::positive;
}

// One occurrence of a generator x_index^sign.
struct Letter {
  Index index = 0;
  Sign sign = Sign::positive;

  constexpr Letter inverse() const noexcept { return {index, -sign}; }
  constexpr bool is_positive() const noexcept { return sign == Sign::positive; }

  friend constexpr auto operator<=>(Letter const&, Letter const&) = default;
};

constexpr Letter x(Index i) noexcept { return {i, Sign::positive}; }
constexpr Letter x_inv(Index i) noexcept { return {i, Sign::negative}; }

// Unreduced words are legal values; the empty word is the identity.
using Word = std::vector<Letter>;

inline Word inverse(Word const& w) {
  Word result;
  result.reserve(w.size());
  for (auto it = w.rbegin(); it != w.rend(); ++it) {
    result.push_back(it->inverse());
  }
  return result;
}

// Cancels adjacent inverse pairs until none remain.
inline Word free_reduce(Word const& w) {
  Word stack;
  stack.reserve(w.size());
  for (Letter const& l : w) {
    if (!stack.empty() && stack.back() == l.inverse()) {
      stack.pop_back();
    } else {
      stack.push_back(l);
    }
  }
  return stack;
}

class NormalForm;

namespace detail {
  struct NormalFormAccess;
}  // namespace detail

// Checks ordering and the x_i / x_i^-1 side condition. `neg` lists the
// indices j1 <= ... <= jt, i.e. in the reverse of their order in the word.
inline bool is_normal_form(std::span<Index const> pos,
                           std::span<Index const> neg) {
  if (!std::is_sorted(pos.begin(), pos.end())
      || !std::is_sorted(neg.begin(), neg.end())) {
    return false;
  }
  if (!pos.empty() && !neg.empty() && pos.back() == neg.back()) {
    return false;
  }
  auto contains = [](std::span<Index const> s, Index v) {
    return std::binary_search(s.begin(), s.end(), v);
  };
  for (Index i : pos) {
    if (contains(neg, i) && !contains(pos, i + 1) && !contains(neg, i + 1)) {
      return false;
    }
  }
  return true;
}

class NormalForm {
 public:
  // The identity element.
  NormalForm() = default;

  // Throws PreconditionError unless (pos, neg) satisfies is_normal_form.
  static NormalForm from_parts(std::vector<Index> pos, std::vector<Index> neg) {
    if (!is_normal_form(pos, neg)) {
      throw PreconditionError("index sequences do not form a normal form");
    }
    return NormalForm(std::move(pos), std::move(neg));
  }

  std::span<Index const> positive() const noexcept { return pos_; }
  std::span<Index const> negative() const noexcept { return neg_; }

  bool is_identity() const noexcept { return pos_.empty() && neg_.empty(); }
  std::size_t length() const noexcept { return pos_.size() + neg_.size(); }

  // x_{i1} ... x_{is} x_{jt}^-1 ... x_{j1}^-1
  Word word() const {
    Word w;
    w.reserve(length());
    for (Index i : pos_) {
      w.push_back(x(i));
    }
    for (auto it = neg_.rbegin(); it != neg_.rend(); ++it) {
      w.push_back(x_inv(*it));
    }
    return w;
  }

  friend bool operator==(NormalForm const&, NormalForm const&) = default;
  friend auto operator<=>(NormalForm const&, NormalForm const&) = default;

 private:
  friend struct detail::NormalFormAccess;

  NormalForm(std::vector<Index> pos, std::vector<Index> neg)
      : pos_(std::move(pos)), neg_(std::move(neg)) {}

  std::vector<Index> pos_;
  std::vector<Index> neg_;
};

struct NormalFormHash {
  std::size_t operator()(NormalForm const& a) const noexcept {
    std::size_t seed = a.positive().size() * 0x9e3779b97f4a7c15ULL;
    auto mix = [&seed](std::size_t v) {
      seed ^= std::hash<std::size_t>{}(v) + 0x9e3779b97f4a7c15ULL + (seed << 6)
              + (seed >> 2);
    };
    for (Index i : a.positive()) {
      mix(i);
    }
    mix(~std::size_t{0});
    for (Index j : a.negative()) {
      mix(j);
    }
    return seed;
  }
};

namespace detail {

  struct NormalFormAccess {
    static NormalForm make(std::vector<Index> pos, std::vector<Index> neg) {
      return NormalForm(std::move(pos), std::move(neg));
    }
    static std::vector<Index>& pos(NormalForm& a) { return a.pos_; }
    static std::vector<Index>& neg(NormalForm& a) { return a.neg_; }
  };

  inline bool sorted_contains(std::vector<Index> const& s, Index v) {
    return std::binary_search(s.begin(), s.end(), v);
  }

  // Removes one x_k from both halves and shifts everything above k down,
  // using x_k u x_k^-1 = u' when every index in u is at least k + 2.
  inline void cancel_pair(std::vector<Index>& pos,
                          std::vector<Index>& neg,
                          Index k) {
    auto drop = [k](std::vector<Index>& s) {
      s.erase(std::lower_bound(s.begin(), s.end(), k));
      for (Index& v : s) {
        if (v > k) {
          --v;
        }
      }
    };
    drop(pos);
    drop(neg);
  }

  // Restores the side condition on sorted halves.
  inline void repair(std::vector<Index>& pos, std::vector<Index>& neg) {
    for (;;) {
      bool changed = false;
      auto p = pos.rbegin();
      auto n = neg.rbegin();
      while (p != pos.rend() && n != neg.rend()) {
        if (*p > *n) {
          ++p;
        } else if (*n > *p) {
          ++n;
        } else {
          Index const k = *p;
          if (!sorted_contains(pos, k + 1) && !sorted_contains(neg, k + 1)) {
            cancel_pair(pos, neg, k);
            changed = true;
            break;
          }
          ++p;
          ++n;
        }
      }
      if (!changed) {
        return;
      }
    }
  }

  // Moves x_k into the sorted positive word `s` from the right:
  // x_j x_k = x_k x_{j+1} for k < j.
  inline void insert_from_right(std::vector<Index>& s, Index k) {
    auto it = std::upper_bound(s.begin(), s.end(), k);
    for (auto jt = it; jt != s.end(); ++jt) {
      ++*jt;
    }
    s.insert(it, k);
  }

  // Moves x_k into the sorted positive word `s` from the left:
  // x_k x_j = x_j x_{k+1} for j < k.
  inline void insert_from_left(std::vector<Index>& s, Index k) {
    auto it = s.begin();
    while (it != s.end() && *it < k) {
      ++it;
      ++k;
    }
    s.insert(it, k);
  }

}  // namespace detail

// Normal form of a * l.
inline NormalForm multiply_letter(NormalForm a, Letter l) {
  auto& pos = detail::NormalFormAccess::pos(a);
  auto& neg = detail::NormalFormAccess::neg(a);
  Index k = l.index;
  if (l.is_positive()) {
    // Push x_k leftwards through x_{jt}^-1 ... x_{j1}^-1, starting at j1.
    auto it = neg.begin();
    while (it != neg.end() && *it < k) {
      ++it;
      ++k;  // x_j^-1 x_k = x_{k+1} x_j^-1
    }
    if (it != neg.end() && *it == k) {
      neg.erase(it);
    } else {
      for (; it != neg.end(); ++it) {
        ++*it;  // x_j^-1 x_k = x_k x_{j+1}^-1
      }
      detail::insert_from_right(pos, k);
    }
  } else {
    // N^-1 x_k^-1 = (x_k N)^-1
    detail::insert_from_left(neg, k);
  }
  detail::repair(pos, neg);
  return a;
}

inline NormalForm reduce_to_normal_form(Word const& w) {
  NormalForm a;
  for (Letter const& l : w) {
    a = multiply_letter(std::move(a), l);
  }
  return a;
}

inline NormalForm nf_multiply(NormalForm a, NormalForm const& b) {
  for (Index i : b.positive()) {
    a = multiply_letter(std::move(a), x(i));
  }
  auto const neg = b.negative();
  for (auto it = neg.rbegin(); it != neg.rend(); ++it) {
    a = multiply_letter(std::move(a), x_inv(*it));
  }
  return a;
}

// The side condition is symmetric in the two halves, so swapping them is
// already a normal form.
inline NormalForm nf_invert(NormalForm const& a) {
  return detail::NormalFormAccess::make(
      {a.negative().begin(), a.negative().end()},
      {a.positive().begin(), a.positive().end()});
}

// Rewrites every x_n (n >= 2) as x0^-(n-1) x1 x0^(n-1), then cancels
// adjacent inverse pairs. Not geodesic.
inline Word to_standard_word(NormalForm const& a) {
  Word w;
  for (Letter const& l : a.word()) {
    if (l.index <= 1) {
      w.push_back(l);
      continue;
    }
    w.insert(w.end(), l.index - 1, x_inv(0));
    w.push_back({1, l.sign});
    w.insert(w.end(), l.index - 1, x(0));
  }
  return free_reduce(w);
}

inline NormalForm from_standard_word(Word const& w) {
  for (Letter const& l : w) {
    if (l.index > 1) {
      throw PreconditionError("letter x" + std::to_string(l.index)
                              + " is not a standard generator");
    }
  }
  return reduce_to_normal_form(w);
}

////////////////////////////////////////////////////////////////////////
// String rewriting
////////////////////////////////////////////////////////////////////////

// A second, independent route to the normal form: a rewriting system on
// words applied one redex at a time. Rules, for i < j:
//
//   x_j x_i         -> x_i x_{j+1}
//   x_i^-1 x_j^-1   -> x_{j+1}^-1 x_i^-1
//   x_i^-1 x_j      -> x_{j+1} x_i^-1
//   x_j^-1 x_i      -> x_i x_{j+1}^-1
//   x_i^-1 x_i      -> (empty)
//   x_i u x_i^-1    -> u with every index lowered by one, provided every
//                      index in u is at least i + 2 (u may be empty)
//
// Irreducible words are exactly the normal forms.
enum class RewriteOrder { leftmost, rightmost };

namespace detail {

  // Applies a rule whose redex starts at position p, if any.
  inline bool rewrite_at(Word& w, std::size_t p) {
    Letter const a = w[p];
    if (p + 1 < w.size()) {
      Letter const b = w[p + 1];
      if (!a.is_positive() && b.is_positive()) {
        if (a.index == b.index) {
          w.erase(w.begin() + p, w.begin() + p + 2);
        } else if (a.index < b.index) {
          w[p] = x(b.index + 1);
          w[p + 1] = a;
        } else {
          w[p] = b;
          w[p + 1] = x_inv(a.index + 1);
        }
        return true;
      }
      if (a.is_positive() && b.is_positive() && b.index < a.index) {
        w[p] = b;
        w[p + 1] = x(a.index + 1);
        return true;
      }
      if (!a.is_positive() && !b.is_positive() && a.index < b.index) {
        w[p] = x_inv(b.index + 1);
        w[p + 1] = a;
        return true;
      }
    }
    if (a.is_positive()) {
      for (std::size_t q = p + 1; q < w.size(); ++q) {
        if (w[q] == a.inverse()) {
          for (std::size_t r = p + 1; r < q; ++r) {
            --w[r].index;
          }
          w.erase(w.begin() + q);
          w.erase(w.begin() + p);
          return true;
        }
        if (w[q].index <= a.index + 1) {
          break;
        }
      }
    }
    return false;
  }

}  // namespace detail

// Rewrites until irreducible, always choosing the redex with the leftmost
// (or rightmost) starting position. Throws InvariantError if `max_steps`
// rewrites do not suffice.
inline Word rewrite(Word w,
                    RewriteOrder order,
                    std::size_t max_steps = 10'000'000) {
  for (std::size_t step = 0; step <= max_steps; ++step) {
    bool applied = false;
    if (order == RewriteOrder::leftmost) {
      for (std::size_t p = 0; p < w.size() && !applied; ++p) {
        applied = detail::rewrite_at(w, p);
      }
    } else {
      for (std::size_t p = w.size(); p-- > 0 && !applied;) {
        applied = detail::rewrite_at(w, p);
      }
    }
    if (!applied) {
      return w;
    }
  }
  throw InvariantError("rewriting did not terminate within the step bound");
}

// Reads an irreducible word back as a NormalForm.
inline NormalForm rewrite_to_normal_form(Word const& w, RewriteOrder order) {
  Word const r = rewrite(w, order);
  std::vector<Index> pos, neg;
  for (Letter const& l : r) {
    if (l.is_positive()) {
      if (!neg.empty()) {
        throw InvariantError("irreducible word has a positive letter after a "
                             "negative one");
      }
      pos.push_back(l.index);
    } else {
      neg.insert(neg.begin(), l.index);
    }
  }
  if (!is_normal_form(pos, neg)) {
    throw InvariantError("irreducible word is not a normal form");
  }
  return detail::NormalFormAccess::make(std::move(pos), std::move(neg));
}

////////////////////////////////////////////////////////////////////////
// Text
////////////////////////////////////////////////////////////////////////

namespace detail {

  inline bool is_space(char c) noexcept {
    return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f'
           || c == '\v';
  }

  inline bool is_digit(char c) noexcept { return c >= '0' && c <= '9'; }

  // Bound on a single exponent, so that "x0^999999999999" fails cleanly.
  constexpr std::int64_t max_exponent = 1'000'000;

  inline void parse_token(std::string_view tok, std::size_t at, Word& out) {
    auto fail = [&](char const* why) {
      throw ParseError(why, std::string(tok), at);
    };
    if (tok.empty() || tok[0] != 'x') {
      fail("expected a token of the form x<digits>[^<exponent>]");
    }
    std::size_t p = 1;
    if (p < tok.size() && tok[p] == '-') {
      fail("negative generator index");
    }
    std::size_t const digits_begin = p;
    while (p < tok.size() && is_digit(tok[p])) {
      ++p;
    }
    if (p == digits_begin) {
      fail("missing generator index");
    }
    Index index = 0;
    auto [ptr, ec] = std::from_chars(tok.data() + digits_begin, tok.data() + p,
                                     index);
    if (ec != std::errc{}) {
      fail("generator index out of range");
    }
    std::int64_t exponent = 1;
    if (p < tok.size()) {
      if (tok[p] != '^') {
        fail("unexpected character after generator index");
      }
      ++p;
      bool negative = false;
      if (p < tok.size() && (tok[p] == '-' || tok[p] == '+')) {
        negative = tok[p] == '-';
        ++p;
      }
      if (p == tok.size() || !is_digit(tok[p])) {
        fail("missing exponent");
      }
      std::int64_t magnitude = 0;
      auto [eptr, eec] = std::from_chars(tok.data() + p,
                                         tok.data() + tok.size(), magnitude);
      if (eec != std::errc{} || magnitude > max_exponent) {
        fail("exponent out of range");
      }
      if (eptr != tok.data() + tok.size()) {
        fail("unexpected character in exponent");
      }
      if (magnitude == 0) {
        fail("zero exponent");
      }
      exponent = negative ? -magnitude : magnitude;
    }
    Letter const l{index, exponent > 0 ? Sign::positive : Sign::negative};
    out.insert(out.end(), static_cast<std::size_t>(exponent > 0 ? exponent
                                                                : -exponent),
               l);
  }

}  // namespace detail

// word := "e" | token (WS token)*;  token := "x" digits ("^" signed_nonzero)?
inline Word parse_word(std::string_view text) {
  Word w;
  std::vector<std::pair<std::string_view, std::size_t>> tokens;
  std::size_t p = 0;
  while (p < text.size()) {
    if (detail::is_space(text[p])) {
      ++p;
      continue;
    }
    std::size_t const begin = p;
    while (p < text.size() && !detail::is_space(text[p])) {
      ++p;
    }
    tokens.emplace_back(text.substr(begin, p - begin), begin);
  }
  if (tokens.size() == 1 && tokens[0].first == "e") {
    return w;
  }
  for (auto const& [tok, at] : tokens) {
    if (tok == "e") {
      throw ParseError("identity 'e' must appear alone", std::string(tok), at);
    }
    detail::parse_token(tok, at, w);
  }
  return w;
}

// Runs of one letter collapse to x<i>^<k>; the empty word prints as "e".
inline std::string format_word(Word const& w) {
  if (w.empty()) {
    return "e";
  }
  std::string out;
  for (std::size_t p = 0; p < w.size();) {
    std::size_t q = p;
    while (q < w.size() && w[q] == w[p]) {
      ++q;
    }
    if (!out.empty()) {
      out += ' ';
    }
    out += 'x';
    out += std::to_string(w[p].index);
    auto const run = static_cast<std::int64_t>(q - p);
    std::int64_t const exponent = w[p].is_positive() ? run : -run;
    if (exponent != 1) {
      out += '^';
      out += std::to_string(exponent);
    }
    p = q;
  }
  return out;
}

inline std::string format(NormalForm const& a) { return format_word(a.word()); }

}  // namespace thompson
