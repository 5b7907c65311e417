#pragma once

// Canonical semigroup diagrams over <x | x^2 = x>, stored in factored form:
// a top forest of (x, x^2)-cells followed by the mirror image of a bottom
// forest. Each caret is one cell; the leaves of the two forests are the
// shared interface path.
//
// Text format: leaf ".", caret "(" left right ")", a forest is its trees
// written one after another, and a diagram is top "|" bottom. For example
// X0 = "(..)|.." and X1 = ".(..)|...".

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <iterator>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "thompson/errors.hpp"
#include "thompson/words.hpp"

namespace thompson {

enum class Node : std::uint8_t { leaf, caret };

namespace detail {

  // Index one past the end of the subtree whose preorder code starts at p.
  inline std::size_t subtree_end(std::span<Node const> code, std::size_t p) {
    std::size_t need = 1;
    while (need != 0) {
      if (p >= code.size()) {
        throw InvariantError("truncated tree code");
      }
      need += code[p] == Node::caret ? 1 : -1;
      ++p;
    }
    return p;
  }

  inline void append_text(std::span<Node const> code, std::string& out) {
    // Carets close once both children have been written.
    std::vector<int> pending;
    for (Node n : code) {
      if (n == Node::caret) {
        out += '(';
        pending.push_back(2);
        continue;
      }
      out += '.';
      while (!pending.empty() && --pending.back() == 0) {
        pending.pop_back();
        out += ')';
      }
    }
  }

}  // namespace detail

// An ordered binary tree, kept as its preorder code.
class Tree {
 public:
  // A single leaf.
  Tree() : code_{Node::leaf} {}

  static Tree caret(Tree const& left, Tree const& right) {
    Tree t;
    t.code_.clear();
    t.code_.reserve(1 + left.code_.size() + right.code_.size());
    t.code_.push_back(Node::caret);
    t.code_.insert(t.code_.end(), left.code_.begin(), left.code_.end());
    t.code_.insert(t.code_.end(), right.code_.begin(), right.code_.end());
    return t;
  }

  // Throws InvariantError unless `code` is exactly one complete tree.
  static Tree from_code(std::vector<Node> code) {
    if (code.empty() || detail::subtree_end(code, 0) != code.size()) {
      throw InvariantError("code is not a single tree");
    }
    Tree t;
    t.code_ = std::move(code);
    return t;
  }

  bool is_leaf() const noexcept { return code_.size() == 1; }
  std::size_t carets() const noexcept { return code_.size() / 2; }
  std::size_t leaves() const noexcept { return carets() + 1; }
  std::span<Node const> code() const noexcept { return code_; }

  std::string to_string() const {
    std::string out;
    detail::append_text(code_, out);
    return out;
  }

  friend bool operator==(Tree const&, Tree const&) = default;

 private:
  std::vector<Node> code_;
};

// A nonempty ordered sequence of trees, kept as the concatenation of their
// preorder codes. Leaves are numbered left to right from 0.
class Forest {
 public:
  // A single leaf.
  Forest() : code_{Node::leaf} {}

  // k single-leaf trees; k must be positive.
  static Forest trivial(std::size_t k) {
    if (k == 0) {
      throw PreconditionError("a forest needs at least one tree");
    }
    Forest f;
    f.code_.assign(k, Node::leaf);
    return f;
  }

  static Forest from_trees(std::span<Tree const> trees) {
    if (trees.empty()) {
      throw PreconditionError("a forest needs at least one tree");
    }
    Forest f;
    f.code_.clear();
    for (Tree const& t : trees) {
      f.code_.insert(f.code_.end(), t.code().begin(), t.code().end());
    }
    return f;
  }

  // Throws ParseError on anything but a nonempty sequence of trees.
  static Forest parse(std::string_view text, std::size_t offset = 0) {
    Forest f;
    f.code_.clear();
    std::vector<int> pending;
    for (std::size_t p = 0; p < text.size(); ++p) {
      char const c = text[p];
      if (c == '(') {
        if (!pending.empty() && pending.back() == 0) {
          throw ParseError("caret with more than two children",
                           std::string(1, c), offset + p);
        }
        if (!pending.empty()) {
          --pending.back();
        }
        f.code_.push_back(Node::caret);
        pending.push_back(2);
      } else if (c == '.') {
        if (!pending.empty()) {
          if (pending.back() == 0) {
            throw ParseError("caret with more than two children",
                             std::string(1, c), offset + p);
          }
          --pending.back();
        }
        f.code_.push_back(Node::leaf);
      } else if (c == ')') {
        if (pending.empty() || pending.back() != 0) {
          throw ParseError("caret must have exactly two children",
                           std::string(1, c), offset + p);
        }
        pending.pop_back();
      } else {
        throw ParseError("unexpected character in forest", std::string(1, c),
                         offset + p);
      }
    }
    if (!pending.empty()) {
      throw ParseError("unterminated caret", std::string(text), offset);
    }
    if (f.code_.empty()) {
      throw ParseError("empty forest", std::string(text), offset);
    }
    return f;
  }

  std::span<Node const> code() const noexcept { return code_; }

  std::size_t carets() const noexcept {
    return static_cast<std::size_t>(
        std::count(code_.begin(), code_.end(), Node::caret));
  }
  std::size_t leaves() const noexcept { return code_.size() - carets(); }
  std::size_t roots() const noexcept { return leaves() - carets(); }

  // Code position where each tree starts.
  std::vector<std::size_t> root_positions() const {
    std::vector<std::size_t> starts;
    for (std::size_t p = 0; p < code_.size();
         p = detail::subtree_end(code_, p)) {
      starts.push_back(p);
    }
    return starts;
  }

  std::vector<Tree> trees() const {
    std::vector<Tree> out;
    for (std::size_t p = 0; p < code_.size();) {
      std::size_t const q = detail::subtree_end(code_, p);
      out.push_back(Tree::from_code({code_.begin() + p, code_.begin() + q}));
      p = q;
    }
    return out;
  }

  // Code position of leaf l.
  std::size_t leaf_position(std::size_t l) const {
    for (std::size_t p = 0; p < code_.size(); ++p) {
      if (code_[p] == Node::leaf && l-- == 0) {
        return p;
      }
    }
    throw InvariantError("leaf index out of range");
  }

  // Replaces leaf l with a caret over two leaves.
  void split_leaf(std::size_t l) {
    std::size_t const p = leaf_position(l);
    code_[p] = Node::caret;
    code_.insert(code_.begin() + static_cast<std::ptrdiff_t>(p) + 1, 2,
                 Node::leaf);
  }

  // Leaf indices l such that leaves l and l+1 hang from a single caret.
  std::vector<std::size_t> cherries() const {
    std::vector<std::size_t> out;
    std::size_t leaves_before = 0;
    for (std::size_t p = 0; p < code_.size(); ++p) {
      if (code_[p] == Node::leaf) {
        ++leaves_before;
      } else if (p + 2 < code_.size() && code_[p + 1] == Node::leaf
                 && code_[p + 2] == Node::leaf) {
        out.push_back(leaves_before);
      }
    }
    return out;
  }

  // Collapses the caret over leaves l and l+1 into a single leaf.
  void merge_cherry(std::size_t l) {
    std::size_t const p = leaf_position(l);
    if (p == 0 || code_[p - 1] != Node::caret || p + 1 >= code_.size()
        || code_[p + 1] != Node::leaf) {
      throw InvariantError("no caret over leaves " + std::to_string(l)
                           + " and " + std::to_string(l + 1));
    }
    code_.erase(code_.begin() + static_cast<std::ptrdiff_t>(p) - 1,
                code_.begin() + static_cast<std::ptrdiff_t>(p) + 1);
  }

  // Removes the root caret of tree t, leaving its two subtrees as trees.
  void split_root(std::size_t t) {
    auto const starts = root_positions();
    if (t >= starts.size() || code_[starts[t]] != Node::caret) {
      throw InvariantError("tree " + std::to_string(t) + " is not a caret");
    }
    code_.erase(code_.begin() + static_cast<std::ptrdiff_t>(starts[t]));
  }

  void append(Forest const& other) {
    code_.insert(code_.end(), other.code_.begin(), other.code_.end());
  }

  bool last_tree_is_leaf() const {
    return root_positions().back() == code_.size() - 1;
  }

  void pop_last_leaf() {
    if (code_.size() == 1 || !last_tree_is_leaf()) {
      throw InvariantError("cannot drop the last tree of this forest");
    }
    code_.pop_back();
  }

  std::string to_string() const {
    std::string out;
    detail::append_text(code_, out);
    return out;
  }

  friend bool operator==(Forest const&, Forest const&) = default;
  friend auto operator<=>(Forest const& a, Forest const& b) {
    return std::lexicographical_compare_three_way(
        a.code_.begin(), a.code_.end(), b.code_.begin(), b.code_.end());
  }

 private:
  std::vector<Node> code_;
};

// An (x^p, x^q)-diagram with p = top.roots() and q = bottom.roots().
class Diagram {
 public:
  Diagram() = default;

  Diagram(Forest top, Forest bottom)
      : top_(std::move(top)), bottom_(std::move(bottom)) {
    if (top_.leaves() != bottom_.leaves()) {
      throw PreconditionError("top and bottom forests have different leaf "
                              "counts");
    }
  }

  Forest const& top() const noexcept { return top_; }
  Forest const& bottom() const noexcept { return bottom_; }
  std::size_t leaves() const noexcept { return top_.leaves(); }

  // Splits interface leaf l in both forests, inserting a dipole.
  void insert_dipole(std::size_t l) {
    top_.split_leaf(l);
    bottom_.split_leaf(l);
  }

  // Cancels the dipole formed by the carets over leaves l, l+1.
  void cancel_dipole(std::size_t l) {
    top_.merge_cherry(l);
    bottom_.merge_cherry(l);
  }

  void pad(std::size_t k) {
    top_.append(Forest::trivial(k));
    bottom_.append(Forest::trivial(k));
  }

  void drop_trailing_edge() {
    top_.pop_last_leaf();
    bottom_.pop_last_leaf();
  }

  Forest& mutable_top() noexcept { return top_; }
  Forest& mutable_bottom() noexcept { return bottom_; }

  friend bool operator==(Diagram const&, Diagram const&) = default;
  friend auto operator<=>(Diagram const&, Diagram const&) = default;

 private:
  Forest top_;
  Forest bottom_;
};

inline std::size_t cells(Diagram const& d) {
  return d.top().carets() + d.bottom().carets();
}

// Leaf positions k where both forests have a caret over leaves k and k+1.
inline std::vector<std::size_t> dipoles(Diagram const& d) {
  auto const t = d.top().cherries();
  auto const b = d.bottom().cherries();
  std::vector<std::size_t> out;
  std::set_intersection(t.begin(), t.end(), b.begin(), b.end(),
                        std::back_inserter(out));
  return out;
}

inline bool has_dipole(Diagram const& d) { return !dipoles(d).empty(); }

// Unless d is the identity, the two forests do not both end in a single
// leaf.
inline bool is_trimmed(Diagram const& d) {
  return d.leaves() == 1 || !d.top().last_tree_is_leaf()
         || !d.bottom().last_tree_is_leaf();
}

// A reduced, trimmed diagram: the unique finite representative of an
// element of F.
class CanonicalDiagram {
 public:
  // The identity, eps(x).
  CanonicalDiagram() = default;

  // Throws PreconditionError if d has a dipole or a trimmable common suffix.
  static CanonicalDiagram from_diagram(Diagram d) {
    if (has_dipole(d)) {
      throw PreconditionError("diagram has a dipole");
    }
    if (!is_trimmed(d)) {
      throw PreconditionError("diagram ends in a common trailing edge");
    }
    return CanonicalDiagram(std::move(d));
  }

  Diagram const& diagram() const noexcept { return d_; }
  operator Diagram const&() const noexcept { return d_; }
  Forest const& top() const noexcept { return d_.top(); }
  Forest const& bottom() const noexcept { return d_.bottom(); }

  friend bool operator==(CanonicalDiagram const&,
                         CanonicalDiagram const&) = default;
  friend auto operator<=>(CanonicalDiagram const&,
                          CanonicalDiagram const&) = default;

 private:
  explicit CanonicalDiagram(Diagram d) : d_(std::move(d)) {}
  Diagram d_;
};

// eps(x^k): k edges, no cells. Only k = 1 is canonical.
inline Diagram epsilon(std::size_t k) {
  if (k == 0) {
    throw PreconditionError("epsilon needs a nonempty base word");
  }
  return Diagram(Forest::trivial(k), Forest::trivial(k));
}

inline CanonicalDiagram identity_diagram() { return {}; }

inline Diagram mirror(Diagram const& d) { return Diagram(d.bottom(), d.top()); }

// Mirroring preserves both canonical invariants.
inline CanonicalDiagram mirror(CanonicalDiagram const& d) {
  return CanonicalDiagram::from_diagram(mirror(d.diagram()));
}

inline Diagram sum(Diagram const& a, Diagram const& b) {
  Forest top = a.top();
  Forest bottom = a.bottom();
  top.append(b.top());
  bottom.append(b.bottom());
  return Diagram(std::move(top), std::move(bottom));
}

// X_i for Sign::positive: i edges, then an (x, x^2)-cell; X_i^-1 is its
// mirror image.
inline CanonicalDiagram atomic(Index i, Sign sign) {
  std::vector<Tree> top(i, Tree{});
  top.push_back(Tree::caret(Tree{}, Tree{}));
  Diagram d(Forest::from_trees(top), Forest::trivial(i + 2));
  return CanonicalDiagram::from_diagram(sign == Sign::positive ? d : mirror(d));
}

enum class DipoleOrder { leftmost, rightmost };

// Cancels dipoles one at a time until none remain.
inline Diagram reduce_dipoles(Diagram d,
                              DipoleOrder order = DipoleOrder::leftmost) {
  for (auto found = dipoles(d); !found.empty(); found = dipoles(d)) {
    d.cancel_dipole(order == DipoleOrder::leftmost ? found.front()
                                                   : found.back());
  }
  return d;
}

// Drops the common trailing edges. Throws PreconditionError if d has a
// dipole.
inline CanonicalDiagram canonicalize(Diagram d) {
  if (has_dipole(d)) {
    throw PreconditionError("canonicalize requires a diagram without dipoles");
  }
  while (!is_trimmed(d)) {
    d.drop_trailing_edge();
  }
  return CanonicalDiagram::from_diagram(std::move(d));
}

// Concatenates d1 over d2 after padding the narrower interface with edges.
// The bottom of d1 and the top of d2 are brought to a common refinement by
// inserting dipoles at the leftmost disagreement until the two forests
// coincide; the outer forests then form the product, which is reduced and
// trimmed.
inline CanonicalDiagram concat_product(Diagram d1, Diagram d2) {
  std::size_t const q = d1.bottom().roots();
  std::size_t const s = d2.top().roots();
  if (q < s) {
    d1.pad(s - q);
  } else if (s < q) {
    d2.pad(q - s);
  }

  std::size_t p = 0;
  std::size_t leaves_before = 0;
  for (;;) {
    auto const lower = d1.bottom().code();
    auto const upper = d2.top().code();
    while (p < lower.size() && p < upper.size() && lower[p] == upper[p]) {
      leaves_before += lower[p] == Node::leaf ? 1 : 0;
      ++p;
    }
    if (p == lower.size() && p == upper.size()) {
      break;
    }
    if (p == lower.size() || p == upper.size()) {
      throw InvariantError("interfaces with equal root counts diverged");
    }
    if (lower[p] == Node::leaf) {
      d1.insert_dipole(leaves_before);
    } else {
      d2.insert_dipole(leaves_before);
    }
  }

  return canonicalize(reduce_dipoles(Diagram(d1.top(), d2.bottom())));
}

// Right divisibility by X_i^sign read off the forests directly: by X_i^-1
// when bottom tree i is a caret; by X_i when bottom trees i and i+1 are the
// single leaves l and l+1 and the top forest has a caret over exactly them.
inline bool structurally_right_divisible(Diagram const& d,
                                         Index i,
                                         Sign sign) {
  auto const& code = d.bottom().code();
  auto const starts = d.bottom().root_positions();
  if (sign == Sign::negative) {
    return i < starts.size() && code[starts[i]] == Node::caret;
  }
  if (i + 1 >= starts.size() || code[starts[i]] != Node::leaf
      || code[starts[i + 1]] != Node::leaf) {
    return false;
  }
  auto const leaf = static_cast<std::size_t>(
      std::count(code.begin(), code.begin() + static_cast<std::ptrdiff_t>(
                                                  starts[i]),
                 Node::leaf));
  auto const cherries = d.top().cherries();
  return std::binary_search(cherries.begin(), cherries.end(), leaf);
}

// Product of the atomic diagrams of the letters of a, left to right.
inline CanonicalDiagram nf_to_diagram(NormalForm const& a) {
  CanonicalDiagram d;
  for (Letter const& l : a.word()) {
    d = concat_product(d, atomic(l.index, l.sign));
  }
  return d;
}

// Peels atomic right divisors: first X_j^-1 with the smallest j, repeatedly,
// then X_i with the largest i. The peeled indices come out in normal-form
// order.
inline NormalForm diagram_to_nf(CanonicalDiagram const& canonical) {
  Diagram d = canonical.diagram();
  std::vector<Index> neg;
  for (;;) {
    auto const starts = d.bottom().root_positions();
    auto const code = d.bottom().code();
    auto it = std::find_if(starts.begin(), starts.end(), [&](std::size_t p) {
      return code[p] == Node::caret;
    });
    if (it == starts.end()) {
      break;
    }
    auto const j = static_cast<Index>(it - starts.begin());
    d.mutable_bottom().split_root(j);
    neg.push_back(j);
  }

  std::vector<Index> pos;
  while (d.top().carets() != 0) {
    auto const cherries = d.top().cherries();
    if (cherries.empty()) {
      throw InvariantError("nonempty positive diagram has no caret to peel");
    }
    Index const i = cherries.back();
    d.mutable_top().merge_cherry(i);
    d.mutable_bottom().pop_last_leaf();
    pos.push_back(i);
  }
  std::reverse(pos.begin(), pos.end());

  if (!is_normal_form(pos, neg)) {
    throw InvariantError("peeled divisors do not form a normal form");
  }
  return detail::NormalFormAccess::make(std::move(pos), std::move(neg));
}

////////////////////////////////////////////////////////////////////////
// Text and DOT
////////////////////////////////////////////////////////////////////////

inline std::string format_diagram(Diagram const& d) {
  return d.top().to_string() + "|" + d.bottom().to_string();
}

inline Diagram parse_diagram(std::string_view text) {
  auto const bar = text.find('|');
  if (bar == std::string_view::npos) {
    throw ParseError("diagram needs top|bottom", std::string(text), 0);
  }
  Forest top = Forest::parse(text.substr(0, bar));
  Forest bottom = Forest::parse(text.substr(bar + 1), bar + 1);
  if (top.leaves() != bottom.leaves()) {
    throw ParseError("top and bottom have different leaf counts",
                     std::string(text), 0);
  }
  return Diagram(std::move(top), std::move(bottom));
}

namespace detail {

  // Vertex span [first, last] of every caret, in preorder.
  inline std::vector<std::pair<std::size_t, std::size_t>> caret_spans(
      Forest const& f) {
    std::vector<std::pair<std::size_t, std::size_t>> spans;
    auto const code = f.code();
    std::size_t leaf = 0;
    // Each open caret records its span slot and its left vertex.
    struct Open {
      std::size_t slot;
      int remaining;
    };
    std::vector<Open> open;
    for (Node n : code) {
      if (n == Node::caret) {
        spans.emplace_back(leaf, leaf);
        open.push_back({spans.size() - 1, 2});
        continue;
      }
      ++leaf;
      while (!open.empty() && --open.back().remaining == 0) {
        spans[open.back().slot].second = leaf;
        open.pop_back();
      }
    }
    return spans;
  }

}  // namespace detail

// Plane-graph rendering: interface vertices on a horizontal line, top-forest
// cells as arcs above it and bottom-forest cells as dashed arcs below.
inline void write_diagram_dot(std::ostream& out, Diagram const& d) {
  std::size_t const n = d.leaves();
  out << "graph diagram {\n";
  out << "  layout=neato;\n  splines=curved;\n  node [shape=point];\n";
  for (std::size_t v = 0; v <= n; ++v) {
    out << "  v" << v << " [pos=\"" << v << ",0!\"];\n";
  }
  for (std::size_t v = 0; v < n; ++v) {
    out << "  v" << v << " -- v" << v + 1 << ";\n";
  }
  for (auto [a, b] : detail::caret_spans(d.top())) {
    out << "  v" << a << " -- v" << b << " [tailport=n, headport=n];\n";
  }
  for (auto [a, b] : detail::caret_spans(d.bottom())) {
    out << "  v" << a << " -- v" << b
        << " [tailport=s, headport=s, style=dashed];\n";
  }
  out << "}\n";
}

}  // namespace thompson
