#pragma once

// Finite subsets of F as subgraphs of the Cayley graph in the standard
// generators x0, x1: balls, exact densities, class histograms, and the
// finite tools behind removing zero-measured sets from Folner sets.

#include <algorithm>
#include <array>
#include <cstddef>
#include <cstdint>
#include <iterator>
#include <ostream>
#include <random>
#include <span>
#include <string>
#include <thread>
#include <unordered_set>
#include <utility>
#include <vector>

#include <boost/rational.hpp>

#include "thompson/classify.hpp"
#include "thompson/errors.hpp"
#include "thompson/words.hpp"

namespace thompson {

using Rational = boost::rational<std::int64_t>;

// x0, x0^-1, x1, x1^-1.
inline constexpr std::array<Letter, 4> standard_generators{
    x(0), x_inv(0), x(1), x_inv(1)};

// 2m for m = 2 generators.
inline constexpr std::int64_t max_degree = 4;

// A finite set of group elements, kept sorted and duplicate-free.
class ElementSet {
 public:
  using const_iterator = std::vector<NormalForm>::const_iterator;

  ElementSet() = default;

  explicit ElementSet(std::vector<NormalForm> elements)
      : elements_(std::move(elements)) {
    std::sort(elements_.begin(), elements_.end());
    elements_.erase(std::unique(elements_.begin(), elements_.end()),
                    elements_.end());
  }

  ElementSet(std::initializer_list<NormalForm> elements)
      : ElementSet(std::vector<NormalForm>(elements)) {}

  bool contains(NormalForm const& g) const {
    return std::binary_search(elements_.begin(), elements_.end(), g);
  }

  std::size_t size() const noexcept { return elements_.size(); }
  bool empty() const noexcept { return elements_.empty(); }
  const_iterator begin() const noexcept { return elements_.begin(); }
  const_iterator end() const noexcept { return elements_.end(); }
  std::vector<NormalForm> const& elements() const noexcept {
    return elements_;
  }

  friend bool operator==(ElementSet const&, ElementSet const&) = default;

 private:
  std::vector<NormalForm> elements_;
};

inline ElementSet set_union(ElementSet const& a, ElementSet const& b) {
  std::vector<NormalForm> out;
  std::set_union(a.begin(), a.end(), b.begin(), b.end(),
                 std::back_inserter(out));
  return ElementSet(std::move(out));
}

inline ElementSet set_intersection(ElementSet const& a, ElementSet const& b) {
  std::vector<NormalForm> out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(),
                        std::back_inserter(out));
  return ElementSet(std::move(out));
}

inline ElementSet set_difference(ElementSet const& a, ElementSet const& b) {
  std::vector<NormalForm> out;
  std::set_difference(a.begin(), a.end(), b.begin(), b.end(),
                      std::back_inserter(out));
  return ElementSet(std::move(out));
}

inline bool is_subset(ElementSet const& a, ElementSet const& b) {
  return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

struct BallOptions {
  std::size_t element_limit = 5'000'000;
  unsigned workers = 1;
};

// Spheres of radius 0..n around e, each sorted. Frontier products may be
// computed by several workers; the result does not depend on their number.
// Throws ResourceError once more than options.element_limit elements would
// be held.
inline std::vector<std::vector<NormalForm>> ball_layers(
    std::size_t n,
    BallOptions const& options = {}) {
  if (options.element_limit == 0) {
    throw ResourceError("element limit admits no elements", 0);
  }
  std::vector<std::vector<NormalForm>> layers{{NormalForm{}}};
  std::unordered_set<NormalForm, NormalFormHash> seen{NormalForm{}};
  unsigned const workers = std::max(1U, options.workers);

  for (std::size_t r = 1; r <= n; ++r) {
    auto const& frontier = layers.back();
    std::size_t const chunks = std::min<std::size_t>(workers, frontier.size());
    std::vector<std::vector<NormalForm>> found(chunks);
    auto expand = [&](std::size_t c) {
      std::size_t const lo = frontier.size() * c / chunks;
      std::size_t const hi = frontier.size() * (c + 1) / chunks;
      for (std::size_t v = lo; v < hi; ++v) {
        for (Letter const& g : standard_generators) {
          found[c].push_back(multiply_letter(frontier[v], g));
        }
      }
    };
    if (chunks <= 1) {
      expand(0);
    } else {
      std::vector<std::jthread> pool;
      for (std::size_t c = 0; c < chunks; ++c) {
        pool.emplace_back(expand, c);
      }
    }

    std::vector<NormalForm> sphere;
    for (auto& chunk : found) {
      for (NormalForm& h : chunk) {
        if (seen.contains(h)) {
          continue;
        }
        if (seen.size() >= options.element_limit) {
          throw ResourceError("ball exceeds element limit of "
                                  + std::to_string(options.element_limit)
                                  + " after radius " + std::to_string(r - 1),
                              r - 1);
        }
        seen.insert(h);
        sphere.push_back(std::move(h));
      }
    }
    std::sort(sphere.begin(), sphere.end());
    layers.push_back(std::move(sphere));
  }
  return layers;
}

// All elements of word length at most n in x0^{+-1}, x1^{+-1}.
inline ElementSet ball(std::size_t n, BallOptions const& options = {}) {
  std::vector<NormalForm> all;
  for (auto& layer : ball_layers(n, options)) {
    all.insert(all.end(), std::make_move_iterator(layer.begin()),
               std::make_move_iterator(layer.end()));
  }
  return ElementSet(std::move(all));
}

struct SubgraphStats {
  std::int64_t vertex_count = 0;
  std::int64_t oriented_edge_count = 0;
  Rational density;
};

// Number of generators g with v g in S; an edge v -> v g counts at v only.
inline std::int64_t out_degree(ElementSet const& s, NormalForm const& v) {
  std::int64_t deg = 0;
  for (Letter const& g : standard_generators) {
    deg += s.contains(multiply_letter(v, g)) ? 1 : 0;
  }
  return deg;
}

inline SubgraphStats subgraph_density(ElementSet const& s) {
  if (s.empty()) {
    throw PreconditionError("density of an empty set is undefined");
  }
  SubgraphStats stats;
  stats.vertex_count = static_cast<std::int64_t>(s.size());
  for (NormalForm const& v : s) {
    stats.oriented_edge_count += out_degree(s, v);
  }
  stats.density = Rational(stats.oriented_edge_count, stats.vertex_count);
  return stats;
}

using ClassHistogram = std::array<std::size_t, 7>;

inline ClassHistogram class_histogram(ElementSet const& s) {
  ClassHistogram h{};
  for (NormalForm const& g : s) {
    ++h[to_index(class_of(g))];
  }
  return h;
}

// |S n Z| / |S|
inline Rational mu_hat(ElementSet const& s, ElementSet const& z) {
  if (s.empty()) {
    throw PreconditionError("mu_hat needs a nonempty sample set");
  }
  return Rational(static_cast<std::int64_t>(set_intersection(s, z).size()),
                  static_cast<std::int64_t>(s.size()));
}

inline ElementSet drop_classes(ElementSet const& s,
                               std::span<ClassLabel const> classes) {
  std::array<bool, 7> drop{};
  for (ClassLabel c : classes) {
    drop[to_index(c)] = true;
  }
  std::vector<NormalForm> kept;
  for (NormalForm const& g : s) {
    if (!drop[to_index(class_of(g))]) {
      kept.push_back(g);
    }
  }
  return ElementSet(std::move(kept));
}

// { s g : s in S }
inline ElementSet translate_set(ElementSet const& s, NormalForm const& g) {
  std::vector<NormalForm> out;
  out.reserve(s.size());
  for (NormalForm const& v : s) {
    out.push_back(nf_multiply(v, g));
  }
  return ElementSet(std::move(out));
}

// Deleting k of n vertices lowers the density by at most 2m k / n, as
// stated. Each deleted vertex also takes up to 2m oriented edges pointing
// into it, so this can fail: removing e from ball(1) leaves density 0.
inline Rational deletion_bound(Rational const& before,
                               std::size_t n,
                               std::size_t k) {
  if (n == 0) {
    throw PreconditionError("deletion bound needs a nonempty set");
  }
  return before - Rational(max_degree * static_cast<std::int64_t>(k),
                           static_cast<std::int64_t>(n));
}

// The bound that survives the count above: 2 * 2m k / n. Tight on ball(1)
// minus e.
inline Rational corrected_deletion_bound(Rational const& before,
                                         std::size_t n,
                                         std::size_t k) {
  return deletion_bound(before, n, 2 * k);
}

struct DeletionReport {
  Rational before;
  Rational after;
  Rational bound;
  bool holds = false;
  Rational corrected_bound;
  bool corrected_holds = false;
};

inline DeletionReport deletion_bound_check(ElementSet const& s,
                                           ElementSet const& k) {
  if (!is_subset(k, s)) {
    throw PreconditionError("deleted set is not a subset");
  }
  if (k.size() == s.size()) {
    throw PreconditionError("deleting every vertex leaves no density");
  }
  DeletionReport r;
  r.before = subgraph_density(s).density;
  r.after = subgraph_density(set_difference(s, k)).density;
  r.bound = deletion_bound(r.before, s.size(), k.size());
  r.holds = r.after >= r.bound;
  r.corrected_bound = corrected_deletion_bound(r.before, s.size(), k.size());
  r.corrected_holds = r.after >= r.corrected_bound;
  return r;
}

// Random nonempty S inside `within` and random K strictly inside S, for
// exercising deletion_bound_check.
inline std::pair<ElementSet, ElementSet> random_deletion_instance(
    ElementSet const& within,
    std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  double const keep = unit(rng);
  std::vector<NormalForm> s;
  for (NormalForm const& g : within) {
    if (unit(rng) < keep) {
      s.push_back(g);
    }
  }
  if (s.empty()) {
    std::uniform_int_distribution<std::size_t> pick(0, within.size() - 1);
    s.push_back(within.elements()[pick(rng)]);
  }
  double const remove = unit(rng);
  std::vector<NormalForm> k;
  for (NormalForm const& g : s) {
    if (unit(rng) < remove) {
      k.push_back(g);
    }
  }
  if (k.size() == s.size()) {
    k.pop_back();
  }
  return {ElementSet(std::move(s)), ElementSet(std::move(k))};
}

////////////////////////////////////////////////////////////////////////
// CSV and DOT
////////////////////////////////////////////////////////////////////////

inline void write_histogram_csv(std::ostream& out, ClassHistogram const& h) {
  out << "class,count\n";
  for (ClassLabel c : all_classes) {
    out << to_string(c) << ',' << h[to_index(c)] << '\n';
  }
}

struct DensityRow {
  std::string label;
  SubgraphStats stats;
};

inline void write_density_csv(std::ostream& out,
                              std::span<DensityRow const> rows) {
  out << "label,vertices,oriented_edges,density_num,density_den\n";
  for (DensityRow const& r : rows) {
    out << r.label << ',' << r.stats.vertex_count << ','
        << r.stats.oriented_edge_count << ',';
    // an empty set has no density; leave both fields blank
    if (r.stats.vertex_count > 0) {
      out << r.stats.density.numerator() << ','
          << r.stats.density.denominator();
    } else {
      out << ',';
    }
    out << '\n';
  }
}

// One row per element: formatted normal form, word length, class.
inline void write_ball_csv(
    std::ostream& out,
    std::vector<std::vector<NormalForm>> const& layers) {
  out << "element,length,class\n";
  for (std::size_t r = 0; r < layers.size(); ++r) {
    for (NormalForm const& g : layers[r]) {
      out << format(g) << ',' << r << ',' << to_string(class_of(g)) << '\n';
    }
  }
}

// Vertices labelled by normal form; each geometric edge drawn once, as
// v -> v x0 or v -> v x1.
inline void write_subgraph_dot(std::ostream& out, ElementSet const& s) {
  auto const& v = s.elements();
  out << "digraph subgraph {\n";
  for (std::size_t i = 0; i < v.size(); ++i) {
    out << "  n" << i << " [label=\"" << format(v[i]) << "\"];\n";
  }
  for (std::size_t i = 0; i < v.size(); ++i) {
    for (Index gen : {Index{0}, Index{1}}) {
      NormalForm const w = multiply_letter(v[i], x(gen));
      auto it = std::lower_bound(v.begin(), v.end(), w);
      if (it != v.end() && *it == w) {
        out << "  n" << i << " -> n" << (it - v.begin()) << " [label=\"x"
            << gen << "\"];\n";
      }
    }
  }
  out << "}\n";
}

}  // namespace thompson
