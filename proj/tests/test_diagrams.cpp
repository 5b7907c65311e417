#include <random>
#include <sstream>
#include <string>

#include <gtest/gtest.h>

#include "test_support.hpp"
#include "thompson/diagrams.hpp"

namespace thompson {
namespace {

using testing::nf;
using testing::random_canonical;
using testing::random_diagram;
using testing::random_element;

CanonicalDiagram X(Index i) { return atomic(i, Sign::positive); }
CanonicalDiagram X_inv(Index i) { return atomic(i, Sign::negative); }

std::string text(Diagram const& d) { return format_diagram(d); }

bool is_canonical(Diagram const& d) { return !has_dipole(d) && is_trimmed(d); }

TEST(Forest, ParseAndFormat) {
  for (char const* s : {".", "..", "(..)", ".(..)", "((..).)(.(..)).",
                        "(((..)(..))(..))"}) {
    EXPECT_EQ(Forest::parse(s).to_string(), s);
  }
  auto const f = Forest::parse("((..).)(.(..)).");
  EXPECT_EQ(f.roots(), 3U);
  EXPECT_EQ(f.leaves(), 7U);
  EXPECT_EQ(f.carets(), 4U);
  EXPECT_EQ(f.trees().size(), 3U);
  EXPECT_EQ(f.trees()[1].to_string(), "(.(..))");
  EXPECT_EQ(f.cherries(), (std::vector<std::size_t>{0, 4}));
}

TEST(Forest, ParseErrors) {
  for (char const* s : {"", "(.)", "(...)", "(..", "..)", "(x.)", "(()..)"}) {
    EXPECT_THROW(Forest::parse(s), ParseError) << s;
  }
}

TEST(Diagram, ParseErrors) {
  EXPECT_THROW(parse_diagram("(..)"), ParseError);
  EXPECT_THROW(parse_diagram("(..)|."), ParseError);
  EXPECT_THROW(Diagram(Forest::parse(".."), Forest::parse(".")),
               PreconditionError);
}

TEST(Epsilon, Shapes) {
  EXPECT_EQ(text(epsilon(1)), ".|.");
  EXPECT_EQ(text(epsilon(3)), "...|...");
  for (std::size_t k = 1; k < 6; ++k) {
    EXPECT_EQ(cells(epsilon(k)), 0U);
  }
  EXPECT_THROW(epsilon(0), PreconditionError);
  EXPECT_EQ(identity_diagram().diagram(), epsilon(1));
}

TEST(Atomic, Shapes) {
  EXPECT_EQ(text(X(0)), "(..)|..");
  EXPECT_EQ(text(X(1)), ".(..)|...");
  EXPECT_EQ(text(X_inv(1)), "...|.(..)");
  for (Index i = 0; i < 8; ++i) {
    EXPECT_EQ(cells(X(i)), 1U);
    EXPECT_EQ(cells(X_inv(i)), 1U);
    EXPECT_EQ(X(i).top().roots(), i + 1);
    EXPECT_EQ(X(i).top().leaves(), i + 2);
  }
}

TEST(Product, DefiningRelation) {
  auto const lhs = concat_product(X(1), X(0));
  EXPECT_EQ(lhs, concat_product(X(0), X(2)));
  EXPECT_EQ(text(lhs), "(..)(..)|....");
  for (Index j = 1; j <= 12; ++j) {
    for (Index i = 0; i < j; ++i) {
      EXPECT_EQ(concat_product(X(j), X(i)), concat_product(X(i), X(j + 1)));
    }
  }
  EXPECT_NE(concat_product(X(0), X(1)), concat_product(X(1), X(0)));
}

TEST(Product, InverseCancels) {
  EXPECT_EQ(concat_product(X(0), mirror(X(0))), identity_diagram());
  EXPECT_EQ(concat_product(X_inv(3), X(3)), identity_diagram());
}

TEST(Product, IdentityLaw) {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 500; ++trial) {
    auto const d = random_canonical(rng, 12);
    ASSERT_EQ(concat_product(identity_diagram(), d), d);
    ASSERT_EQ(concat_product(d, identity_diagram()), d);
  }
}

TEST(Product, InverseIsMirror) {
  std::mt19937_64 rng(22);
  for (int trial = 0; trial < 500; ++trial) {
    auto const d = random_canonical(rng, 12);
    ASSERT_EQ(concat_product(d, mirror(d)), identity_diagram()) << text(d);
  }
}

TEST(Product, MirrorIsAntiHomomorphism) {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 500; ++trial) {
    auto const a = random_canonical(rng, 10);
    auto const b = random_canonical(rng, 10);
    ASSERT_EQ(mirror(concat_product(a, b)),
              concat_product(mirror(b), mirror(a)));
  }
}

TEST(Product, Associative) {
  std::mt19937_64 rng(24);
  for (int trial = 0; trial < 300; ++trial) {
    auto const a = random_canonical(rng, 10);
    auto const b = random_canonical(rng, 10);
    auto const c = random_canonical(rng, 10);
    ASSERT_EQ(concat_product(concat_product(a, b), c),
              concat_product(a, concat_product(b, c)));
  }
}

TEST(Product, SingleCellChangesCellCountByOne) {
  std::mt19937_64 rng(25);
  for (int trial = 0; trial < 1000; ++trial) {
    auto const d = random_canonical(rng, 12);
    for (Index i = 0; i < 4; ++i) {
      for (Sign s : {Sign::positive, Sign::negative}) {
        auto const p = concat_product(d, atomic(i, s));
        bool const cancels = structurally_right_divisible(d, i, -s);
        ASSERT_EQ(cells(p), cancels ? cells(d) - 1 : cells(d) + 1)
            << text(d) << " times X" << i << (s == Sign::negative ? "^-1" : "");
      }
    }
  }
}

TEST(Product, OutputsAreCanonical) {
  std::mt19937_64 rng(26);
  for (int trial = 0; trial < 1000; ++trial) {
    auto const p = concat_product(random_diagram(rng, 10),
                                  random_diagram(rng, 10));
    ASSERT_TRUE(is_canonical(p)) << text(p);
  }
}

TEST(Mirror, Involution) {
  EXPECT_EQ(mirror(X(2)), X_inv(2));
  EXPECT_EQ(mirror(epsilon(4)), epsilon(4));
  auto const d = nf_to_diagram(nf("x0 x1"));
  EXPECT_EQ(mirror(mirror(d)), d);
}

TEST(Sum, Examples) {
  EXPECT_EQ(sum(epsilon(2), epsilon(3)), epsilon(5));
  auto const padded = sum(X(0), epsilon(1));
  EXPECT_EQ(text(padded), "(..).|...");
  EXPECT_EQ(padded.top().roots(), 2U);
  EXPECT_EQ(padded.bottom().roots(), 3U);
  EXPECT_EQ(cells(sum(X(1), X_inv(2))), 2U);
}

TEST(Sum, Associative) {
  std::mt19937_64 rng(27);
  for (int trial = 0; trial < 200; ++trial) {
    auto const a = random_diagram(rng, 6);
    auto const b = random_diagram(rng, 6);
    auto const c = random_diagram(rng, 6);
    ASSERT_EQ(sum(sum(a, b), c), sum(a, sum(b, c)));
    ASSERT_EQ(cells(sum(a, b)), cells(a) + cells(b));
  }
}

TEST(ReduceDipoles, SingleDipole) {
  EXPECT_EQ(reduce_dipoles(parse_diagram("(..)|(..)")), epsilon(1));
}

TEST(ReduceDipoles, CascadingDipoles) {
  EXPECT_EQ(reduce_dipoles(parse_diagram("((..).)|((..).)")), epsilon(1));
  // carets over different leaf pairs never cancel
  EXPECT_EQ(reduce_dipoles(parse_diagram("((..).)|(.(..))")),
            parse_diagram("((..).)|(.(..))"));
  EXPECT_EQ(reduce_dipoles(parse_diagram("(.(..))|.(..)")),
            parse_diagram("(..)|.."));
}

TEST(ReduceDipoles, CanonicalIsFixed) {
  std::mt19937_64 rng(28);
  for (int trial = 0; trial < 300; ++trial) {
    auto const d = random_canonical(rng, 12);
    ASSERT_EQ(reduce_dipoles(d), d.diagram());
  }
}

TEST(ReduceDipoles, OrderIndependent) {
  std::mt19937_64 rng(29);
  int with_dipoles = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    auto const d = random_diagram(rng, 10);
    with_dipoles += has_dipole(d) ? 1 : 0;
    auto const left = reduce_dipoles(d, DipoleOrder::leftmost);
    auto const right = reduce_dipoles(d, DipoleOrder::rightmost);
    ASSERT_EQ(left, right) << text(d);
    ASSERT_FALSE(has_dipole(left));
    ASSERT_EQ((cells(d) - cells(left)) % 2, 0U);
  }
  EXPECT_GT(with_dipoles, 200);
}

TEST(Canonicalize, Examples) {
  EXPECT_EQ(canonicalize(epsilon(5)), identity_diagram());
  EXPECT_EQ(canonicalize(sum(X(0), epsilon(1))), X(0));
  EXPECT_EQ(canonicalize(X(0)), X(0));
  EXPECT_THROW(canonicalize(parse_diagram("(..)|(..)")), PreconditionError);
  EXPECT_THROW(CanonicalDiagram::from_diagram(epsilon(2)), PreconditionError);
}

TEST(NormalFormToDiagram, Atomic) {
  for (Index i = 0; i < 10; ++i) {
    EXPECT_EQ(nf_to_diagram(reduce_to_normal_form({x(i)})), X(i));
    EXPECT_EQ(nf_to_diagram(reduce_to_normal_form({x_inv(i)})), X_inv(i));
  }
}

TEST(NormalFormToDiagram, RelationSpellings) {
  EXPECT_EQ(nf_to_diagram(nf("x0 x2")), concat_product(X(1), X(0)));
  EXPECT_EQ(nf_to_diagram(nf("x1 x0")), nf_to_diagram(nf("x0 x2")));
}

TEST(NormalFormToDiagram, NineteenCellExample) {
  auto const g = nf("x0^3 x1 x3 x8 x11^2 x12 x16 x17 x18 x17^-2 x11^-1 "
                    "x5^-3 x0^-1");
  auto const d = nf_to_diagram(g);
  EXPECT_EQ(cells(d), 19U);
  EXPECT_EQ(d.top().carets(), 12U);
  EXPECT_EQ(d.bottom().carets(), 7U);
  EXPECT_EQ(diagram_to_nf(d), g);
}

TEST(NormalFormToDiagram, CellsEqualLength) {
  std::mt19937_64 rng(30);
  for (int trial = 0; trial < 3000; ++trial) {
    auto const a = random_element(rng, 30, 8);
    auto const d = nf_to_diagram(a);
    ASSERT_EQ(cells(d), a.length()) << format(a);
    ASSERT_EQ(d.top().carets(), a.positive().size());
    ASSERT_TRUE(is_canonical(d));
  }
}

TEST(DiagramToNormalForm, Examples) {
  EXPECT_EQ(diagram_to_nf(X(2)), nf("x2"));
  EXPECT_EQ(diagram_to_nf(nf_to_diagram(nf("x2 x1^-1 x0^-1"))),
            nf("x2 x1^-1 x0^-1"));
  EXPECT_EQ(diagram_to_nf(concat_product(X(1), X(0))), nf("x0 x2"));
  EXPECT_EQ(diagram_to_nf(identity_diagram()), NormalForm{});
}

TEST(DiagramToNormalForm, RoundtripFromDiagrams) {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 3000; ++trial) {
    auto const d = random_canonical(rng, 16);
    auto const a = diagram_to_nf(d);
    ASSERT_EQ(nf_to_diagram(a), d) << text(d);
    ASSERT_EQ(a.length(), cells(d));
  }
}

TEST(Representation, ProductsAgreeWithNormalForms) {
  std::mt19937_64 rng(32);
  for (int trial = 0; trial < 3000; ++trial) {
    auto const a = random_element(rng);
    auto const b = random_element(rng);
    ASSERT_EQ(diagram_to_nf(concat_product(nf_to_diagram(a), nf_to_diagram(b))),
              nf_multiply(a, b))
        << format(a) << " * " << format(b);
  }
}

TEST(StructuralDivisibility, MatchesPeelingDefinition) {
  // X0 is divisible by X0 only; x2 x0^-1 by X0^-1 and X1.
  auto const d = nf_to_diagram(nf("x2 x0^-1"));
  EXPECT_TRUE(structurally_right_divisible(d, 0, Sign::negative));
  EXPECT_TRUE(structurally_right_divisible(d, 1, Sign::positive));
  EXPECT_FALSE(structurally_right_divisible(d, 0, Sign::positive));
  EXPECT_FALSE(structurally_right_divisible(d, 1, Sign::negative));
  EXPECT_TRUE(structurally_right_divisible(X(0), 0, Sign::positive));
  EXPECT_FALSE(structurally_right_divisible(X(0), 1, Sign::positive));
}

TEST(Dot, DrawsEveryCellOnce) {
  std::ostringstream out;
  write_diagram_dot(out, nf_to_diagram(nf("x2 x0^-1")));
  std::string const dot = out.str();
  EXPECT_NE(dot.find("graph diagram {"), std::string::npos);
  // "..(..)|(..).." has four leaves, so five vertices and four line edges.
  EXPECT_NE(dot.find("v4 [pos=\"4,0!\"]"), std::string::npos);
  EXPECT_EQ(dot.find("v5"), std::string::npos);
  EXPECT_NE(dot.find("v2 -- v4 [tailport=n, headport=n]"), std::string::npos);
  EXPECT_NE(dot.find("v0 -- v2 [tailport=s, headport=s, style=dashed]"),
            std::string::npos);
}

}  // namespace
}  // namespace thompson
