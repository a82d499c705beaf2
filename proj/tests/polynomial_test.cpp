#include <gtest/gtest.h>

#include <random>

#include "koszulab/poly_io.hpp"

using namespace koszulab;

namespace {
Ring<Rational> qxy() { return Ring<Rational>::polynomial(FieldDescriptor::rationals(), {"x", "y"}); }
}  // namespace

TEST(Polynomial, ParseLeadingTerm) {
  auto r = qxy();
  auto f = parse_poly("x^2*y - 3", r);
  EXPECT_EQ(f.size(), 2U);
  EXPECT_EQ(format_monomial(f.leading_monomial(), *r.descriptor()), "x^2*y");
  EXPECT_EQ(format_poly(f), "x^2*y - 3");
}

TEST(Polynomial, FormatCanonicalizes) {
  auto r = qxy();
  EXPECT_EQ(format_poly(parse_poly("y+x", r)), "x + y");
  EXPECT_EQ(format_poly(parse_poly("-1/2*y^2 + 3/4 - x*x", r)), "-x^2 - 1/2*y^2 + 3/4");
  EXPECT_EQ(format_poly(parse_poly("(x+y)^2 - 2*x*y", r)), "x^2 + y^2");
  EXPECT_EQ(format_poly(parse_poly("x - x", r)), "0");
}

TEST(Polynomial, ParseErrors) {
  auto r = qxy();
  EXPECT_THROW(parse_poly("x + z", r), UnknownVariable);
  try {
    parse_poly("x + * y", r);
    FAIL();
  } catch (const SyntaxError& e) {
    EXPECT_EQ(e.position(), 4U);
  }
  EXPECT_THROW(parse_poly("x^70000", r), DegreeOverflow);
  EXPECT_THROW(parse_poly("1/0", r), DivisionByZero);
  EXPECT_THROW(parse_poly("(x", r), SyntaxError);
}

TEST(Polynomial, Arithmetic) {
  auto r = qxy();
  auto x = r.variable("x"), y = r.variable("y");
  EXPECT_EQ((x + y) * (x - y), x * x - y * y);
  EXPECT_EQ(parse_poly("x^2*y + y^2", r).degree(), 3);
  EXPECT_EQ(r.zero().degree(), kMinusInfinity);
  EXPECT_EQ(format_monomial((x + y * y).leading_monomial(), *r.descriptor()), "y^2");
  EXPECT_THROW(r.zero().leading_term(), ZeroElement);
}

TEST(Polynomial, LexOrder) {
  auto r = Ring<Rational>::polynomial(FieldDescriptor::rationals(), {"x", "y"}, MonomialOrder::Lex);
  EXPECT_EQ(format_poly(parse_poly("y^5 + x", r)), "x + y^5");
}

TEST(Polynomial, MixedRings) {
  auto a = qxy();
  auto b = Ring<Rational>::polynomial(FieldDescriptor::rationals(), {"x", "z"});
  EXPECT_THROW(a.variable("x") + b.variable("x"), MixedRings);
}

TEST(Polynomial, RingValidation) {
  EXPECT_THROW(Ring<Rational>::polynomial(FieldDescriptor::rationals(), {"x", "x"}), InvalidArgument);
  EXPECT_THROW(Ring<Zp>::polynomial(FieldDescriptor::rationals(), {"x"}), MixedFields);
}

TEST(Polynomial, WeightedDegree) {
  auto r = Ring<Rational>::polynomial(FieldDescriptor::rationals(), {"x", "y"}, MonomialOrder::GRevLex, {2, 3});
  EXPECT_EQ(parse_poly("x*y + x^2", r).degree(), 5);
  EXPECT_EQ(format_poly(parse_poly("x^2 + x*y", r)), "x*y + x^2");
}

namespace {
Poly<Zp> random_poly(const Ring<Zp>& r, std::mt19937_64& rng, int terms, int maxdeg) {
  std::uniform_int_distribution<int> e(0, maxdeg);
  std::uniform_int_distribution<long> c(-50, 50);
  std::vector<Term<Zp>> ts;
  for (int i = 0; i < terms; ++i) {
    std::vector<std::uint32_t> exps;
    for (std::size_t v = 0; v < r.num_variables(); ++v) exps.push_back(static_cast<std::uint32_t>(e(rng)));
    ts.push_back({r.monomial(exps), r.scalar(c(rng))});
  }
  return Poly<Zp>::from_terms(r.descriptor(), ts);
}
}  // namespace

TEST(PolynomialProperty, RingAxiomsAndLeadingTerms) {
  std::mt19937_64 rng(7);
  for (auto order : {MonomialOrder::GRevLex, MonomialOrder::Lex}) {
    auto r = Ring<Zp>::polynomial(FieldDescriptor::prime(32003), {"x", "y", "z"}, order);
    for (int i = 0; i < 300; ++i) {
      auto f = random_poly(r, rng, 4, 3), g = random_poly(r, rng, 4, 3), h = random_poly(r, rng, 3, 3);
      ASSERT_EQ((f * g) * h, f * (g * h));
      ASSERT_EQ(f * (g + h), f * g + f * h);
      ASSERT_EQ(f * g, g * f);
      if (!f.is_zero() && !g.is_zero()) {
        ASSERT_EQ((f * g).leading_monomial(), f.leading_monomial() * g.leading_monomial());
      }
    }
  }
}

TEST(PolynomialProperty, FormatParseRoundTrip) {
  std::mt19937_64 rng(8);
  auto r = Ring<Zp>::polynomial(FieldDescriptor::prime(32003), {"x", "y", "z"});
  for (int i = 0; i < 500; ++i) {
    auto f = random_poly(r, rng, 5, 4);
    ASSERT_EQ(parse_poly(format_poly(f), r), f);
  }
  auto q = qxy();
  auto f = parse_poly("-7/3*x^3*y + 22/5*y - 1", q);
  EXPECT_EQ(parse_poly(format_poly(f), q), f);
}
