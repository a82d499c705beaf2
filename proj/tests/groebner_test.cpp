#include <gtest/gtest.h>

#include <random>

#include "koszulab/ideal.hpp"
#include "support/oracle.hpp"

using namespace koszulab;

namespace {
Ring<Rational> qring(std::vector<std::string> vars, MonomialOrder o = MonomialOrder::GRevLex) {
  return Ring<Rational>::polynomial(FieldDescriptor::rationals(), std::move(vars), o);
}
Ring<Zp> fring(std::vector<std::string> vars) {
  return Ring<Zp>::polynomial(FieldDescriptor::prime(32003), std::move(vars));
}
template <class K>
std::vector<std::string> formatted(const std::vector<Poly<K>>& ps) {
  std::vector<std::string> out;
  for (const auto& p : ps) out.push_back(format_poly(p));
  return out;
}
template <class K>
Ideal<K> ideal(const Ring<K>& r, const char* text) {
  return Ideal<K>(r, parse_poly_list(text, r));
}
}  // namespace

TEST(GroebnerBasis, LexElimination) {
  auto r = qring({"x", "y"}, MonomialOrder::Lex);
  EXPECT_EQ(formatted(ideal(r, "x - y, x^2 + y^2 - 1").groebner_basis()),
            (std::vector<std::string>{"y^2 - 1/2", "x - y"}));
}

TEST(GroebnerBasis, Principal) {
  auto r = qring({"x", "y"});
  EXPECT_EQ(formatted(ideal(r, "x").groebner_basis()), (std::vector<std::string>{"x"}));
  EXPECT_EQ(formatted(ideal(r, "3*x").groebner_basis()), (std::vector<std::string>{"x"}));
  EXPECT_TRUE(ideal(r, "").groebner_basis().empty());
}

TEST(GroebnerBasis, StaircaseExample) {
  auto r = qring({"x", "y"});
  auto gb = ideal(r, "x^2, x*y, y^2 - x").groebner_basis();
  auto text = formatted(gb);
  std::sort(text.begin(), text.end());
  EXPECT_EQ(text, (std::vector<std::string>{"x*y", "x^2", "y^2 - x"}));
}

TEST(GroebnerBasis, StaircaseMatchesTruncationOracle) {
  // Leading monomials of the reduced GB generate the same initial ideal as the
  // degreewise span of the ideal: compare dim I_d through degree 4 on the homogenized problem.
  auto r = fring({"x", "y"});
  auto I = ideal(r, "x^2, x*y, y^3");
  auto gb = I.groebner_basis();
  for (Degree d = 0; d <= 4; ++d) {
    oracle::Piece<Zp> piece(r, {0}, d);
    std::vector<std::vector<Poly<Zp>>> cols;
    std::vector<Degree> degs;
    for (auto& g : I.generators()) cols.push_back({g}), degs.push_back(g.degree());
    std::size_t standard = 0;
    for (auto& e : oracle::monomials_of_degree(2, d)) {
      auto m = Poly<Zp>::term(r.descriptor(), r.monomial(e), Zp::one(r.field()));
      if (I.normal_form(m) == m) ++standard;
    }
    EXPECT_EQ(piece.ambient_dim() - piece.dim_submodule(cols, degs), standard) << d;
  }
}

TEST(GroebnerBasis, Deterministic) {
  auto r = qring({"x", "y", "z"});
  auto a = formatted(ideal(r, "x*y - z^2, y^2 - x*z, x^2 - y*z").groebner_basis());
  auto b = formatted(ideal(r, "x^2 - y*z, y^2 - x*z, x*y - z^2").groebner_basis());
  EXPECT_EQ(a, b);
}

TEST(NormalForm, Examples) {
  auto lex = qring({"x", "y"}, MonomialOrder::Lex);
  EXPECT_EQ(format_poly(ideal(lex, "x - y").normal_form(parse_poly("x^2 + y", lex))), "y^2 + y");
  auto r = qring({"x", "y"});
  EXPECT_TRUE(ideal(r, "x - y, 2*y^2 - 1").normal_form(parse_poly("x^2 + y^2 - 1", r)).is_zero());
  EXPECT_EQ(format_poly(ideal(r, "x, y").normal_form(r.one())), "1");
  auto other = qring({"x", "y", "z"});
  EXPECT_THROW(ideal(r, "x").normal_form(other.one()), MixedRings);
}

TEST(IdealQuotient, Examples) {
  auto r = qring({"x", "y"});
  auto x = r.variable("x"), y = r.variable("y");
  EXPECT_EQ(ideal_quotient(ideal(r, "x^2, x*y"), x, 1), ideal(r, "x, y"));
  EXPECT_EQ(ideal_quotient(ideal(r, "x"), y, 1), ideal(r, "x"));
  auto sat = saturation(ideal(r, "x^2*y"), x);
  EXPECT_EQ(sat.ideal, ideal(r, "y"));
  EXPECT_EQ(sat.exponent, 2U);
  EXPECT_THROW(ideal_quotient(ideal(r, "x"), r.zero(), 1), ZeroElement);
}

TEST(IdealQuotient, SaturationExponentZeroAndUnit) {
  auto r = qring({"x", "y"});
  auto s = saturation(ideal(r, "x"), r.variable("y"));
  EXPECT_EQ(s.exponent, 0U);
  auto u = saturation(ideal(r, "x^5"), r.variable("x"));
  EXPECT_TRUE(u.ideal.is_unit_ideal());
  EXPECT_EQ(u.exponent, 5U);
}

TEST(IdealQuotient, OverQuotientRing) {
  auto base = qring({"x", "y"});
  auto r = base.quotient_by({parse_poly("x*y", base)});
  EXPECT_EQ(ideal_quotient(Ideal<Rational>(r, {}), r.variable("x"), 3), ideal(r, "y"));
  EXPECT_TRUE(Ideal<Rational>(r, {parse_poly("x^2*y", r)}).is_zero_ideal());
}

TEST(SyzygyKernel, Examples) {
  auto r = qring({"x", "y"});
  auto x = r.variable("x"), y = r.variable("y");
  auto k = syzygy_kernel(Matrix<Rational>::from_rows(r, {{x, y}}));
  ASSERT_EQ(k.cols(), 1U);
  EXPECT_EQ(k.to_string(), "[[-y], [x]]");
  auto k2 = syzygy_kernel(Matrix<Rational>::from_rows(r, {{x, x}}));
  ASSERT_EQ(k2.cols(), 1U);
  EXPECT_EQ(k2.to_string(), "[[1], [-1]]");
  auto rq = r.quotient_by({x * y});
  auto k3 = syzygy_kernel(Matrix<Rational>::from_rows(rq, {{rq.variable("x")}}));
  ASSERT_EQ(k3.cols(), 1U);
  EXPECT_EQ(k3.to_string(), "[[y]]");
  EXPECT_EQ(k3.col_degrees(), (std::vector<Degree>{2}));
  for (Degree d = 0; d <= 6; ++d) {
    oracle::Piece<Rational> src(rq, {1}, d);
    EXPECT_EQ(src.dim_submodule(oracle::columns(k3), k3.col_degrees()),
              oracle::kernel_dim(Matrix<Rational>::from_rows(rq, {{rq.variable("x")}}), d));
  }
}

TEST(SyzygyKernel, ComposesToZero) {
  auto r = qring({"x", "y", "z"});
  auto m = Matrix<Rational>::from_rows(r, {{parse_poly("x^2", r), parse_poly("x*y", r), parse_poly("y*z", r)}});
  auto k = syzygy_kernel(m);
  EXPECT_TRUE((m * k).is_zero());
}

namespace {
Poly<Zp> random_homogeneous(const Ring<Zp>& r, std::mt19937_64& rng, Degree d, int terms) {
  std::vector<Term<Zp>> ts;
  auto monos = oracle::monomials_of_degree(r.num_variables(), d);
  std::uniform_int_distribution<std::size_t> pick(0, monos.size() - 1);
  std::uniform_int_distribution<long> c(-5, 5);
  for (int i = 0; i < terms; ++i) ts.push_back({r.monomial(monos[pick(rng)]), r.scalar(c(rng))});
  return Poly<Zp>::from_terms(r.descriptor(), ts);
}
}  // namespace

TEST(GroebnerProperty, MembershipAgreesWithOracle) {
  std::mt19937_64 rng(11);
  auto r = fring({"x", "y", "z"});
  std::uniform_int_distribution<int> deg(1, 3), nt(1, 3);
  for (int trial = 0; trial < 60; ++trial) {
    std::vector<Poly<Zp>> gens;
    for (int i = 0; i < 3; ++i) gens.push_back(random_homogeneous(r, rng, deg(rng), nt(rng)));
    Ideal<Zp> I(r, gens);
    std::vector<std::vector<Poly<Zp>>> cols;
    std::vector<Degree> degs;
    for (auto& g : I.generators()) cols.push_back({g}), degs.push_back(g.degree());
    for (Degree d = 0; d <= 5; ++d) {
      oracle::Piece<Zp> piece(r, {0}, d);
      auto f = random_homogeneous(r, rng, d, 2);
      if (!gens.empty() && d >= gens[0].degree() && !gens[0].is_zero()) {
        auto m = random_homogeneous(r, rng, d - gens[0].degree(), 2);
        f = m * gens[0];
        if (trial % 2 == 0) f = f + random_homogeneous(r, rng, d, 1);
      }
      ASSERT_EQ(I.contains(f), piece.in_submodule(cols, degs, {f})) << trial << " " << d;
      auto g = random_homogeneous(r, rng, d, 3);
      ASSERT_EQ(I.normal_form(f + g), I.normal_form(I.normal_form(f) + I.normal_form(g)));
    }
  }
}

TEST(GroebnerProperty, SyzygyCompletenessAgreesWithOracle) {
  std::mt19937_64 rng(12);
  auto base = fring({"x", "y", "z"});
  std::uniform_int_distribution<int> deg(1, 2), nt(1, 2), ncols(2, 4);
  for (int trial = 0; trial < 40; ++trial) {
    auto r = trial % 3 == 0 ? base.quotient_by({parse_poly("x*z", base)}) : base;
    const int n = ncols(rng);
    Matrix<Zp> m(r, {0, 1}, {});
    for (int j = 0; j < n; ++j) {
      const Degree dj = deg(rng) + 1;
      m.append_column({random_homogeneous(r, rng, dj, nt(rng)), random_homogeneous(r, rng, dj - 1, nt(rng))}, dj);
    }
    auto k = syzygy_kernel(m);
    ASSERT_TRUE(Ideal<Zp>(r, {}).is_zero_ideal());
    for (std::size_t j = 0; j < k.cols(); ++j) {
      auto img = m * k.select_columns({j});
      for (std::size_t i = 0; i < img.rows(); ++i) ASSERT_TRUE(Ideal<Zp>(r, {}).contains(img.at(i, 0)));
    }
    for (Degree d = 0; d <= 6; ++d) {
      oracle::Piece<Zp> src(r, m.col_degrees(), d);
      ASSERT_EQ(src.dim_submodule(oracle::columns(k), k.col_degrees()), oracle::kernel_dim(m, d)) << trial << " " << d;
    }
  }
}

TEST(GroebnerProperty, SaturationChainMonotone) {
  auto r = fring({"x", "y", "z"});
  auto I = ideal(r, "x^3*y, x*y^2*z, y^4");
  auto f = r.variable("y");
  for (std::uint32_t k = 1; k < 5; ++k) {
    EXPECT_TRUE(ideal_quotient(I, f, k + 1).contains(ideal_quotient(I, f, k)));
  }
  auto s = saturation(I, f);
  EXPECT_TRUE(s.ideal.is_unit_ideal());
  EXPECT_EQ(ideal_quotient(I, f, s.exponent), s.ideal);
  EXPECT_FALSE(ideal_quotient(I, f, s.exponent - 1) == s.ideal);
}
