#include <gtest/gtest.h>

#include <random>

#include "koszulab/completion.hpp"
#include "koszulab/poly_io.hpp"
#include "support/generators.hpp"

using namespace koszulab;

namespace {
using Z = Zp;
Ring<Z> ring(std::vector<std::string> vars) {
  return Ring<Z>::polynomial(FieldDescriptor::prime(32003), std::move(vars));
}
std::vector<Poly<Z>> seq(const char* s, const Ring<Z>& r) { return parse_poly_list(s, r); }
FpModule<Z> free_of_rank(const Ring<Z>& r, std::size_t n) { return FpModule<Z>::free(r, std::vector<Degree>(n, 0)); }
FreeComplex<Z> at0(const FpModule<Z>& m) { return FreeComplex<Z>::concentrated(m, 0); }

std::size_t total_dim(const FpModule<Z>& m, Degree top) {
  std::size_t s = 0;
  for (Degree d = 0; d <= top; ++d) s += m.dimension(d);
  return s;
}
}  // namespace

TEST(AdicTower, Examples) {
  auto x = ring({"x"});
  auto a = adic_tower(free_of_rank(x, 1), Ideal<Z>(x, seq("x", x)), 4);
  EXPECT_TRUE(a.surjective);
  for (std::uint32_t n = 1; n <= 4; ++n) EXPECT_EQ(total_dim(a.stage(n), 10), n);

  auto xy = ring({"x", "y"});
  auto b = adic_tower(free_of_rank(xy, 1), Ideal<Z>(xy, seq("x, y", xy)), 4);
  for (std::uint32_t n = 1; n <= 4; ++n) EXPECT_EQ(total_dim(b.stage(n), 10), n * (n + 1) / 2);

  auto c = adic_tower(FpModule<Z>::cyclic(Ideal<Z>(xy, seq("x", xy))), Ideal<Z>(xy, seq("x, y", xy)), 4);
  for (std::uint32_t n = 1; n <= 4; ++n) EXPECT_EQ(total_dim(c.stage(n), 10), n);
  EXPECT_TRUE(c.surjective);
  EXPECT_THROW(adic_tower(free_of_rank(x, 1), Ideal<Z>(x, seq("x", x)), 0), BadBounds);
}

TEST(LocalHomology, UnivariateRing) {
  auto x = ring({"x"});
  auto rep = local_homology_tower(x, seq("x", x), free_of_rank(x, 1), 3);
  EXPECT_TRUE(rep.h0_holds());
  EXPECT_TRUE(rep.pro_zero());
  EXPECT_TRUE(rep.ml_holds());
  EXPECT_TRUE(rep.consistent());
  for (const auto& row : rep.homology_dims.at(-1)) {
    for (auto v : row) EXPECT_EQ(v, 0U);
  }
  for (const auto& m : rep.ml) EXPECT_TRUE(verify_ml_report(m));
}

TEST(LocalHomology, FreeRankTwoOverPlane) {
  auto xy = ring({"x", "y"});
  auto rep = local_homology_tower(xy, seq("x, y", xy), free_of_rank(xy, 2), 3);
  EXPECT_TRUE(rep.consistent());
  for (int i : {-1, -2}) {
    for (const auto& row : rep.homology_dims.at(i)) {
      for (auto v : row) EXPECT_EQ(v, 0U);
    }
  }
  // Oracle: H^0 of stage r is (R/(x^r, y^r))^2, of total dimension 2 r^2.
  for (std::size_t r = 0; r < 3; ++r) {
    std::size_t s = 0;
    for (auto v : rep.homology_dims.at(0)[r]) s += v;
    EXPECT_EQ(s, 2 * (r + 1) * (r + 1));
  }
}

TEST(LocalHomology, NonRegularSequenceInThreeSpace) {
  auto r3 = ring({"x", "y", "z"});
  auto rep = local_homology_tower(r3, seq("x^2, x*y", r3), free_of_rank(r3, 1), 3);
  EXPECT_TRUE(rep.h0_holds());
  EXPECT_TRUE(rep.ml_holds());
  ASSERT_EQ(rep.nullity.size(), 2U);
  for (const auto& c : rep.nullity) {
    EXPECT_EQ(c.verdict, Verdict::Certified);
    for (const auto& [r, s] : c.witnesses) EXPECT_LE(s, r + 2);
  }
  // Oracle: the same check run on its own.
  auto direct = essential_nullity_check(r3, seq("x^2, x*y", r3), free_of_rank(r3, 1), 1, 3, 7);
  EXPECT_EQ(direct.witnesses, rep.nullity[0].witnesses);
}

TEST(LocalHomology, RejectsNonFree) {
  auto x = ring({"x"});
  auto m = FpModule<Z>::cyclic(Ideal<Z>(x, seq("x^2", x)));
  EXPECT_THROW(local_homology_tower(x, seq("x", x), m, 3), InvalidArgument);
  EXPECT_THROW(local_homology_tower(x, seq("x", x), free_of_rank(x, 1), 1), BadBounds);
}

TEST(MittagLeffler, TamperedReportFails) {
  auto x = ring({"x"});
  auto tower = dual_koszul_tower(x, seq("x", x), free_of_rank(x, 1), 6);
  auto rep = mittag_leffler_report(tower, -1, 2, 6, 2);
  EXPECT_TRUE(rep.holds());
  EXPECT_TRUE(verify_ml_report(rep));
  rep.per_stage[0].image_dims.begin()->second.back() += 1;
  EXPECT_FALSE(verify_ml_report(rep));
}

TEST(Adjunction, UnitCaseIsIdentity) {
  auto xy = ring({"x", "y"});
  auto rr = at0(free_of_rank(xy, 1));
  auto rep = gm_adjunction_check(rr, rr, seq("x", xy), 1, 1);
  ASSERT_TRUE(rep.passed());
  const auto& phi = rep.maps[0];
  for (int n = phi.source().lo(); n <= phi.source().hi(); ++n) {
    EXPECT_TRUE(phi.component(n) == Matrix<Z>::identity(xy, phi.source().degrees(n)));
  }
}

TEST(Adjunction, KoszulCoefficientComplex) {
  auto xy = ring({"x", "y"});
  auto e = koszul_complex(xy, seq("y", xy), 1);
  auto rep = gm_adjunction_check(e, at0(free_of_rank(xy, 1)), seq("x", xy), 1, 2);
  EXPECT_TRUE(rep.passed());
  ASSERT_EQ(rep.stages.size(), 2U);
  // Oracle: Hom(K(x) (x) K(y), R) has ranks 1, 2, 1 in degrees -2..0, matched on both sides.
  for (const auto& st : rep.stages) {
    EXPECT_EQ(st.lhs_ranks, (std::vector<std::size_t>{1, 2, 1}));
    EXPECT_EQ(st.rhs_ranks, (std::vector<std::size_t>{1, 2, 1}));
  }
  ASSERT_EQ(rep.naturality.size(), 1U);
  EXPECT_TRUE(rep.naturality[0]);
  EXPECT_TRUE(verify_duality_report(rep));
}

TEST(Adjunction, NonSquareDifferential) {
  auto xy = ring({"x", "y"});
  Matrix<Z> d(xy, {-1, -1}, {0});
  d.set(0, 0, xy.variable(0));
  d.set(1, 0, xy.variable(1));
  auto e = two_term(d, -1);
  auto f = at0(FpModule<Z>::cyclic(Ideal<Z>(xy, seq("x*y", xy))));
  auto rep = gm_adjunction_check(e, f, seq("x, y", xy), 1, 3);
  EXPECT_TRUE(rep.passed());
}

TEST(Adjunction, MixedRings) {
  auto a = ring({"x", "y"});
  auto b = ring({"u", "v"});
  EXPECT_THROW(gm_adjunction_check(at0(free_of_rank(a, 1)), at0(free_of_rank(b, 1)), seq("x", a), 1, 1), MixedRings);
}

// Random bounded complexes from cones and shifts of maps between Koszul-type complexes.
TEST(AdjunctionProperty, RandomConesAndShifts) {
  auto xy = ring({"x", "y"});
  std::mt19937 rng(11);
  auto pick = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
  auto random_complex = [&]() { return gen::random_cone_complex(xy, rng); };
  int passed = 0;
  for (int trial = 0; trial < 10; ++trial) {
    auto e = random_complex();
    auto f = pick(0, 1) ? random_complex() : at0(free_of_rank(xy, 1));
    auto t = pick(0, 1) ? seq("x", xy) : seq("x, y", xy);
    auto rep = gm_adjunction_check(e, f, t, 1, 2);
    EXPECT_TRUE(rep.passed()) << "trial " << trial;
    passed += rep.passed() ? 1 : 0;
  }
  EXPECT_EQ(passed, 10);
}
