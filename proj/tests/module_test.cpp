#include <gtest/gtest.h>

#include <random>

#include "koszulab/resolution.hpp"
#include "support/oracle.hpp"

using namespace koszulab;

namespace {
using R = Rational;
Ring<R> qxy() { return Ring<R>::polynomial(FieldDescriptor::rationals(), {"x", "y"}); }
FpModule<R> cyclic(const Ring<R>& r, const char* gens) { return FpModule<R>::cyclic(Ideal<R>(r, parse_poly_list(gens, r))); }
std::vector<std::size_t> dims(const FpModule<R>& m, Degree lo, Degree hi) {
  std::vector<std::size_t> out;
  for (auto [d, v] : m.hilbert_function(lo, hi)) out.push_back(v);
  return out;
}
}  // namespace

TEST(Hilbert, Examples) {
  auto r = qxy();
  EXPECT_EQ(dims(FpModule<R>::free(r, {0}), 0, 4), (std::vector<std::size_t>{1, 2, 3, 4, 5}));
  EXPECT_EQ(dims(cyclic(r, "x"), 0, 4), (std::vector<std::size_t>{1, 1, 1, 1, 1}));
  EXPECT_EQ(dims(cyclic(r, "x^2, x*y"), 0, 5), (std::vector<std::size_t>{1, 2, 1, 1, 1, 1}));
  EXPECT_EQ(dims(FpModule<R>::free(r, {2}), 0, 3), (std::vector<std::size_t>{0, 0, 1, 2}));
}

TEST(Hilbert, NotGraded) {
  auto r = qxy();
  EXPECT_THROW(cyclic(r, "x - 1").hilbert_function(0, 2), NotGraded);
  EXPECT_THROW(FpModule<R>::free(r, {0}).hilbert_function(2, 1), BadBounds);
}

TEST(Resolution, KoszulOfMaximalIdeal) {
  auto r = qxy();
  auto res = free_resolution(cyclic(r, "x, y"), 5);
  ASSERT_EQ(res.length(), 2U);
  EXPECT_EQ(res.degrees(0), (std::vector<Degree>{0}));
  EXPECT_EQ(res.degrees(1), (std::vector<Degree>{1, 1}));
  EXPECT_EQ(res.degrees(2), (std::vector<Degree>{2}));
  EXPECT_TRUE((res.maps[0] * res.maps[1]).is_zero());
}

TEST(Resolution, MonomialIdeal) {
  auto r = qxy();
  auto res = free_resolution(cyclic(r, "x^2, x*y"), 5);
  ASSERT_EQ(res.length(), 2U);
  EXPECT_EQ(res.degrees(1), (std::vector<Degree>{2, 2}));
  EXPECT_EQ(res.degrees(2), (std::vector<Degree>{3}));
  EXPECT_EQ(res.maps[1].to_string(), "[[-y], [x]]");
  // Oracle: the syzygy module of [x^2 xy] computed directly has the same single generator up to sign.
  auto k = syzygy_kernel(res.maps[0]);
  ASSERT_EQ(k.cols(), 1U);
  EXPECT_EQ(k.col_degrees(), (std::vector<Degree>{3}));
}

TEST(Resolution, FreeModuleHasLengthZero) {
  auto r = qxy();
  EXPECT_EQ(free_resolution(FpModule<R>::free(r, {0, 1}), 4).length(), 0U);
}

TEST(Resolution, ExactAtEverySpot) {
  auto r = Ring<Zp>::polynomial(FieldDescriptor::prime(32003), {"x", "y", "z"});
  auto m = FpModule<Zp>::cyclic(Ideal<Zp>(r, parse_poly_list("x^2*y, y*z^2, x*z, y^3", r)));
  auto res = free_resolution(m, 6);
  EXPECT_LE(res.length(), 3U);
  for (std::size_t k = 0; k + 1 < res.length(); ++k) {
    EXPECT_TRUE((res.maps[k] * res.maps[k + 1]).is_zero());
    // ker d_{k+1} subset im d_{k+2} and im subset ker, both via membership.
    auto ker = syzygy_kernel(res.maps[k]);
    FpModule<Zp> quot(res.maps[k + 1]);
    for (std::size_t j = 0; j < ker.cols(); ++j) EXPECT_TRUE(quot.is_zero_element(ker.column(j)));
  }
  // Hilbert function equals the alternating sum of free-module dimensions.
  for (Degree d = 0; d <= 7; ++d) {
    long alt = 0;
    for (std::size_t k = 0; k <= res.length(); ++k) {
      long sum = 0;
      for (auto e : res.degrees(k)) sum += static_cast<long>(oracle::monomials_of_degree(3, d - e).size());
      alt += (k % 2 == 0 ? 1 : -1) * sum;
    }
    EXPECT_EQ(alt, static_cast<long>(m.dimension(d))) << d;
  }
}

TEST(Ext, HomFromFreeIsIdentity) {
  auto r = qxy();
  auto m = cyclic(r, "x^2, x*y");
  auto e0 = ext_module(FpModule<R>::free(r, {0}), m, 0);
  EXPECT_EQ(dims(e0, -1, 5), dims(m, -1, 5));
  // The identity-on-generators map is an isomorphism once the presentations are compared.
  ModuleMap<R> f(e0, m, Matrix<R>::identity(r, {0}));
  EXPECT_TRUE(verify_isomorphism(f).iso);
}

TEST(Ext, ResidueFieldOverLine) {
  auto r = Ring<R>::polynomial(FieldDescriptor::rationals(), {"x"});
  auto k = FpModule<R>::cyclic(Ideal<R>(r, {r.variable("x")}));
  auto e1 = ext_module(k, k, 1);
  std::size_t total = 0;
  for (auto [d, v] : e1.hilbert_function(-4, 4)) total += v;
  EXPECT_EQ(total, 1U);
}

TEST(Ext, TopExtOfResidueField) {
  auto r = qxy();
  auto e2 = ext_module(cyclic(r, "x, y"), FpModule<R>::free(r, {0}), 2);
  const auto h = e2.hilbert_function(-6, 6);
  for (auto [d, v] : h) EXPECT_EQ(v, d == -2 ? 1U : 0U) << d;
  EXPECT_TRUE(ext_module(cyclic(r, "x, y"), FpModule<R>::free(r, {0}), 3).is_zero());
}

TEST(Isomorphism, Examples) {
  auto r = qxy();
  auto rf = FpModule<R>::free(r, {0});
  EXPECT_TRUE(verify_isomorphism(ModuleMap<R>::identity(cyclic(r, "x^2, x*y"))).iso);
  auto mulx = ModuleMap<R>(rf.shifted(1), rf, Matrix<R>::from_rows(r, {{r.variable("x")}}));
  auto v = verify_isomorphism(mulx);
  EXPECT_FALSE(v.iso);
  EXPECT_FALSE(v.cokernel_zero);
  EXPECT_TRUE(v.kernel_zero);
  auto rx = cyclic(r, "x");
  auto muly = ModuleMap<R>(rx.shifted(1), rx, Matrix<R>::from_rows(r, {{r.variable("y")}}));
  auto w = verify_isomorphism(muly);
  EXPECT_FALSE(w.iso);
  EXPECT_TRUE(w.kernel_zero);
  EXPECT_EQ(dims(cokernel(muly), 0, 3), (std::vector<std::size_t>{1, 0, 0, 0}));
}

TEST(Isomorphism, IllDefinedMapRejected) {
  auto r = qxy();
  EXPECT_THROW(ModuleMap<R>(cyclic(r, "x"), FpModule<R>::free(r, {0}), Matrix<R>::identity(r, {0})), InvalidArgument);
}

TEST(Prune, RemovesUnitRelations) {
  auto r = qxy();
  auto x = r.variable("x"), y = r.variable("y");
  Matrix<R> rel(r, {0, 1}, {});
  rel.append_column({x, r.constant(-1)}, 1);
  rel.append_column({x * y, r.zero()}, 2);
  FpModule<R> m(rel);
  auto p = prune(m);
  EXPECT_EQ(p.module.rank(), 1U);
  EXPECT_TRUE(verify_isomorphism(p.to_original).iso);
  EXPECT_TRUE(verify_isomorphism(p.from_original).iso);
  EXPECT_EQ(dims(p.module, 0, 3), dims(m, 0, 3));
}

TEST(Kernel, QuotientRingMultiplication) {
  auto base = qxy();
  auto r = base.quotient_by({parse_poly("x*y", base)});
  auto rf = FpModule<R>::free(r, {0});
  ModuleMap<R> f(rf.shifted(1), rf, Matrix<R>::from_rows(r, {{r.variable("x")}}));
  auto k = kernel(f);
  EXPECT_EQ(dims(k.module, 0, 4), (std::vector<std::size_t>{0, 0, 1, 1, 1}));
}
