#include <gtest/gtest.h>

#include "pcn/dspp.hpp"
#include "support.hpp"

namespace pcn {
namespace {

Matrix m1(double v) { return Matrix::Constant(1, 1, v); }

DsppBlocks three_by_three(const Vector& b) {
  return DsppBlocks(m1(2), m1(1), m1(1), m1(0), m1(1), b);
}

TEST(Assemble, ScalarLayout) {
  Matrix expected(3, 3);
  expected << 2, 1, 0, 1, 0, 1, 0, 1, 1;
  const Matrix got = assemble(three_by_three(Vector::Zero(3)));
  EXPECT_EQ(got, expected);
  EXPECT_NEAR(got.determinant(), -3.0, 1e-14);
}

TEST(Assemble, IdentitySystem) {
  EXPECT_EQ(assemble(testing::identity_system(2, 3, 1, Vector::Zero(6))), Matrix::Identity(6, 6));
}

TEST(Assemble, NegatesD) {
  const DsppBlocks blocks = testing::random_blocks(2, 2, 2, 1);
  EXPECT_EQ(assemble(blocks).block(2, 2, 2, 2), -blocks.D());
}

TEST(DsppBlocks, RejectsBadShapesAndValues) {
  try {
    DsppBlocks(Matrix::Identity(2, 2), Matrix::Zero(1, 3), m1(1), m1(1), m1(1), Vector::Zero(4));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::DimensionMismatch);
  }
  try {
    DsppBlocks(m1(std::numeric_limits<double>::infinity()), m1(1), m1(1), m1(1), m1(1),
               Vector::Zero(3));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NonFinite);
  }
  EXPECT_THROW(DsppBlocks(m1(1), m1(1), m1(1), m1(1), m1(1), Vector::Zero(4)), Error);
}

TEST(SolveDspp, IdentitySystem) {
  const Vector e1 = Vector::Unit(6, 0);
  const Solution sol = solve_dspp(testing::identity_system(2, 3, 1, e1));
  EXPECT_EQ(sol.w(), e1);
  EXPECT_EQ(sol.x(), Vector::Unit(2, 0));
  EXPECT_EQ(sol.y(), Vector::Zero(3));
  EXPECT_EQ(sol.z(), Vector::Zero(1));
}

TEST(SolveDspp, ScalarSystemMatchesDirectInverse) {
  const Vector e1 = Vector::Unit(3, 0);
  const Solution sol = solve_dspp(three_by_three(e1));
  Matrix b(3, 3);
  b << 2, 1, 0, 1, 0, 1, 0, 1, 1;
  const Vector expected = b.inverse().col(0);
  EXPECT_LE((sol.w() - expected).cwiseAbs().maxCoeff(), 1e-15);
  EXPECT_LE((b * sol.w() - e1).norm(), 1e-15);
}

TEST(SolveDspp, SingularSystem) {
  // B = 0 and C = 0 with D = E = 0 leave the y and z rows empty.
  const DsppBlocks blocks(Matrix::Identity(2, 2), Matrix::Zero(1, 2), Matrix::Zero(1, 1), m1(0),
                          m1(0), Vector::Ones(4));
  try {
    solve_dspp(blocks);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::SingularMatrix);
  }
}

TEST(Selector, BlockPatterns) {
  const Dims dims{2, 1, 1};
  Matrix expected = Matrix::Zero(2, 4);
  expected(0, 0) = 1;
  expected(1, 1) = 1;
  EXPECT_EQ(make_selector(SelectorKind::XPart, dims).L, expected);
  EXPECT_EQ(make_selector(SelectorKind::Full, dims).L, Matrix::Identity(4, 4));
  EXPECT_EQ(make_selector(SelectorKind::YPart, dims).L, Matrix(Vector::Unit(4, 2).transpose()));
  EXPECT_EQ(make_selector(SelectorKind::ZPart, dims).L, Matrix(Vector::Unit(4, 3).transpose()));

  const Selector custom = make_selector(SelectorKind::Custom, dims, Matrix::Ones(1, 4));
  EXPECT_EQ(custom.rows(), 1);
  EXPECT_THROW(make_selector(SelectorKind::Custom, dims), Error);
  EXPECT_THROW(make_selector(SelectorKind::Custom, dims, Matrix::Ones(1, 3)), Error);
  EXPECT_EQ(parse_selector_kind("x"), SelectorKind::XPart);
  EXPECT_THROW(parse_selector_kind("q"), Error);
}

TEST(DsppSystem, SelectedInverseMatchesExplicitInverse) {
  const DsppBlocks blocks = testing::random_blocks(3, 2, 2, 9);
  const DsppSystem system(blocks);
  const Selector sel = make_selector(SelectorKind::YPart, blocks.dims());
  const Matrix expected = sel.L * assemble(blocks).inverse();
  EXPECT_LE((system.selected_inverse(sel) - expected).cwiseAbs().maxCoeff(), 1e-12);
}

}  // namespace
}  // namespace pcn
