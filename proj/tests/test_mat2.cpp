#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "sl2flow/mat2.hpp"
#include "sl2flow/random.hpp"
#include "test_support.hpp"

using namespace sl2flow;
using test::max_abs_diff;
using test::rel_err;

namespace {
constexpr double kPi = 3.14159265358979323846;
}

TEST_CASE("inner product basics") {
  CHECK(inner(kId, kId) == 2.0);
  CHECK(inner(kRot, kDiag) == 0.0);
  CHECK(inner(Mat2{1, 2, 3, 4}, Mat2{1, 2, 3, 4}) == 30.0);

  // tr A^T B route agrees.
  Sampler rng(11);
  for (int i = 0; i < 50; ++i) {
    const Mat2 a = rng.mat2(3.0), b = rng.mat2(3.0);
    CHECK(rel_err(inner(a, b), trace(a.transpose() * b)) < 1e-14);
  }
}

TEST_CASE("basis relations") {
  CHECK(max_abs_diff(kRot * kRot, -kId) == 0.0);
  CHECK(max_abs_diff(kDiag * kDiag, kId) == 0.0);
  CHECK(max_abs_diff(kOff * kOff, kId) == 0.0);
  CHECK(max_abs_diff(kRot * kDiag, kOff) == 0.0);
  CHECK(max_abs_diff(kOff * kDiag, kRot) == 0.0);
  CHECK(max_abs_diff(kOff * kRot, kDiag) == 0.0);

  const Mat2 basis[4] = {kId, kRot, kDiag, kOff};
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      CHECK(inner(basis[i], basis[j]) == (i == j ? 2.0 : 0.0));
    }
  }
}

TEST_CASE("adjoint moves across the inner product") {
  Sampler rng(7);
  for (int i = 0; i < 200; ++i) {
    const Mat2 a = rng.mat2(2.0), b = rng.mat2(2.0), c = rng.mat2(2.0);
    CHECK(rel_err(inner(a * b, c), inner(b, a.transpose() * c)) < 1e-13);
    CHECK(rel_err(inner(a * b, c), inner(a, c * b.transpose())) < 1e-13);
  }
}

TEST_CASE("cofactor map") {
  CHECK(max_abs_diff(cofactor(kId), kId) == 0.0);
  CHECK(max_abs_diff(cofactor(kDiag), -kDiag) == 0.0);
  CHECK(max_abs_diff(cofactor(kRot), kRot) == 0.0);

  Sampler rng(3);
  for (int i = 0; i < 200; ++i) {
    const Mat2 a = rng.mat2(3.0), b = rng.mat2(3.0);
    // Conjugation form, isometry, symmetry.
    CHECK(max_abs_diff(cofactor(a), kRot * a * kRot.transpose()) < 1e-14);
    CHECK(rel_err(norm(cofactor(a)), norm(a)) < 1e-14);
    CHECK(rel_err(inner(cofactor(a), b), inner(a, cofactor(b))) < 1e-13);
    // cof U = U for rotations.
    const Mat2 u = rng.so2();
    CHECK(max_abs_diff(cofactor(u), u) < 1e-15);
  }
}

TEST_CASE("determinant and its cofactor identity") {
  CHECK(det2(kId) == 1.0);
  CHECK(det2(kDiag) == -1.0);
  CHECK(det2(Mat2{1, 0, 2, 1}) == 1.0);

  Sampler rng(19);
  for (int i = 0; i < 500; ++i) {
    const Mat2 a = rng.mat2(3.0);
    CHECK(rel_err(det2(a), 0.5 * inner(a, cofactor(a))) < 1e-14);
  }
}

TEST_CASE("quartic polarization identity") {
  // <A,B><cof A,B> + <Rot A,B><A Rot,B>
  //   = <cof A,A>|B|^2/2 + <cof B,B>|A|^2/2
  Sampler rng(23);
  for (int i = 0; i < 500; ++i) {
    const Mat2 a = rng.mat2(3.0), b = rng.mat2(3.0);
    const double lhs = inner(a, b) * inner(cofactor(a), b) +
                       inner(kRot * a, b) * inner(a * kRot, b);
    const double rhs = 0.5 * inner(cofactor(a), a) * norm_sq(b) +
                       0.5 * inner(cofactor(b), b) * norm_sq(a);
    CHECK(rel_err(lhs, rhs) < 1e-12);
  }
}

TEST_CASE("rotations") {
  CHECK(max_abs_diff(rotation(0.0), kId) == 0.0);
  CHECK(max_abs_diff(rotation(kPi / 2.0), kRot) < 1e-15);
  CHECK(max_abs_diff(rotation(kPi), -kId) < 1e-15);

  Sampler rng(5);
  for (int i = 0; i < 100; ++i) {
    const double a = rng.uniform(-10, 10), b = rng.uniform(-10, 10);
    CHECK(max_abs_diff(rotation(a) * rotation(b), rotation(a + b)) < 1e-14);
  }
}

TEST_CASE("left/right rotations are isometries") {
  Sampler rng(29);
  for (int i = 0; i < 200; ++i) {
    const Mat2 a = rng.mat2(3.0);
    CHECK(rel_err(norm(rng.so2() * a * rng.so2()), norm(a)) < 1e-13);
  }
}

TEST_CASE("group membership tests") {
  CHECK(is_so2(rotation(1.3), 1e-12));
  CHECK_FALSE(is_so2(Mat2{2, 0, 0, 0.5}, 1e-12));  // |A|^2 = 4.25
  CHECK(is_sl2(Mat2{2, 0, 0, 0.5}, 1e-12));
  CHECK(is_sl2(Mat2{1, 0, 2, 1}, 1e-12));
  CHECK_FALSE(is_sl2(Mat2{1, 0, 0, 2}, 1e-12));
}

TEST_CASE("rotations minimize the norm on the unit-determinant set") {
  Sampler rng(41);
  double min_norm_sq = 1e300;
  for (int i = 0; i < 2000; ++i) {
    min_norm_sq = std::min(min_norm_sq, norm_sq(rng.sl2(3.0)));
  }
  CHECK(min_norm_sq >= 2.0 - 1e-12);
}

TEST_CASE("tangent defect") {
  CHECK(tangent_defect(kId, kDiag) == 0.0);
  CHECK(tangent_defect(kId, kId) == 2.0);
  Sampler rng(43);
  for (int i = 0; i < 50; ++i) {
    const double th = rng.uniform(-8, 8);
    CHECK(std::abs(tangent_defect(rotation(th), kRot * rotation(th))) < 1e-14);
  }
}
