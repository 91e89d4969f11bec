#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "cmch/loopmat.hpp"
#include "cmch/rng.hpp"

using namespace cmch;
using K = Exact;
using LS = LaurentSeries<K>;
using DS = DSeries<K>;
using Mat = LoopMatrix<K>;
using Ops = ScalarOps<K>;

namespace {

constexpr int ND = 3;

Mat random_twisted(Rng& rng, int lo, int hi) {
  Mat m(ND);
  for (int d = lo; d <= hi; ++d) {
    K v = rng.gauss<K>();
    if (d % 2 == 0) {
      m.e11.val.set(d, v);
      m.e22.val.set(d, -v);
    } else {
      m.e12.val.set(d, v);
      m.e21.val.set(d, rng.gauss<K>());
    }
  }
  return m;
}

bool mat_zero(const Mat& m) {
  for (auto* p : {&m.e11, &m.e12, &m.e21, &m.e22})
    if (!p->val.stored_empty()) return false;
  return true;
}

}  // namespace

TEST_CASE("bracket: antisymmetry, Jacobi, twisted closure") {
  Rng rng(17);
  for (int t = 0; t < 8; ++t) {
    Mat x = random_twisted(rng, -3, 3), y = random_twisted(rng, -3, 3),
        z = random_twisted(rng, -3, 3);
    CHECK(mat_zero(bracket(x, x)));
    CHECK(mat_zero(bracket(x, y) + bracket(y, x)));
    Mat j = bracket(x, bracket(y, z)) + bracket(y, bracket(z, x)) +
            bracket(z, bracket(x, y));
    CHECK(mat_zero(j));
    CHECK(bracket(x, y).twisted_pattern());
  }
}

TEST_CASE("determinant of the algebra shape") {
  // det [[-ia, 2c],[2b, ia]] = a^2 - 4 b c
  Rng rng(29);
  DS a(ND), b(ND), c(ND);
  for (int d = 0; d <= 3; ++d) {
    a.val.set(2 * d, rng.gauss<K>());
    b.val.set(2 * d + 1, rng.gauss<K>());
    c.val.set(2 * d + 1, rng.gauss<K>());
  }
  Mat m = Mat::algebra(a, b, c);
  LS want = a.val * a.val - (b.val * c.val).scaled(K(4));
  CHECK((m.det().val - want).stored_empty());
  CHECK(m.trace().val.stored_empty());
  CHECK(m.twisted_pattern());
}

TEST_CASE("Cayley-Hamilton by direct expansion") {
  Rng rng(37);
  for (int t = 0; t < 6; ++t) {
    Mat x = random_twisted(rng, -2, 4);
    Mat x2 = x * x;
    DS d = x.det();
    Mat want(ND);
    want.e11 = d;
    want.e22 = d;
    CHECK(mat_zero(x2 + want));
  }
}

TEST_CASE("determinant is multiplicative") {
  Rng rng(43);
  Mat x = random_twisted(rng, -2, 3), y = random_twisted(rng, -1, 3);
  CHECK(((x * y).det().val - x.det().val * y.det().val).stored_empty());
}

TEST_CASE("projections") {
  Rng rng(47);
  Mat x = random_twisted(rng, -4, 4);
  CHECK(mat_zero(x.project(0, true) + x.project(-1, false) - x));
  // lambda * even matrix is untouched by the >=1 cut
  Mat ev(ND);
  ev.e11.val.set(0, K(2));
  ev.e22.val.set(0, K(-2));
  Mat sh = ev.shifted(1);
  CHECK(mat_zero(sh.project(1, true) - sh));
}

TEST_CASE("adpow") {
  Rng rng(53);
  Mat x = random_twisted(rng, -2, 2), z = random_twisted(rng, -2, 2);
  Mat once = adpow(x, 1, z);
  CHECK(mat_zero(once - bracket(x, z)));
  CHECK(mat_zero(adpow(x, 2, z) - bracket(x, bracket(x, z))));
}

TEST_CASE("conjugate transpose bookkeeping") {
  Coframe cf(1, 2, 3, Mode::Base);  // base frame is conjugation-closed
  int D = cf.size();
  Rng rng(59);
  Mat x(D);
  for (int d = -3; d <= 3; ++d) {
    K v = rng.gauss<K>();
    if (d % 2 == 0) {
      x.e11.val.set(d, v);
      x.e22.val.set(d, -v);
    } else {
      x.e12.val.set(d, v);
      x.e21.val.set(d, rng.gauss<K>());
    }
  }
  Mat ct = x.conj_transpose(cf);
  Mat back = ct.conj_transpose(cf);
  CHECK(mat_zero(back - x));
  // anti-commutes with the Euler operator
  CHECK(mat_zero(x.euler().conj_transpose(cf) + ct.euler()));
  // degree bookkeeping: ct of the >=1 part is the <=-1 part of ct
  CHECK(mat_zero(x.project(1, true).conj_transpose(cf) - ct.project(-1, false)));
  // twisted pattern survives
  CHECK(ct.twisted_pattern());
}
