#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "cmch/forms.hpp"
#include "cmch/rng.hpp"

using namespace cmch;
using K = Exact;
using LS = LaurentSeries<K>;
using DS = DSeries<K>;

namespace {

bool form_zero(const TwoForm<DS>& w) {
  for (auto& c : w.c)
    if (!c.val.stored_empty()) return false;
  return true;
}

}  // namespace

TEST_CASE("wedge of scalar 1-forms") {
  Coframe cf(1, 2, 3, Mode::Base);
  int D = cf.size();
  Rng rng(19);
  OneForm<DS> a = OneForm<DS>::zero(D, D);
  for (auto& c : a.c) c.val.set(0, rng.gauss<K>());
  // a ^ a = 0 for scalar coefficients
  CHECK(form_zero(wedge(a, a, D)));
  // xi ^ xibar coefficient of (f xi) ^ (g xibar) is f g
  OneForm<DS> fx = OneForm<DS>::zero(D, D), gx = OneForm<DS>::zero(D, D);
  K f = rng.gauss<K>(), g = rng.gauss<K>();
  fx.c[size_t(cf.xi())].val.set(0, f);
  gx.c[size_t(cf.xibar())].val.set(0, g);
  auto w = wedge(fx, gx, D);
  CHECK(w.at(cf.xi(), cf.xibar()).val.coeff_or_zero(0) == f * g);
}

TEST_CASE("exterior derivative obeys Leibniz, hand-expanded") {
  Coframe cf(1, 2, 3, Mode::Base);
  int D = cf.size();
  Rng rng(77);
  CoframeDiff<K> cd;
  cd.d.assign(size_t(D), TwoForm<DS>(D, D));
  // a nontrivial coframe differential: d xi = 2 rho ^ xi
  cd.d[size_t(cf.xi())].add(cf.rho(), cf.xi(), DS::konst_scalar(K(2), D));

  // two scalar jets with random gradients
  auto jet = [&]() {
    DS f(D);
    f.val.set(0, rng.gauss<K>());
    for (auto& gg : f.d) gg = LS::konst(rng.gauss<K>());
    return f;
  };
  DS f = jet(), g = jet();

  OneForm<DS> fg_xi = OneForm<DS>::zero(D, D);
  fg_xi.c[size_t(cf.xi())] = f * g;
  TwoForm<DS> lhs = exterior_d(fg_xi, cd, D);

  // d(fg xi) = (df g + f dg) ^ xi + f g d xi, assembled by hand
  TwoForm<DS> rhs(D, D);
  for (int k = 0; k < D; ++k) {
    if (k == cf.xi()) continue;
    DS c(D);
    c.val = f.d[size_t(k)] * g.val + f.val * g.d[size_t(k)];
    rhs.add(k, cf.xi(), c);
  }
  DS fg = f * g;
  rhs.add(cf.rho(), cf.xi(), DS::konst(fg.val.scaled(K(2)), D));
  for (size_t i = 0; i < lhs.c.size(); ++i)
    CHECK((lhs.c[i].val - rhs.c[i].val).stored_empty());
}

TEST_CASE("d of an exact coframe element vanishes") {
  Coframe cf(2, 3, 4, Mode::Base);
  int D = cf.size();
  CoframeDiff<K> cd;
  cd.d.assign(size_t(D), TwoForm<DS>(D, D));
  OneForm<DS> dt = OneForm<DS>::zero(D, D);
  dt.c[size_t(cf.find(DirLabel::T, 1))].val.set(0, K(1));
  CHECK(form_zero(exterior_d(dt, cd, D)));
}

TEST_CASE("two-form antisymmetry via signed accumulation") {
  Coframe cf(1, 2, 3, Mode::Base);
  int D = cf.size();
  TwoForm<DS> w(D, D);
  DS v = DS::konst_scalar(K(5), D);
  w.add(2, 0, v);  // rho ^ xi stored as -(xi ^ rho)
  CHECK(w.at(0, 2).val.coeff_or_zero(0) == K(-5));
}
