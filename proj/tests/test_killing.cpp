#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "cmch/killing.hpp"

using namespace cmch;
using K = Exact;
using LS = LaurentSeries<K>;
using Ops = ScalarOps<K>;

namespace {

Environment<K> env_base(int N, std::uint64_t seed) {
  EnvConfig cfg;
  cfg.N = N;
  cfg.mode = Mode::Base;
  cfg.seed = seed;
  return build_environment<K>(cfg);
}

bool zero_mat(const LoopMatrix<K>& m) {
  for (auto* p : {&m.e11, &m.e12, &m.e21, &m.e22})
    for (auto& [d, c] : p->val.coeffs) {
      if (d < p->val.lo || d > p->val.hi) continue;
      return false;
    }
  return true;
}

}  // namespace

TEST_CASE("p = 0 degenerates V+ to the pure cosh profile") {
  auto e = env_base(1, 31);
  VProfile<K> p;
  p.A = e.A;
  p.B = e.B;
  p.C = e.C;
  p.esig = e.dr.esig;
  DSeries<K> z = e.dzero();  // p := 0
  p.ch = analytic_apply(AnalyticFn::Cosh, z.shifted(1), e.wlo, e.whi);
  DSeries<K> sh = analytic_apply(AnalyticFn::Sinh, z.shifted(1), e.wlo, e.whi);
  p.shl = sh.shifted(-1);
  p.shL = sh.shifted(1);
  p.g = e.g;
  auto [Vp, Vm] = build_V_profile(p, e.D);
  K two_g = Ops::from_int(2) * e.g;
  LoopMatrix<K> want(e.D);
  want.e12 = (e.dr.esig * e.C).scaled(two_g);
  want.e21 = (e.dr.esig * e.B).scaled(-two_g);
  CHECK(zero_mat(Vp - want));
}

TEST_CASE("V relations, determinants, Killing equation") {
  auto e = env_base(1, 32);
  Checker<K> ck(e.cf, e.cfg.rep_lo, e.cfg.rep_hi);
  CHECK(killing::v_relations(e, ck).pass);
  CHECK(killing::v_determinants(e, ck).pass);
  CHECK(killing::v_killing(e, ck).pass);
}

TEST_CASE("P relations in the trig slice") {
  auto e = env_base(1, 33);
  Checker<K> ck(e.cf, e.cfg.rep_lo, e.cfg.rep_hi);
  CHECK(killing::p_relations(e, ck).pass);
  CHECK(killing::p_determinants(e, ck).pass);
  CHECK(killing::p_membership(e, ck).pass);
  CHECK(killing::p_killing(e, ck).pass);
}

TEST_CASE("t = 0 degenerates the rotation to the identity") {
  // with all t_m = 0 the plain-series rotation applies: cosh -> 1,
  // sinh -> 0, so P+- = V+-
  auto e = env_base(1, 34);
  DSeries<K> zttt = e.dzero();
  DSeries<K> arg = zttt.shifted(1).scaled(Ops::from_int(4) * e.g);
  DSeries<K> ch4 = analytic_apply(AnalyticFn::Cosh, arg, e.wlo, e.whi);
  DSeries<K> sh4 = analytic_apply(AnalyticFn::Sinh, arg, e.wlo, e.whi);
  LoopMatrix<K> Pp = e.kl.Vp.scaled(ch4) - e.kl.Vm.scaled(sh4.shifted(-1));
  CHECK(zero_mat(Pp - e.kl.Vp));
}

TEST_CASE("rotation determinant is 1: [P+,P-] reproduces [V+,V-] rotated") {
  // ch^2 - sh^2 = 1 makes [P+,P-] - g Y vanish; checked in the suite
  auto e = env_base(0, 35);
  Checker<K> ck(e.cf, e.cfg.rep_lo, e.cfg.rep_hi);
  Check c = killing::p_relations(e, ck);
  CHECK(c.pass);
}

TEST_CASE("perturbing the sigma+ normalization scales linearly") {
  auto e = env_base(1, 36);
  Checker<K> ck(e.cf, e.cfg.rep_lo, e.cfg.rep_hi);
  CHECK(killing::sigma_perturbation(e, ck, 2, 1).pass);
  CHECK(killing::sigma_perturbation(e, ck, 3, 2).pass);
  // the defect coefficient is (c^2 - 1) sqrt(gamma): doubling the
  // perturbation of e^{2 sigma+} doubles the residual, exactly
  VProfile<K> p;
  p.A = e.A.val_only();
  p.B = e.B.val_only();
  p.C = e.C.val_only();
  DSeries<K> lp = e.Pj.val_only().shifted(1);
  p.ch = analytic_apply(AnalyticFn::Cosh, lp, e.wlo, e.whi);
  DSeries<K> sh = analytic_apply(AnalyticFn::Sinh, lp, e.wlo, e.whi);
  p.shl = sh.shifted(-1);
  p.shL = sh.shifted(1);
  p.g = e.g;
  auto resid_for = [&](K scale) {
    VProfile<K> q = p;
    q.esig = e.dr.esig.val_only().scaled(scale);
    auto [Vp, Vm] = build_V_profile(q, e.D);
    return bracket(Vp, Vm) - e.h.Y.scaled(e.g);
  };
  // defect(c) = (c^2 - 1) g Y: compare defect(c2)/defect(c1) entrywise
  K c1 = Ops::frac(5, 4), c2 = Ops::frac(3, 2);
  LoopMatrix<K> r1 = resid_for(c1), r2 = resid_for(c2);
  K ratio = (c2 * c2 - Ops::one()) / (c1 * c1 - Ops::one());
  CHECK(zero_mat(r2 - r1.scaled(ratio)));
}
