#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "cmch/dressing.hpp"
#include "cmch/hierarchy.hpp"

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

bool zero_mat(const LoopMatrix<K>& m, int lo, int hi) {
  for (auto* p : {&m.e11, &m.e12, &m.e21, &m.e22})
    for (auto& [d, c] : p->val.coeffs)
      if (d >= std::max(lo, p->val.lo) && d <= std::min(hi, p->val.hi)) return false;
  return true;
}

}  // namespace

TEST_CASE("phi - cbphi = Y alpha and d alpha = 0") {
  auto e = env_base(1, 21);
  Checker<K> ck(e.cf, e.cfg.rep_lo, e.cfg.rep_hi);
  CHECK(dressing::y_identity(e, ck).pass);
  CHECK(dressing::cbphi_valued(e, ck).pass);
}

TEST_CASE("cbphi solves its Maurer-Cartan equation") {
  auto e = env_base(1, 22);
  Checker<K> ck(e.cf, e.cfg.rep_lo, e.cfg.rep_hi);
  CHECK(hierarchy::maurer_cartan(e, ck, e.dr.cbphi, "mc").pass);
}

TEST_CASE("cbphi at lambda = 0 is d log diag(h2^{-1/4}, h2^{1/4})") {
  auto e = env_base(1, 23);
  // the xi component at degree 0 must be diag(-s a3/4, s a3/4)
  const auto& fxi = e.dr.cbphi.c[size_t(e.cf.xi())];
  K want = -(e.sval * e.a_val[1] * Ops::frac(1, 4));
  CHECK(fxi.e11.val.coeff_or_zero(0) == want);
  CHECK(fxi.e22.val.coeff_or_zero(0) == -want);
  CHECK(fxi.e12.val.coeff_or_zero(0) == Ops::zero());
}

TEST_CASE("normalized Z") {
  auto e = env_base(0, 24);
  Checker<K> ck(e.cf, e.cfg.rep_lo, e.cfg.rep_hi);
  CHECK(dressing::z_normal(e, ck).pass);
  CHECK(e.dr.Z.e12.val.coeff_or_zero(1) == Ops::from_int(2) * Ops::i());
  CHECK(e.dr.Z.e21.val.coeff_or_zero(1) == Ops::from_int(-2) * Ops::i() * e.gam);
}

TEST_CASE("wave exponential: residual, brute-force series, t = 0 case") {
  auto e = env_base(1, 25);
  Checker<K> ck(e.cf, e.cfg.rep_lo, e.cfg.rep_hi);
  CHECK(dressing::wave_exponential(e, ck).pass);

  // closed form against the brute exponential series of zeta = Z ttt
  LoopMatrix<K> zeta = e.dr.Z.scaled(e.tttj).val_only();
  LoopMatrix<K> brute = LoopMatrix<K>::identity(e.D);
  LoopMatrix<K> pw = LoopMatrix<K>::identity(e.D);
  K fact(1);
  int terms = 2 * (2 * e.cfg.N + 2) + 4;  // enough to cover the window
  for (int j = 1; j <= terms; ++j) {
    pw = pw * zeta;
    fact = fact * K(j);
    brute += pw.scaled(Ops::one() / fact);
  }
  DSeries<K> w = e.tttj.shifted(1).scaled(Ops::from_int(2) * e.g);
  DSeries<K> ch = analytic_apply(AnalyticFn::Cosh, w, e.wlo, e.whi);
  DSeries<K> shc = analytic_apply(AnalyticFn::Sinhc, w, e.wlo, e.whi);
  LoopMatrix<K> closed =
      LoopMatrix<K>::identity(e.D).scaled(ch) + e.dr.Z.scaled(shc * e.tttj);
  // the truncated brute sum is only trustworthy down to degree -terms
  CHECK(zero_mat(closed - brute, -terms, 2));

  // all t_m = 0: the exponential degenerates to the identity
  LS zeroser;
  DSeries<K> zttt = DSeries<K>::konst(zeroser, e.D);
  DSeries<K> ch0 = analytic_apply(AnalyticFn::Cosh, zttt.shifted(1), e.wlo, e.whi);
  LoopMatrix<K> ez0 = LoopMatrix<K>::identity(e.D).scaled(ch0) +
                      e.dr.Z.scaled(analytic_apply(AnalyticFn::Sinhc, zttt, e.wlo, e.whi) * zttt);
  CHECK(zero_mat(ez0 - LoopMatrix<K>::identity(e.D), e.wlo, e.whi));
}

TEST_CASE("theta forms and the closed-form g") {
  auto e = env_base(1, 26);
  Checker<K> ck(e.cf, e.cfg.rep_lo, e.cfg.rep_hi);
  CHECK(dressing::uv_system(e, ck).pass);
  CHECK(dressing::closed_form_g(e, ck).pass);
  CHECK(dressing::dp_expansion(e, ck).pass);

  // g against exp(int Omega) = e^{sigma+} exp(E sigma-), brute force
  DSeries<K> smin = e.Pj.shifted(2).scaled(-Ops::one());  // sigma- = -l^2 p
  LoopMatrix<K> Es(e.D);                                   // E sigma-
  Es.e12 = smin;
  Es.e21 = smin.shifted(-2);
  LoopMatrix<K> brute = LoopMatrix<K>::identity(e.D);
  LoopMatrix<K> pw = LoopMatrix<K>::identity(e.D);
  K fact(1);
  for (int j = 1; j <= e.whi + 4; ++j) {
    pw = pw * Es;
    fact = fact * K(j);
    brute += pw.scaled(Ops::one() / fact);
  }
  brute = brute.scaled(e.dr.esig);
  DSeries<K> lp = e.Pj.shifted(1);
  DSeries<K> chp = analytic_apply(AnalyticFn::Cosh, lp, e.wlo, e.whi);
  DSeries<K> shp = analytic_apply(AnalyticFn::Sinh, lp, e.wlo, e.whi);
  LoopMatrix<K> g(e.D);
  g.e11 = chp;
  g.e22 = chp;
  g.e12 = -shp.shifted(1);
  g.e21 = -shp.shifted(-1);
  g = g.scaled(e.dr.esig);
  CHECK(zero_mat(g - brute, -4, e.whi - 4));
}

TEST_CASE("p = 0 degenerates g to e^{sigma+} I") {
  auto e = env_base(0, 27);
  LS one = LS::konst(K(1));
  // with p = 0: cosh -> 1, sinh -> 0
  DSeries<K> zero = e.dzero();
  DSeries<K> ch = analytic_apply(AnalyticFn::Cosh, zero.shifted(1), e.wlo, e.whi);
  CHECK((ch.val - one).stored_empty());
}
