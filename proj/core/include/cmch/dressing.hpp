#pragma once

// Dressing-layer suites: the identity phi - cbphi = Y alpha (and its
// affine extension), the Maurer-Cartan equation for cbphi, the constant
// field Z, the wave exponential, the (u,v)-system with theta+- and the
// closed-form solution g, and the lambda^0 expansion of dp.

#include "cmch/towers.hpp"

namespace cmch::dressing {

// phihat - cbphi - Y alpha - S sigma = 0 (the sigma term only in the
// extended modes). Base components carry the real content.
template <class K>
Check y_identity(const Environment<K>& e, const Checker<K>& ck) {
  Check c{e.cf.mode() == Mode::Base ? "Yidentity" : "hcidentity+"};
  auto Ya = times_form(e.h.Y, e.h.alpha);
  auto Ss = times_form(e.sp.S, e.h.sigma);
  for (int dir = 0; dir < e.D; ++dir) {
    LoopMatrix<K> r = e.h.phihat.c[size_t(dir)] - e.dr.cbphi.c[size_t(dir)] -
                      Ya.c[size_t(dir)] - Ss.c[size_t(dir)];
    ck.mat(c, e.cf.label(dir).name(), r.val_only());
  }
  // d alpha = 0
  auto da = exterior_d(e.h.alpha, e.cdiff, e.D);
  Check ca{"dalpha"};
  ck.twoform(ca, da);
  c.merge(ca);
  return c;
}

// cbphi is g_{>=0}-valued
template <class K>
Check cbphi_valued(const Environment<K>& e, const Checker<K>& ck) {
  Check c{"cbphi-g0"};
  for (int dir = 0; dir < e.D; ++dir)
    ck.mat(c, e.cf.label(dir).name(),
           e.dr.cbphi.c[size_t(dir)].project(-1, false).val_only());
  return c;
}

template <class K>
Check z_normal(const Environment<K>& e, const Checker<K>& ck) {
  using Ops = ScalarOps<K>;
  using LS = LaurentSeries<K>;
  Check c{"detZ"};
  ck.series(c, "det(Z)+4*gamma*l^2",
            e.dr.Z.det().val + LS::monomial(2, Ops::from_int(4) * e.gam));
  LoopMatrix<K> z2 = e.dr.Z * e.dr.Z;
  LoopMatrix<K> want = e.mzero();
  want.e11 = e.mono(2, Ops::from_int(4) * e.gam);
  want.e22 = want.e11;
  ck.mat(c, "Z^2-4*gamma*l^2", (z2 - want).val_only());
  if (!e.dr.Z.twisted_pattern()) c.fail_note("Z is not twisted");
  return c;
}

// e^{zeta} = cosh(2 sqrt(gamma) lambda ttt) I + sinhc(...) lambda ttt Z,
// solving d(e^zeta) = e^zeta Z alpha.
template <class K>
Check wave_exponential(const Environment<K>& e, const Checker<K>& ck) {
  using Ops = ScalarOps<K>;
  Check c{"wave"};
  DSeries<K> w = e.tttj.shifted(1).scaled(Ops::from_int(2) * e.g);
  DSeries<K> ch = analytic_apply(AnalyticFn::Cosh, w, e.wlo, e.whi);
  DSeries<K> shc = analytic_apply(AnalyticFn::Sinhc, w, e.wlo, e.whi);
  // e^{zeta} with zeta = Z ttt and Z^2 = 4 gamma lambda^2:
  // cosh(w) I + sinhc(w) ttt Z, w = 2 sqrt(gamma) lambda ttt
  LoopMatrix<K> ez = LoopMatrix<K>::identity(e.D).scaled(ch) +
                     e.dr.Z.scaled(shc * e.tttj);
  for (int dir = 0; dir < e.D; ++dir) {
    LoopMatrix<K> za = e.dr.Z.scaled(e.h.alpha.c[size_t(dir)]);
    LoopMatrix<K> r = dir_grad(ez, dir) - ez * za;
    ck.mat(c, e.cf.label(dir).name(), r.val_only());
  }
  return c;
}

// The theta coefficients a form would carry at an inactive sigma index.
template <class K>
std::pair<DSeries<K>, DSeries<K>> theta_sigma_coeff(const Environment<K>& e,
                                                    const DSeries<K>& ibc, int i,
                                                    bool bar) {
  using Ops = ScalarOps<K>;
  LoopMatrix<K> W = cbphi_sigma_coeff(e, i, bar);
  DSeries<K> b12 = e.B * W.e12, c21 = e.C * W.e21;
  DSeries<K> thp = e.A.scaled(Ops::i() * Ops::frac(1, 2)) * (b12 - c21) * ibc;
  DSeries<K> thm = ((b12 + c21) * ibc).scaled(-e.g).shifted(2);
  return {thp, thm};
}

// theta+- : closedness, the Omega decomposition, and
// theta+ = -(1/2) d log(b c).
template <class K>
Check uv_system(const Environment<K>& e, const Checker<K>& ck) {
  using Ops = ScalarOps<K>;
  Check c{"bthetapm"};
  DSeries<K> ibc0 = (e.B * e.C).inverse(e.wlo, e.whi).val_only();
  std::function<DSeries<K>(int, bool)> tp = [&](int i, bool bar) {
    return theta_sigma_coeff(e, ibc0, i, bar).first.val_only();
  };
  std::function<DSeries<K>(int, bool)> tm = [&](int i, bool bar) {
    return theta_sigma_coeff(e, ibc0, i, bar).second.val_only();
  };
  auto dthp = exterior_d(e.dr.thp, e.cdiff, e.D) + sigma_tail_correction(e, tp);
  auto dthm = exterior_d(e.dr.thm, e.cdiff, e.D) + sigma_tail_correction(e, tm);
  Check c1{"dth+"}, c2{"dth-"};
  ck.twoform(c1, dthp);
  ck.twoform(c2, dthm);
  c.merge(c1);
  c.merge(c2);

  DSeries<K> bc = e.B * e.C;
  DSeries<K> ibc = ibc0;
  for (int dir = 0; dir < e.D; ++dir) {
    // Omega - (I th+ + E th-) = 0 by construction; check the off-slot
    const auto& om = e.dr.Omega.c[size_t(dir)];
    ck.ds(c, "omega11-12 " + e.cf.label(dir).name(),
          (om.e11 - e.dr.thp.c[size_t(dir)]).val_only());
    ck.ds(c, "omega21 " + e.cf.label(dir).name(),
          (om.e21 - om.e12.shifted(-2)).val_only());
    // theta+ + (1/2) d log(bc) = 0
    DSeries<K> dlog = DSeries<K>::konst(bc.d[size_t(dir)], e.D) * ibc;
    ck.ds(c, "th+logbc " + e.cf.label(dir).name(),
          (e.dr.thp.c[size_t(dir)] + dlog.scaled(Ops::frac(1, 2))).val_only());
  }
  return c;
}

// g = e^{sigma+} [[cosh, -lambda sinh],[-sinh/lambda, cosh]](lambda p)
// solves dg = g Omega; det g = e^{2 sigma+}.
template <class K>
Check closed_form_g(const Environment<K>& e, const Checker<K>& ck) {
  using Ops = ScalarOps<K>;
  Check c{"gformula"};
  DSeries<K> lp = e.Pj.shifted(1);
  DSeries<K> ch = analytic_apply(AnalyticFn::Cosh, lp, e.wlo, e.whi);
  DSeries<K> sh = analytic_apply(AnalyticFn::Sinh, lp, e.wlo, e.whi);
  LoopMatrix<K> gm(e.D);
  gm.e11 = ch;
  gm.e22 = ch;
  gm.e12 = -sh.shifted(1);
  gm.e21 = -sh.shifted(-1);
  gm = gm.scaled(e.dr.esig);
  for (int dir = 0; dir < e.D; ++dir) {
    LoopMatrix<K> r = dir_grad(gm, dir) - gm * e.dr.Omega.c[size_t(dir)];
    ck.mat(c, e.cf.label(dir).name(), r.val_only());
  }
  ck.series(c, "det(g)-e^{2sig+}", (gm.det() - e.dr.esig * e.dr.esig).val_only().val);
  // normalization 4 e^{2 sigma+} b c = 1
  DSeries<K> norm = (e.dr.esig * e.dr.esig * e.B * e.C).scaled(Ops::from_int(4));
  ck.series(c, "bsigma+normal", (norm - e.konst(Ops::one())).val);
  return c;
}

// lambda^0 term of dp: the displayed leading expansion.
template <class K>
Check dp_expansion(const Environment<K>& e, const Checker<K>& ck) {
  using Ops = ScalarOps<K>;
  Check c{"bbp"};
  K h2v = e.sval * e.sval, h2bv = e.conj(h2v);
  K b4 = e.b_val[1], c4 = e.c_val[1];
  K g2 = Ops::from_int(2) * e.g;
  K want_xi = (h2v * b4 - e.gam * c4) / g2;
  K want_xb = Ops::i() * (h2v * h2bv + e.gam * e.gam) / (g2 * e.sval);
  auto got_xi = e.Pj.d[size_t(e.cf.xi())].coeff(0);
  auto got_xb = e.Pj.d[size_t(e.cf.xibar())].coeff(0);
  if (!got_xi || !got_xb) {
    c.fail_note("dp lambda^0 term not certified");
    return c;
  }
  ck.series(c, "dp0/xi", LaurentSeries<K>::konst(*got_xi - want_xi));
  ck.series(c, "dp0/xibar", LaurentSeries<K>::konst(*got_xb - want_xb));
  return c;
}

}  // namespace cmch::dressing
