#pragma once

// Suites for the additional Killing fields: the sl2-type bracket and
// product relations, determinant and trace tables, the Killing field
// equations for V (dressed) and P (undressed, in the trig slice), and
// the normalization perturbation control.

#include "cmch/towers.hpp"

namespace cmch::killing {

template <class K>
void check_trig_zero(const Checker<K>& ck, Check& c, const std::string& where,
                     const TrigMat<K>& t) {
  ck.mat(c, where + " [1]", t.m1.val_only());
  ck.mat(c, where + " [ch]", t.mc.val_only());
  ck.mat(c, where + " [sh]", t.ms.val_only());
  ck.mat(c, where + " [sh2]", t.mss.val_only());
  ck.mat(c, where + " [chsh]", t.mcs.val_only());
}

template <class K>
void check_trig_scalar_zero(const Checker<K>& ck, Check& c, const std::string& where,
                            const TrigScalar<K>& t) {
  ck.series(c, where + " [1]", t.c1.val);
  ck.series(c, where + " [ch]", t.cc.val);
  ck.series(c, where + " [sh]", t.cs.val);
  ck.series(c, where + " [sh2]", t.css.val);
  ck.series(c, where + " [chsh]", t.ccs.val);
}

// Bracket and product relations for {Y, V+-}.
template <class K>
Check v_relations(const Environment<K>& e, const Checker<K>& ck) {
  using Ops = ScalarOps<K>;
  Check c{"YVV"};
  K g4 = Ops::from_int(4) * e.g, g2 = Ops::from_int(2) * e.g;
  const auto &Y = e.h.Y, &Vp = e.kl.Vp, &Vm = e.kl.Vm;
  ck.mat(c, "[Y,V+]-4gV-", (bracket(Y, Vp) - Vm.scaled(g4)).val_only());
  ck.mat(c, "[Y,V-]-4gl2V+", (bracket(Y, Vm) - Vp.scaled(g4).shifted(2)).val_only());
  ck.mat(c, "[V+,V-]-gY", (bracket(Vp, Vm) - Y.scaled(e.g)).val_only());
  ck.mat(c, "YV+-2gV-", (Y * Vp - Vm.scaled(g2)).val_only());
  ck.mat(c, "V+Y+2gV-", (Vp * Y + Vm.scaled(g2)).val_only());
  ck.mat(c, "YV--2gl2V+", (Y * Vm - Vp.scaled(g2).shifted(2)).val_only());
  ck.mat(c, "V-Y+2gl2V+", (Vm * Y + Vp.scaled(g2).shifted(2)).val_only());
  ck.mat(c, "V+V--g/2Y", (Vp * Vm - Y.scaled(e.g * Ops::frac(1, 2))).val_only());
  ck.mat(c, "V-V++g/2Y", (Vm * Vp + Y.scaled(e.g * Ops::frac(1, 2))).val_only());
  return c;
}

template <class K>
Check v_determinants(const Environment<K>& e, const Checker<K>& ck) {
  using LS = LaurentSeries<K>;
  Check c{"VVdet"};
  ck.series(c, "det(V+)-gamma", (e.kl.Vp.det().val - LS::konst(e.gam)));
  ck.series(c, "det(V-)+gamma*l^2", (e.kl.Vm.det().val + LS::monomial(2, e.gam)));
  ck.series(c, "tr(YV+)", (e.h.Y * e.kl.Vp).trace().val);
  ck.series(c, "tr(YV-)", (e.h.Y * e.kl.Vm).trace().val);
  ck.series(c, "tr(V+V-)", (e.kl.Vp * e.kl.Vm).trace().val);
  // V+ is g_{>=0}-valued, V- is g_{>=1}-valued
  ck.mat(c, "V+proj", e.kl.Vp.project(-1, false).val_only());
  ck.mat(c, "V-proj", e.kl.Vm.project(0, false).val_only());
  return c;
}

// d V+- + [cbphi, V+-] = 0 (the extended cbphi carries the sigma modes).
template <class K>
Check v_killing(const Environment<K>& e, const Checker<K>& ck) {
  Check c{e.cf.mode() == Mode::Base ? "Vst" : "dV+2"};
  for (int dir = 0; dir < e.D; ++dir) {
    for (auto [name, V] : {std::pair<const char*, const LoopMatrix<K>*>{"V+", &e.kl.Vp},
                           {"V-", &e.kl.Vm}}) {
      LoopMatrix<K> r = dir_grad(*V, dir) + bracket(e.dr.cbphi.c[size_t(dir)], *V);
      ck.mat(c, std::string(name) + " " + e.cf.label(dir).name(), r.val_only());
    }
  }
  return c;
}

// The same bracket/product/determinant relations for {Y, P+-}, in the
// trig slice.
template <class K>
Check p_relations(const Environment<K>& e, const Checker<K>& ck) {
  using Ops = ScalarOps<K>;
  Check c{"YPP"};
  K g4 = Ops::from_int(4) * e.g, g2 = Ops::from_int(2) * e.g;
  TrigMat<K> Y = TrigMat<K>::pure(e.h.Y);
  const auto &Pp = e.kl.Pp, &Pm = e.kl.Pm;
  check_trig_zero(ck, c, "[Y,P+]-4gP-", bracket(Y, Pp) - Pm.scaled(g4));
  check_trig_zero(ck, c, "[Y,P-]-4gl2P+",
                  bracket(Y, Pm) - Pp.scaled(g4).shifted_all(2));
  check_trig_zero(ck, c, "[P+,P-]-gY", bracket(Pp, Pm) - Y.scaled(e.g));
  check_trig_zero(ck, c, "YP+-2gP-", Y * Pp - Pm.scaled(g2));
  check_trig_zero(ck, c, "P+Y+2gP-", Pp * Y + Pm.scaled(g2));
  check_trig_zero(ck, c, "YP--2gl2P+", Y * Pm - Pp.scaled(g2).shifted_all(2));
  check_trig_zero(ck, c, "P-Y+2gl2P+", Pm * Y + Pp.scaled(g2).shifted_all(2));
  check_trig_zero(ck, c, "P+P--g/2Y", Pp * Pm - Y.scaled(e.g * Ops::frac(1, 2)));
  check_trig_zero(ck, c, "P-P++g/2Y", Pm * Pp + Y.scaled(e.g * Ops::frac(1, 2)));
  return c;
}

template <class K>
Check p_determinants(const Environment<K>& e, const Checker<K>& ck) {
  Check c{"PPdet"};
  TrigScalar<K> dp = trig_det(e.kl.Pp);
  dp.c1 = dp.c1 - e.konst(e.gam);
  check_trig_scalar_zero(ck, c, "det(P+)-gamma", dp);
  TrigScalar<K> dm = trig_det(e.kl.Pm);
  dm.c1 = dm.c1 + e.mono(2, e.gam);
  check_trig_scalar_zero(ck, c, "det(P-)+gamma*l^2", dm);
  TrigMat<K> Y = TrigMat<K>::pure(e.h.Y);
  check_trig_scalar_zero(ck, c, "tr(YP+)", trig_trace(Y * e.kl.Pp));
  check_trig_scalar_zero(ck, c, "tr(P+P-)", trig_trace(e.kl.Pp * e.kl.Pm));
  return c;
}

// Membership: P+- decompose over {ch, sh} with g_{>=0}-valued
// components and no constant part.
template <class K>
Check p_membership(const Environment<K>& e, const Checker<K>& ck) {
  Check c{"PPpm"};
  ck.mat(c, "P+ [1]", e.kl.Pp.m1.val_only());
  ck.mat(c, "P- [1]", e.kl.Pm.m1.val_only());
  for (auto [nm, P] : {std::pair<const char*, const TrigMat<K>*>{"P+", &e.kl.Pp},
                       {"P-", &e.kl.Pm}}) {
    ck.mat(c, std::string(nm) + " [ch]proj", P->mc.project(-1, false).val_only());
    ck.mat(c, std::string(nm) + " [sh]proj", P->ms.project(-1, false).val_only());
  }
  return c;
}

// dP+- + [phihat, P+-] + (Pdot, Pdot - P) sigma = 0, and the equivalent
// form with hbphi - S sigma.
template <class K>
Check p_killing(const Environment<K>& e, const Checker<K>& ck) {
  Check c{e.cf.mode() == Mode::Base ? "PPkf" : "dP+2"};
  TrigMat<K> Ppdot = e.kl.Pp.euler(e.kl.wdot);
  TrigMat<K> Pmdot = e.kl.Pm.euler(e.kl.wdot);
  for (int dir = 0; dir < e.D; ++dir) {
    const auto& wd = e.kl.dw.c[size_t(dir)];
    TrigMat<K> ph = TrigMat<K>::pure(e.h.phihat.c[size_t(dir)]);
    const auto& sg = e.h.sigma.c[size_t(dir)];
    TrigMat<K> rp = e.kl.Pp.dir_deriv(dir, wd) + bracket(ph, e.kl.Pp);
    TrigMat<K> rm = e.kl.Pm.dir_deriv(dir, wd) + bracket(ph, e.kl.Pm);
    if (!sg.val.is_exact_zero()) {
      rp = rp + Ppdot.scaled(sg);
      rm = rm + (Pmdot - e.kl.Pm).scaled(sg);
    }
    check_trig_zero(ck, c, "P+ " + e.cf.label(dir).name(), rp);
    check_trig_zero(ck, c, "P- " + e.cf.label(dir).name(), rm);
  }
  return c;
}

// Perturbing sigma+ off its normalization: with e^{sigma+} scaled by
// cfac, [V+,V-] - gamma^{1/2} Y picks up exactly (cfac^2 - 1) sqrt(g) Y.
template <class K>
Check sigma_perturbation(const Environment<K>& e, const Checker<K>& ck, long num, long den) {
  using Ops = ScalarOps<K>;
  Check c{"bsigma+perturb"};
  K cfac = Ops::frac(num, den);
  VProfile<K> p;
  p.A = e.A.val_only();
  p.B = e.B.val_only();
  p.C = e.C.val_only();
  p.esig = e.dr.esig.val_only().scaled(cfac);
  DSeries<K> lp = e.Pj.val_only().shifted(1);
  p.ch = analytic_apply(AnalyticFn::Cosh, lp, e.wlo, e.whi);
  DSeries<K> sh = analytic_apply(AnalyticFn::Sinh, lp, e.wlo, e.whi);
  p.shl = sh.shifted(-1);
  p.shL = sh.shifted(1);
  p.g = e.g;
  auto [Vp, Vm] = build_V_profile(p, e.D);
  // residual equals (cfac^2-1) g Y exactly: linear in the normalization defect
  LoopMatrix<K> resid = bracket(Vp, Vm) - e.h.Y.scaled(e.g);
  LoopMatrix<K> want = e.h.Y.scaled((cfac * cfac - Ops::one()) * e.g);
  ck.mat(c, "defect-shape", (resid - want).val_only());
  Check nz{"nonzero"};
  ck.mat(nz, "perturbed", resid.val_only());
  if (nz.pass) c.fail_note("perturbed bracket did not move");
  return c;
}

}  // namespace cmch::killing
