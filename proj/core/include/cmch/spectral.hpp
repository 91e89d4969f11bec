#pragma once

// Spectral Killing field suites: the adjoint-operator construction and
// its resolution of identity, the V-based formula, the inhomogeneous
// Killing equation, the bracket normal forms, and d(det S).

#include "cmch/killing.hpp"

namespace cmch::spectral {

// Adjoint route via P+- in the trig slice: the trig components must all
// cancel and the pure part must reproduce S.
template <class K>
Check adjoint_resolution(const Environment<K>& e, const Checker<K>& ck) {
  using Ops = ScalarOps<K>;
  Check c{"Rformula"};
  DSeries<K> c0 = e.mono(-2, Ops::one() / (Ops::from_int(32) * e.gam));
  DSeries<K> cp = e.konst(-(Ops::one() / (Ops::from_int(8) * e.gam)));
  DSeries<K> cm = e.mono(-2, Ops::one() / (Ops::from_int(8) * e.gam));
  TrigMat<K> Y = TrigMat<K>::pure(e.h.Y);
  TrigMat<K> SP = bracket(Y, Y.euler(e.kl.wdot)).scaled(c0) +
                  bracket(e.kl.Pp, e.kl.Pp.euler(e.kl.wdot)).scaled(cp) +
                  bracket(e.kl.Pm, e.kl.Pm.euler(e.kl.wdot)).scaled(cm);
  SP.m1 = SP.m1 - e.sp.S;
  killing::check_trig_zero(ck, c, "S(adjP)-S", SP);
  return c;
}

template <class K>
TrigMat<K> adpow_trig(const TrigMat<K>& a, const TrigMat<K>& x) {
  return bracket(a, bracket(a, x));
}

// (c0 ad_Y^2 + c+ ad_{P+}^2 + c- ad_{P-}^2)(X) = X on twisted elements.
template <class K>
Check operator_identity(const Environment<K>& e, const Checker<K>& ck, int samples) {
  using Ops = ScalarOps<K>;
  Check c{"adresolution"};
  Rng rng(e.cfg.seed ^ 0x5eedULL);
  DSeries<K> c0 = e.mono(-2, Ops::one() / (Ops::from_int(32) * e.gam));
  DSeries<K> cp = e.konst(-(Ops::one() / (Ops::from_int(8) * e.gam)));
  DSeries<K> cm = e.mono(-2, Ops::one() / (Ops::from_int(8) * e.gam));
  TrigMat<K> Y = TrigMat<K>::pure(e.h.Y.val_only());
  for (int s = 0; s < samples; ++s) {
    // random twisted polynomial element
    LoopMatrix<K> X(e.D);
    for (int d = -4; d <= 4; ++d) {
      K v = rng.template gauss<K>();
      if (d % 2 == 0) {
        X.e11.val.set(d, v);
        X.e22.val.set(d, -v);
      } else {
        X.e12.val.set(d, v);
        X.e21.val.set(d, rng.template gauss<K>());
      }
    }
    TrigMat<K> tx = TrigMat<K>::pure(X);
    TrigMat<K> r = adpow_trig(Y, tx).scaled(c0) + adpow_trig(e.kl.Pp, tx).scaled(cp) +
                   adpow_trig(e.kl.Pm, tx).scaled(cm);
    r.m1 = r.m1 - X;
    killing::check_trig_zero(ck, c, "sample" + std::to_string(s), r);
  }
  return c;
}

// S = (tttdot + ttt) Y + Scheck, and the coefficient display for
// tttdot + ttt.
template <class K>
Check rv_formula(const Environment<K>& e, const Checker<K>& ck) {
  using Ops = ScalarOps<K>;
  using LS = LaurentSeries<K>;
  Check c{"RVformula"};
  // tttdot + ttt = (i/2) sum (2m+1) lambda^{-(2m+2)} t_m
  LS want;
  for (int m = 0; m <= e.cfg.N; ++m)
    want.set(-(2 * m + 2),
             Ops::i() * Ops::frac(2 * m + 1, 2) * e.t_val[size_t(m)]);
  ck.series(c, "tfac", e.sp.tfac.val - want);
  // Scheck is g_{>=1}-valued
  ck.mat(c, "Scheck-proj", e.sp.Scheck.project(0, false).val_only());
  // S is trace-free and twisted
  ck.series(c, "tr(S)", e.sp.S.trace().val);
  if (!e.sp.S.twisted_pattern()) c.fail_note("S not twisted");
  return c;
}

// d S + [phi, S] = phidot (base mode), with the degree >= 2N+2 part also
// checked against the homogeneous equation.
template <class K>
Check inhom_killing(const Environment<K>& e, const Checker<K>& ck) {
  Check c{"inhomKF"};
  auto phid = e.h.phihat.euler();
  for (int dir = 0; dir < e.D; ++dir) {
    LoopMatrix<K> r = dir_grad(e.sp.S, dir) + bracket(e.h.phihat.c[size_t(dir)], e.sp.S) -
                      phid.c[size_t(dir)];
    ck.mat(c, e.cf.label(dir).name(), r.val_only());
    LoopMatrix<K> hom =
        (dir_grad(e.sp.S, dir) + bracket(e.h.phihat.c[size_t(dir)], e.sp.S))
            .project(2 * e.cfg.N + 2, true);
    ck.mat(c, "hom " + e.cf.label(dir).name(), hom.val_only());
  }
  return c;
}

// d Scheck + [cbphi, Scheck] = cbphi-dot (the dressed spectral equation
// and its affine extension).
template <class K>
Check dressed_spectral(const Environment<K>& e, const Checker<K>& ck) {
  Check c{"dcS+"};
  auto cbd = e.dr.cbphi.euler();
  for (int dir = 0; dir < e.D; ++dir) {
    LoopMatrix<K> r = dir_grad(e.sp.Scheck, dir) +
                      bracket(e.dr.cbphi.c[size_t(dir)], e.sp.Scheck) -
                      cbd.c[size_t(dir)];
    ck.mat(c, e.cf.label(dir).name(), r.val_only());
  }
  return c;
}

// Generic compatibility precondition for an inhomogeneous right side.
template <class K>
Check compatibility(const Environment<K>& e, const Checker<K>& ck,
                    const OneForm<LoopMatrix<K>>& omega, const std::string& label) {
  Check c{label};
  auto W = exterior_d(omega, e.cdiff, e.D) + wedge(e.h.phihat, omega, e.D) +
           wedge(omega, e.h.phihat, e.D);
  ck.twoform(c, W);
  return c;
}

// Bracket normal forms of the spectral field against Y, V+- and P+-.
template <class K>
Check bracket_normal_forms(const Environment<K>& e, const Checker<K>& ck) {
  Check c{"mus"};
  const auto &Y = e.h.Y, &S = e.sp.S, &Sc = e.sp.Scheck;
  ck.mat(c, "[V+,Sc]-V+dot",
         (bracket(e.kl.Vp, Sc) - e.kl.Vp.euler()).val_only());
  ck.mat(c, "[V-,Sc]-V-dot+V-",
         (bracket(e.kl.Vm, Sc) - e.kl.Vm.euler() + e.kl.Vm).val_only());
  ck.mat(c, "[Y,Sc]-Ydot+Y", (bracket(Y, Sc) - Y.euler() + Y).val_only());
  ck.mat(c, "[Y,S]-Ydot+Y", (bracket(Y, S) - Y.euler() + Y).val_only());
  TrigMat<K> St = TrigMat<K>::pure(S);
  killing::check_trig_zero(ck, c, "[P+,S]-P+dot",
                           bracket(e.kl.Pp, St) - e.kl.Pp.euler(e.kl.wdot));
  killing::check_trig_zero(
      ck, c, "[P-,S]-P-dot+P-",
      bracket(e.kl.Pm, St) - e.kl.Pm.euler(e.kl.wdot) + e.kl.Pm);
  return c;
}

// the key identity [S, l^{-1} Y] + D(l^{-1} Y) = 0.
template <class K>
Check key_formula(const Environment<K>& e, const Checker<K>& ck) {
  Check c{"keyformula"};
  LoopMatrix<K> ly = e.h.Y.shifted(-1);
  ck.mat(c, "key", (bracket(e.sp.S, ly) + ly.euler()).val_only());
  return c;
}

// d(det S) = -tr(S phihatdot) along every direction; Cayley-Hamilton for
// S backs the derivation.
template <class K>
Check det_s(const Environment<K>& e, const Checker<K>& ck) {
  Check c{"ddetS"};
  DSeries<K> ds = e.sp.S.det();
  auto phid = e.h.phihat.euler();
  for (int dir = 0; dir < e.D; ++dir) {
    DSeries<K> tr = (e.sp.S * phid.c[size_t(dir)]).trace();
    LaurentSeries<K> r = ds.d[size_t(dir)] + tr.val;
    ck.series(c, e.cf.label(dir).name(), r);
  }
  // S^2 + det(S) I = 0
  LoopMatrix<K> s2 = e.sp.S * e.sp.S;
  LoopMatrix<K> want(e.D);
  want.e11 = ds;
  want.e22 = ds;
  ck.mat(c, "cayley", (s2 + want).val_only());
  return c;
}

}  // namespace cmch::spectral
