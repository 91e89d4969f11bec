#pragma once

// Construction of every matrix object of the hierarchy, bottom-up:
// Y and its U_m decomposition, the Maurer-Cartan forms, the dressed form
// cbphi, the additional Killing fields V/P, the normalized spectral
// Killing field, and (in plus mode) the conjugate-transpose tower.
//
// build_all() runs the staged pipeline: sample values, extract the flow
// table from the Killing field equations, rebuild with full jets, then
// install the sigma-direction data and the coframe differentials.

#include "cmch/environment.hpp"

namespace cmch {

// ---- hierarchy --------------------------------------------------------

template <class K>
LoopMatrix<K> build_Y(const Environment<K>& e) {
  return LoopMatrix<K>::algebra(e.A, e.B, e.C);
}

template <class K>
LoopMatrix<K> build_Ybt(const Environment<K>& e) {
  // conj transpose of Y assembled from the conjugated streams
  return LoopMatrix<K>::algebra(-e.Ab, e.Cb, e.Bb);
}

// U_m = (1/2i) (lambda^{-(2m+2)} Y)_{<=-1}
template <class K>
LoopMatrix<K> build_U(const LoopMatrix<K>& Y, int m) {
  using Ops = ScalarOps<K>;
  K c = Ops::frac(-1, 2) * Ops::i();
  return Y.shifted(-(2 * m + 2)).project(-1, false).scaled(c);
}

// (1/2i) (lambda^{-(2m+2)} Y)_{>=0}
template <class K>
LoopMatrix<K> build_U_tail(const LoopMatrix<K>& Y, int m) {
  using Ops = ScalarOps<K>;
  K c = Ops::frac(-1, 2) * Ops::i();
  return Y.shifted(-(2 * m + 2)).project(0, true).scaled(c);
}

// conj transpose of U_m: (i/2) (lambda^{2m+2} Ybt)_{>=1}
template <class K>
LoopMatrix<K> build_Ubt(const LoopMatrix<K>& Ybt, int m) {
  using Ops = ScalarOps<K>;
  K c = Ops::frac(1, 2) * Ops::i();
  return Ybt.shifted(2 * m + 2).project(1, true).scaled(c);
}

template <class K>
void build_hier(Environment<K>& e) {
  using Ops = ScalarOps<K>;
  auto& h = e.h;
  h.Y = build_Y(e);
  h.Ybt = build_Ybt(e);
  h.U.clear();
  h.Ubt.clear();
  for (int m = 0; m <= e.cfg.N; ++m) {
    h.U.push_back(build_U(h.Y, m));
    h.Ubt.push_back(build_Ubt(h.Ybt, m));
  }

  // base Maurer-Cartan form
  h.phi = OneForm<LoopMatrix<K>>::zero(e.D, e.D);
  {
    auto& fxi = h.phi.c[size_t(e.cf.xi())];
    fxi.e12 = e.h2.scaled(Ops::frac(-1, 2)).shifted(-1);
    fxi.e21 = e.mono(-1, e.gam * Ops::frac(1, 2));
    auto& fxb = h.phi.c[size_t(e.cf.xibar())];
    fxb.e12 = e.mono(1, -(e.gam * Ops::frac(1, 2)));
    fxb.e21 = e.h2bar.scaled(Ops::frac(1, 2)).shifted(1);
    auto& fr = h.phi.c[size_t(e.cf.rho())];
    fr.e11 = e.konst(Ops::i() * Ops::frac(1, 2));
    fr.e22 = e.konst(-(Ops::i() * Ops::frac(1, 2)));
    for (int m = 1; m <= e.cfg.N; ++m) {
      h.phi.c[size_t(e.cf.find(DirLabel::T, m))] = h.U[size_t(m)];
      h.phi.c[size_t(e.cf.find(DirLabel::TBar, m))] = -h.Ubt[size_t(m)];
    }
  }

  // alpha = (1/2i) sum_m lambda^{-(2m+2)} dt_m, with dt_0 folded into xi
  h.alpha = OneForm<DSeries<K>>::zero(e.D, e.D);
  {
    K i4 = Ops::i() * Ops::frac(1, 4);
    h.alpha.c[size_t(e.cf.xi())] = e.sj.scaled(i4).shifted(-2);
    K mi2 = Ops::frac(-1, 2) * Ops::i();
    for (int m = 1; m <= e.cfg.N; ++m)
      h.alpha.c[size_t(e.cf.find(DirLabel::T, m))] = e.mono(-(2 * m + 2), mi2);
  }

  // Virasoro generating 1-form and its Euler derivative
  h.sigma = OneForm<DSeries<K>>::zero(e.D, e.D);
  for (int dir : e.cf.sg_dirs())
    h.sigma.c[size_t(dir)] = e.mono(-2 * e.cf.label(dir).idx, Ops::one());
  for (int dir : e.cf.sgbar_dirs())
    h.sigma.c[size_t(dir)] = e.mono(2 * e.cf.label(dir).idx, -Ops::one());
  h.sigma_dot = h.sigma.euler();
}

// ---- spectral projections ----------------------------------------------

// S_k = (lambda^{-2k} S)_{<=-1}
template <class K>
LoopMatrix<K> spectral_Sk(const Environment<K>& e, int k) {
  return e.sp.S.shifted(-2 * k).project(-1, false);
}

// S_{(k+1)} = (lambda^{-2k} S)_{>=0}
template <class K>
LoopMatrix<K> spectral_Sk_tail(const Environment<K>& e, int k) {
  return e.sp.S.shifted(-2 * k).project(0, true);
}

// Sbar^t_l = (lambda^{2l} Sbar^t)_{>=1}
template <class K>
LoopMatrix<K> spectral_Sbt(const Environment<K>& e, int l) {
  return e.cj.Sbt.shifted(2 * l).project(1, true);
}

// ---- extended Maurer-Cartan form ----------------------------------------

template <class K>
void build_phihat(Environment<K>& e) {
  e.h.phihat = e.h.phi;
  for (int dir : e.cf.sg_dirs())
    e.h.phihat.c[size_t(dir)] = spectral_Sk(e, e.cf.label(dir).idx);
  for (int dir : e.cf.sgbar_dirs())
    e.h.phihat.c[size_t(dir)] = -spectral_Sbt(e, e.cf.label(dir).idx);
}

// ---- dressing -----------------------------------------------------------

// cbphi: g_{>=0}-valued Maurer-Cartan form for dressing. Base components
// follow the U-tail formula; sigma components are -S_{(k+1)} (minus type)
// and -(Sbar^t_l - lambda^{2l} S) (plus type), which realizes
// phihat - cbphi = Y alpha + S sigma.
template <class K>
void build_cbphi(Environment<K>& e, bool with_sigma) {
  using Ops = ScalarOps<K>;
  auto& d = e.dr;
  d.cbphi = OneForm<LoopMatrix<K>>::zero(e.D, e.D);
  d.cbphi.c[size_t(e.cf.xi())] = build_U_tail(e.h.Y, 0).scaled(e.sj.scaled(Ops::frac(1, 2)));
  d.cbphi.c[size_t(e.cf.xibar())] = e.h.Ubt[0].scaled(e.sjbar.scaled(Ops::frac(1, 2)));
  {
    auto& fr = d.cbphi.c[size_t(e.cf.rho())];
    fr.e11 = e.konst(Ops::i() * Ops::frac(1, 2));
    fr.e22 = e.konst(-(Ops::i() * Ops::frac(1, 2)));
  }
  for (int m = 1; m <= e.cfg.N; ++m) {
    d.cbphi.c[size_t(e.cf.find(DirLabel::T, m))] = -build_U_tail(e.h.Y, m);
    d.cbphi.c[size_t(e.cf.find(DirLabel::TBar, m))] = -e.h.Ubt[size_t(m)];
  }
  if (with_sigma) {
    for (int dir : e.cf.sg_dirs())
      d.cbphi.c[size_t(dir)] = -spectral_Sk_tail(e, e.cf.label(dir).idx);
    for (int dir : e.cf.sgbar_dirs()) {
      int l = e.cf.label(dir).idx;
      d.cbphi.c[size_t(dir)] = -spectral_Sbt(e, l) + e.sp.S.shifted(2 * l);
    }
  }
}

template <class K>
void build_dress(Environment<K>& e) {
  using Ops = ScalarOps<K>;
  auto& d = e.dr;

  d.Z = e.mzero();
  d.Z.e12 = e.mono(1, Ops::from_int(2) * Ops::i());
  d.Z.e21 = e.mono(1, Ops::from_int(-2) * Ops::i() * e.gam);

  // e^{sigma+} = (4 b c)^{-1/2}: the normalization 4 e^{2 sigma+} b c = 1
  DSeries<K> bc = e.B * e.C;
  d.esig = bc.scaled(Ops::from_int(4)).inverse(e.wlo, e.whi).sqrt(e.wlo, e.whi);

  // theta+- and Omega from the cbphi entries
  DSeries<K> ibc = bc.inverse(e.wlo, e.whi);
  d.thp = OneForm<DSeries<K>>::zero(e.D, e.D);
  d.thm = OneForm<DSeries<K>>::zero(e.D, e.D);
  d.Omega = OneForm<LoopMatrix<K>>::zero(e.D, e.D);
  DSeries<K> ia2 = e.A.scaled(Ops::i() * Ops::frac(1, 2));
  for (int dir = 0; dir < e.D; ++dir) {
    const auto& cp = d.cbphi.c[size_t(dir)];
    DSeries<K> bphi12 = e.B * cp.e12;
    DSeries<K> cphi21 = e.C * cp.e21;
    d.thp.c[size_t(dir)] = ia2 * (bphi12 - cphi21) * ibc;
    d.thm.c[size_t(dir)] = ((bphi12 + cphi21) * ibc).scaled(-e.g).shifted(2);
    auto& om = d.Omega.c[size_t(dir)];
    om.e11 = d.thp.c[size_t(dir)];
    om.e22 = d.thp.c[size_t(dir)];
    om.e12 = d.thm.c[size_t(dir)];
    om.e21 = d.thm.c[size_t(dir)].shifted(-2);
  }
}

// ---- additional Killing fields ------------------------------------------

// The V ansatz profile, shared between the plain tower and its conjugate
// transpose (which uses swapped, negated streams and mirrored shifts).
template <class K>
struct VProfile {
  DSeries<K> A, B, C;   // streams entering the ansatz
  DSeries<K> esig;      // e^{sigma+}
  DSeries<K> ch, shl, shL;  // cosh(arg), sinh(arg)/lambda-like, sinh(arg)*lambda-like
  K g;
};

template <class K>
std::pair<LoopMatrix<K>, LoopMatrix<K>> build_V_profile(const VProfile<K>& p, int D) {
  using Ops = ScalarOps<K>;
  K two = Ops::from_int(2), i = Ops::i();
  DSeries<K> bc = p.B * p.C, ab = p.A * p.B, ac = p.A * p.C;
  LoopMatrix<K> Vp(D), Vm(D);
  Vp.e11 = (p.shl * bc).scaled(two);
  Vp.e22 = -Vp.e11;
  Vp.e12 = (p.ch * p.C).scaled(two * p.g) + (p.shl * ac).scaled(i);
  Vp.e21 = (p.ch * p.B).scaled(-(two * p.g)) + (p.shl * ab).scaled(i);
  Vm.e11 = (p.ch * bc).scaled(-two);
  Vm.e22 = -Vm.e11;
  Vm.e12 = (p.shL * p.C).scaled(-(two * p.g)) - (p.ch * ac).scaled(i);
  Vm.e21 = (p.shL * p.B).scaled(two * p.g) - (p.ch * ab).scaled(i);
  Vp = Vp.scaled(p.esig);
  Vm = Vm.scaled(p.esig);
  return {Vp, Vm};
}

template <class K>
void build_kill(Environment<K>& e) {
  VProfile<K> p;
  p.A = e.A;
  p.B = e.B;
  p.C = e.C;
  p.esig = e.dr.esig;
  DSeries<K> lp = e.Pj.shifted(1);  // lambda p
  p.ch = analytic_apply(AnalyticFn::Cosh, lp, e.wlo, e.whi);
  DSeries<K> sh = analytic_apply(AnalyticFn::Sinh, lp, e.wlo, e.whi);
  p.shl = sh.shifted(-1);
  p.shL = sh.shifted(1);
  p.g = e.g;
  auto [Vp, Vm] = build_V_profile(p, e.D);
  e.kl.Vp = Vp;
  e.kl.Vm = Vm;

  // hyperbolic rotation by w = 4 sqrt(gamma) lambda ttt, kept symbolic in
  // ch(w), sh(w): the rotated fields are formal objects degree by degree
  using Ops = ScalarOps<K>;
  DSeries<K> warg = e.tttj.shifted(1).scaled(Ops::from_int(4) * e.g);
  e.kl.wdot = warg.euler();
  e.kl.dw = OneForm<DSeries<K>>::zero(e.D, e.D);
  for (int dir = 0; dir < e.D; ++dir)
    e.kl.dw.c[size_t(dir)] = e.h.alpha.c[size_t(dir)].shifted(1).scaled(Ops::from_int(4) * e.g);
  e.kl.Pp = TrigMat<K>(e.D);
  e.kl.Pp.mc = Vp;
  e.kl.Pp.ms = -Vm.shifted(-1);
  e.kl.Pm = TrigMat<K>(e.D);
  e.kl.Pm.mc = Vm;
  e.kl.Pm.ms = -Vp.shifted(1);
}

// ---- spectral Killing field ----------------------------------------------

template <class K>
LoopMatrix<K> spectral_from_triple(const Environment<K>& e, const LoopMatrix<K>& Y,
                                   const LoopMatrix<K>& Wp, const LoopMatrix<K>& Wm,
                                   bool flipped) {
  using Ops = ScalarOps<K>;
  // c0 = lambda^{-2}/(32 gamma), c+ = -1/(8 gamma), c- = lambda^{-2}/(8 gamma);
  // the conjugate tower uses lambda^{+2}.
  int sh = flipped ? 2 : -2;
  DSeries<K> c0 = e.mono(sh, Ops::one() / (Ops::from_int(32) * e.gam));
  DSeries<K> cp = e.konst(-(Ops::one() / (Ops::from_int(8) * e.gam)));
  DSeries<K> cm = e.mono(sh, Ops::one() / (Ops::from_int(8) * e.gam));
  return bracket(Y, Y.euler()).scaled(c0) + bracket(Wp, Wp.euler()).scaled(cp) +
         bracket(Wm, Wm.euler()).scaled(cm);
}

template <class K>
void build_spec(Environment<K>& e) {
  e.sp.Scheck = spectral_from_triple(e, e.h.Y, e.kl.Vp, e.kl.Vm, false);
  e.sp.tfac = e.tttj.euler() + e.tttj;
  e.sp.S = e.h.Y.scaled(e.sp.tfac) + e.sp.Scheck;
}

// ---- conjugate-transpose tower --------------------------------------------

template <class K>
DSeries<K> conj_dual_base(const Environment<K>& e, const DSeries<K>& x) {
  // conjugation on base directions; sigma-direction derivatives vanish
  // for the objects this is applied to (t and p data do not flow there
  // unless installed separately).
  DSeries<K> r(e.D);
  r.val = x.val.conj_flip();
  for (int k = 0; k < e.D; ++k) {
    auto kind = e.cf.label(k).kind;
    if (kind == DirLabel::Sg || kind == DirLabel::SgBar) {
      r.d[size_t(k)] = LaurentSeries<K>::unknown();
      continue;
    }
    int ck = e.cf.conj_dir(k);
    r.d[size_t(k)] = ck >= 0 ? x.d[size_t(ck)].conj_flip() : LaurentSeries<K>::unknown();
  }
  return r;
}

template <class K>
void build_conj_tower(Environment<K>& e) {
  using Ops = ScalarOps<K>;
  auto& c = e.cj;
  DSeries<K> bc = e.Bb * e.Cb;
  c.esig_bar = bc.scaled(Ops::from_int(4)).inverse(e.wlo, e.whi).sqrt(e.wlo, e.whi);

  VProfile<K> p;
  p.A = e.Ab;
  p.B = -e.Cb;
  p.C = -e.Bb;
  p.esig = c.esig_bar;
  DSeries<K> lpb = e.Pbj.shifted(-1);  // lambda^{-1} pbar
  p.ch = analytic_apply(AnalyticFn::Cosh, lpb, e.wlo, e.whi);
  DSeries<K> sh = analytic_apply(AnalyticFn::Sinh, lpb, e.wlo, e.whi);
  p.shl = sh.shifted(1);   // mirrored shifts
  p.shL = sh.shifted(-1);
  p.g = e.g;
  auto [Vbp, Vbm] = build_V_profile(p, e.D);
  c.Vbp = Vbp;
  c.Vbm = Vbm;

  c.Scheckb = spectral_from_triple(e, e.h.Ybt, c.Vbp, c.Vbm, true);
  // conj of (ttt-dot + ttt): -D + 1 applied to the flipped series
  DSeries<K> tb = conj_dual_base(e, e.tttj);
  for (int dir : e.cf.sg_dirs()) tb.d[size_t(dir)] = LaurentSeries<K>::zero();
  for (int dir : e.cf.sgbar_dirs()) tb.d[size_t(dir)] = LaurentSeries<K>::zero();
  c.tfac_bar = -tb.euler() + tb;
  c.Sbt = e.h.Ybt.scaled(c.tfac_bar) + c.Scheckb;
  c.built = true;
}

// ---- gradient extraction ---------------------------------------------------

// dY in one base direction from the Killing field equation dY = -[phi, Y].
template <class K>
void install_base_grads(Environment<K>& e) {
  for (int dir = 0; dir < e.D; ++dir) {
    auto kind = e.cf.label(dir).kind;
    if (kind == DirLabel::Sg || kind == DirLabel::SgBar) continue;
    e.install_stream_grad(dir, -bracket(e.h.phi.c[size_t(dir)], e.h.Y));
    e.install_conj_stream_grad(dir, -bracket(e.h.phi.c[size_t(dir)], e.h.Ybt));
  }
}

// dp = sqrt(gamma) (b cbphi12 + c cbphi21) / (b c) per direction (values).
template <class K>
LaurentSeries<K> dp_component(const Environment<K>& e, const LaurentSeries<K>& cb12,
                              const LaurentSeries<K>& cb21, const LaurentSeries<K>& ibc) {
  return ((e.B.val * cb12 + e.C.val * cb21) * ibc).scaled(e.g);
}

template <class K>
void install_p_base_grads(Environment<K>& e) {
  LaurentSeries<K> ibc = (e.B.val * e.C.val).inverse(e.wlo, e.whi);
  for (int dir = 0; dir < e.D; ++dir) {
    auto kind = e.cf.label(dir).kind;
    if (kind == DirLabel::Sg || kind == DirLabel::SgBar) continue;
    const auto& cp = e.dr.cbphi.c[size_t(dir)];
    e.Pj.d[size_t(dir)] = dp_component(e, cp.e12.val, cp.e21.val, ibc);
  }
  // conjugate p: gradients are conjugates across the base involution
  for (int dir = 0; dir < e.D; ++dir) {
    auto kind = e.cf.label(dir).kind;
    if (kind == DirLabel::Sg || kind == DirLabel::SgBar) continue;
    int cd = e.cf.conj_dir(dir);
    e.Pbj.d[size_t(dir)] = e.Pj.d[size_t(cd)].conj_flip();
  }
}

// sigma-direction data: extracted from the value-level extended Killing
// equations once a first pass of the tower is available.
template <class K>
void install_sigma_grads(Environment<K>& e) {
  using LS = LaurentSeries<K>;
  LS ibc = (e.B.val * e.C.val).inverse(e.wlo, e.whi);
  auto eulmin = [](const LoopMatrix<K>& X) { return X.euler() - X; };
  auto eulplus = [](const LoopMatrix<K>& X) { return X.euler() + X; };

  for (int dir : e.cf.sg_dirs()) {
    int k = e.cf.label(dir).idx;
    LoopMatrix<K> Sk = spectral_Sk(e, k);
    // del_k Y = -[S_k, Y] - lambda^{-2k} (Ydot - Y) = [S_{(k+1)}, Y]; the
    // second form (the one behind the del_k h2 display) certifies wider
    // windows, and the structure-equation suites then verify the first
    // form against it. Audit flag 2 flips the lambda^{-2k} term and uses
    // the displayed form directly.
    LoopMatrix<K> dY;
    if (e.cfg.sign_flip == 2)
      dY = -bracket(Sk, e.h.Y) + eulmin(e.h.Y).shifted(-2 * k);
    else
      dY = bracket(spectral_Sk_tail(e, k), e.h.Y);
    e.install_stream_grad(dir, dY);
    LoopMatrix<K> dYbt = -bracket(Sk, e.h.Ybt) - eulplus(e.h.Ybt).shifted(-2 * k);
    e.install_conj_stream_grad(dir, dYbt);
    // p along sigma_k: cbphi(sigma_k) = -S_{(k+1)}
    LoopMatrix<K> W = -spectral_Sk_tail(e, k);
    e.Pj.d[size_t(dir)] = dp_component(e, W.e12.val, W.e21.val, ibc);
    // pbar along sigma_k: conj of the sigma-bar-k rule for p, computed
    // value-level from cbphi(sigmabar_k) = -Sbar^t_k + lambda^{2k} S
    LoopMatrix<K> Sbt_v = e.sp.S.conj_transpose_val(e.D).shifted(2 * k).project(1, true);
    LoopMatrix<K> Wb = -Sbt_v + e.sp.S.shifted(2 * k);
    e.Pbj.d[size_t(dir)] =
        dp_component(e, Wb.e12.val, Wb.e21.val, ibc).conj_flip();
  }

  int flip1 = e.cfg.sign_flip == 1 ? -1 : 1;  // audit: delsbar lambda^{2l} term
  for (int dir : e.cf.sgbar_dirs()) {
    int l = e.cf.label(dir).idx;
    LoopMatrix<K> Sbt_l = e.sp.S.conj_transpose_val(e.D).shifted(2 * l).project(1, true);
    LoopMatrix<K> dY = bracket(Sbt_l, e.h.Y) + eulmin(e.h.Y).shifted(2 * l).scaled(
                                                   ScalarOps<K>::from_int(flip1));
    e.install_stream_grad(dir, dY);
    LoopMatrix<K> dYbt =
        bracket(Sbt_l, e.h.Ybt) + eulplus(e.h.Ybt).shifted(2 * l).scaled(
                                      ScalarOps<K>::from_int(flip1));
    e.install_conj_stream_grad(dir, dYbt);
    // p along sigmabar_l
    LoopMatrix<K> Wb = -Sbt_l + e.sp.S.shifted(2 * l);
    e.Pj.d[size_t(dir)] = dp_component(e, Wb.e12.val, Wb.e21.val, ibc);
    // pbar along sigmabar_l: conj of the sigma_l rule for p
    LoopMatrix<K> W = -spectral_Sk_tail(e, l);
    e.Pbj.d[size_t(dir)] = dp_component(e, W.e12.val, W.e21.val, ibc).conj_flip();
  }
}

// ---- coframe differentials --------------------------------------------------

template <class K>
void build_cdiff(Environment<K>& e) {
  using Ops = ScalarOps<K>;
  using DS = DSeries<K>;
  e.cdiff.d.assign(size_t(e.D), TwoForm<DS>(e.D, e.D));
  int xi = e.cf.xi(), xb = e.cf.xibar(), rho = e.cf.rho();

  // d xi = i rho ^ xi + sum a^{2m+3} dt_m ^ xi + 2i sum a_S^{2k+1} sg_k ^ xi
  auto& dxi = e.cdiff.d[size_t(xi)];
  dxi.add(rho, xi, e.konst(Ops::i()));
  for (int m = 1; m <= e.cfg.N; ++m)
    dxi.add(e.cf.find(DirLabel::T, m), xi, e.konst(e.a_val[size_t(m + 1)]));
  for (int dir : e.cf.sg_dirs()) {
    K as = e.spectral_a(e.cf.label(dir).idx);
    dxi.add(dir, xi, e.konst(Ops::from_int(2) * Ops::i() * as));
  }

  // conjugate structure equation
  auto& dxb = e.cdiff.d[size_t(xb)];
  dxb.add(rho, xb, e.konst(-Ops::i()));
  for (int n = 1; n <= e.cfg.N; ++n)
    dxb.add(e.cf.find(DirLabel::TBar, n), xb, e.konst(e.conj(e.a_val[size_t(n + 1)])));
  for (int dir : e.cf.sgbar_dirs()) {
    K as = e.conj(e.spectral_a(e.cf.label(dir).idx));
    dxb.add(dir, xb, e.konst(Ops::from_int(-2) * Ops::i() * as));
  }

  // d sigma_i within the active range (empty when K < 2 vir_lo)
  for (int dir : e.cf.sg_dirs())
    e.cdiff.d[size_t(dir)] = e.dsigma_struct(e.cf.label(dir).idx, false);
  for (int dir : e.cf.sgbar_dirs())
    e.cdiff.d[size_t(dir)] = e.dsigma_struct(e.cf.label(dir).idx, true);
  // d rho installed by extract_drho; dt_m are exact.
}

// The active frame truncates the Virasoro index range from above; the
// structure terms d(sigma_i) for inactive i still land on active pairs.
// Given the sigma_i coefficient a form would carry at an inactive index,
// this restores the dropped contribution so the untruncated identity is
// evaluated on the active frame.
template <class K, class T>
TwoForm<T> sigma_tail_correction(const Environment<K>& e,
                                 const std::function<T(int, bool)>& coeff) {
  TwoForm<T> w(e.D, e.D);
  int top = 2 * e.cfg.Kvir;
  for (int i = e.cfg.Kvir + 1; i <= top; ++i) {
    for (bool bar : {false, true}) {
      TwoForm<DSeries<K>> dsg = e.dsigma_struct(i, bar);
      bool need = false;
      for (auto& cc : dsg.c)
        if (!cc.val.is_exact_zero()) need = true;
      if (!need) continue;
      T ci = coeff(i, bar);
      for (int a = 0; a < e.D; ++a)
        for (int b = a + 1; b < e.D; ++b) {
          const auto& s = dsg.at(a, b);
          if (!s.val.is_exact_zero()) w.add(a, b, coeff_mul_ds(ci, s));
        }
    }
  }
  return w;
}

// phihat carries S_k at sigma_k and -Sbar^t_l at sigmabar_l.
template <class K>
TwoForm<LoopMatrix<K>> virtual_sigma_correction(const Environment<K>& e) {
  std::function<LoopMatrix<K>(int, bool)> coeff = [&e](int i, bool bar) {
    return bar ? -spectral_Sbt(e, i) : spectral_Sk(e, i);
  };
  return sigma_tail_correction(e, coeff);
}

// cbphi carries -S_{(k+1)} resp. -Sbar^t_l + lambda^{2l} S.
template <class K>
LoopMatrix<K> cbphi_sigma_coeff(const Environment<K>& e, int i, bool bar) {
  if (bar) return -spectral_Sbt(e, i) + e.sp.S.shifted(2 * i);
  return -spectral_Sk_tail(e, i);
}

template <class K>
TwoForm<LoopMatrix<K>> cbphi_sigma_correction(const Environment<K>& e) {
  std::function<LoopMatrix<K>(int, bool)> coeff = [&e](int i, bool bar) {
    return cbphi_sigma_coeff(e, i, bar);
  };
  return sigma_tail_correction(e, coeff);
}

// Scalar version for the Virasoro generating-form identity: the
// generating form carries lambda^{-2k} at sigma_k and -lambda^{2l} at
// sigmabar_l.
template <class K>
TwoForm<DSeries<K>> virtual_sigma_correction_scalar(const Environment<K>& e) {
  using Ops = ScalarOps<K>;
  std::function<DSeries<K>(int, bool)> coeff = [&e](int i, bool bar) {
    return bar ? e.mono(2 * i, -Ops::one()) : e.mono(-2 * i, Ops::one());
  };
  return sigma_tail_correction(e, coeff);
}

// lambda-degree-0 part of the extended structure equation determines
// d rho. Returns false when the two diagonal extractions disagree.
template <class K>
bool extract_drho(Environment<K>& e) {
  using Ops = ScalarOps<K>;
  const auto& ph = e.h.phihat;
  TwoForm<LoopMatrix<K>> T = exterior_d(ph, e.cdiff, e.D) + wedge(ph, ph, e.D);
  if (e.cf.mode() != Mode::Base) {
    T = T - wedge_scalar(ph.euler(), e.h.sigma, e.D);
    T = T + virtual_sigma_correction(e);
  }
  auto& drho = e.cdiff.d[size_t(e.cf.rho())];
  drho = TwoForm<DSeries<K>>(e.D, e.D);
  bool unique = true;
  K i2 = Ops::from_int(2) * Ops::i();
  for (int a = 0; a < e.D; ++a)
    for (int b = a + 1; b < e.D; ++b) {
      const auto& m = T.at(a, b);
      auto c11 = m.e11.val.coeff(0);
      auto c22 = m.e22.val.coeff(0);
      auto& slot = drho.c[size_t(drho.pidx(a, b))];
      if (!c11 || !c22) {
        slot.val = LaurentSeries<K>::unknown();
        continue;
      }
      K v = i2 * (*c11);
      K v2 = -(i2 * (*c22));
      if (!ScalarOps<K>::is_zero(v - v2)) unique = false;
      if (!ScalarOps<K>::is_zero(v)) slot.val = LaurentSeries<K>::konst(v);
    }
  e.drho_unique = unique;
  return unique;
}

// ---- orchestration -----------------------------------------------------------

template <class K>
void rebuild_towers(Environment<K>& e, bool with_sigma) {
  e.refresh_derived_jets();
  build_hier(e);
  build_cbphi(e, false);
  build_dress(e);
  build_kill(e);
  build_spec(e);
  if (with_sigma) {
    if (e.cfg.mode == Mode::Plus || e.cfg.mode == Mode::Mixed) build_conj_tower(e);
    build_phihat(e);
    build_cbphi(e, true);
    // theta/Omega pick up the sigma components of cbphi
    build_dress(e);
  } else {
    e.h.phihat = e.h.phi;
  }
}

template <class K>
Environment<K> build_environment(EnvConfig cfg) {
  cfg.finalize();
  Environment<K> e;
  e.cfg = cfg;
  e.cf = Coframe(cfg.N, cfg.vir_lo, cfg.Kvir, cfg.mode);
  e.D = e.cf.size();
  e.wlo = cfg.rep_lo - (2 * cfg.Kvir + 6);
  e.whi = cfg.rep_hi + (2 * cfg.Kvir + 6);

  e.sample_values();
  e.init_primitive_jets();
  e.refresh_derived_jets();

  // pass 0: value-level objects, then the base flow table
  build_hier(e);
  install_base_grads(e);
  e.refresh_derived_jets();
  build_hier(e);
  build_cbphi(e, false);
  install_p_base_grads(e);

  // pass 1: full base jets through the dressing and spectral layers
  rebuild_towers(e, false);

  if (cfg.mode != Mode::Base) {
    // pass 2: sigma-direction table from the value-level tower, then a
    // full rebuild with the extended jets
    install_sigma_grads(e);
    rebuild_towers(e, true);
  }

  build_cdiff(e);
  extract_drho(e);
  return e;
}

}  // namespace cmch
