#pragma once

// The environment: all free scalar data of a sampled jet point of the
// (extended) truncated hierarchy, together with the substitution tables
// that define flow derivatives and coframe differentials.
//
// Free data: sqrt_gamma, h2^{1/2}, the a- and b-streams, t_m values, the
// even series p (potential of the non-local extension), and the
// conformal factor e^u. The c-stream is completed from the determinant
// constraint det(Y) = -4 gamma lambda^2 with a^1 = 0, so the constraint
// holds exactly by construction. Conjugate data are literal conjugates.
//
// Flow derivatives of the stream coefficients are extracted from the
// (extended) Killing field equation for Y and its conjugate transpose;
// everything downstream then carries exact first-order jets.

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "cmch/check.hpp"
#include "cmch/forms.hpp"
#include "cmch/rng.hpp"
#include "cmch/trig.hpp"

namespace cmch {

struct EnvConfig {
  int N = 1;                  // truncation parameter
  int Kvir = 3;               // top Virasoro index (K >= N+1)
  int vir_lo = -1;            // lowest active Virasoro index; default N+1
  Mode mode = Mode::Base;
  int rep_lo = 0, rep_hi = 0; // reporting window; default [-(4N+8), 4N+8]
  std::uint64_t seed = 1;
  int order = -1;             // stream order cap M; default 2N+8
  double tol = 0.0;           // residual tolerance (float backend only)
  // sign audit: flip one of the marked signs and watch the suites fail
  // 0 none, 1 delsbar (+lambda^{2l} D), 2 dY+ sigma term,
  // 3 du = +sdot - udot s, 4 varphi_S sign
  int sign_flip = 0;

  void finalize() {
    if (rep_lo == 0 && rep_hi == 0) {
      rep_lo = -(4 * N + 8);
      rep_hi = 4 * N + 8;
    }
    if (vir_lo < 0) vir_lo = N + 1;
    if (order < 0) order = 2 * N + 9;
    if (Kvir < vir_lo) Kvir = vir_lo;
  }
};

template <class K>
struct Environment {
  using Ops = ScalarOps<K>;
  using LS = LaurentSeries<K>;
  using DS = DSeries<K>;
  using Mat = LoopMatrix<K>;
  using MatForm = OneForm<Mat>;
  using DSForm = OneForm<DSeries<K>>;

  EnvConfig cfg;
  Coframe cf;
  int D = 0;           // coframe size
  int wlo = 0, whi = 0;  // work window for compositions

  K g, gam;            // sqrt(gamma) and gamma = g^2
  K sval;              // value of h2^{1/2}
  std::vector<K> a_val, b_val, c_val;  // streams, index n (a^{2n+1} etc.)
  std::vector<K> t_val;                // t_m, m = 0..N
  std::vector<K> p_val;                // p coefficients, lambda^{2j}
  std::vector<K> e_val;                // e^u coefficients (mode-dependent grading)

  // jets of the primitive series
  DS A, B, C;          // the streams a, b, c as series jets
  DS Ab, Bb, Cb;       // conj-flipped streams (entries of conj_transpose(Y))
  DS h2, h2bar, sj, sjbar;  // h2 = -(c^2)^2 and h2^{1/2} as jets
  DS Pj, Pbj;          // p and conj p
  DS Ej;               // e^u
  DS tttj;             // ttt = integral of alpha

  CoframeDiff<K> cdiff;
  bool drho_unique = true;

  // ---- towers (filled by build_all in towers.hpp) ----
  struct Hier {
    Mat Y, Ybt;                 // Y and its conjugate transpose
    std::vector<Mat> U, Ubt;    // U_m and conj transpose counterparts, m=0..N
    MatForm phi;                // base Maurer-Cartan form
    MatForm phihat;             // extended form (sigma components added)
    DSForm alpha;               // (1/2i) sum lambda^{-(2m+2)} dt_m
    DSForm sigma;               // Virasoro generating 1-form
    DSForm sigma_dot;
  } h;

  struct Dress {
    MatForm cbphi;              // dressed Maurer-Cartan form
    Mat Z;                      // normalized constant field Z lambda
    DS esig;                    // e^{sigma+}, 4 e^{2 sigma+} b c = 1
    MatForm Omega;
    DSForm thp, thm;            // theta+-
  } dr;

  struct Kill {
    Mat Vp, Vm;
    // P+- live in the ch/sh extension ring over w = 4 sqrt(gamma) lambda ttt
    TrigMat<K> Pp, Pm;
    DS wdot;           // D(w)
    DSForm dw;         // dw = 4 sqrt(gamma) lambda alpha
  } kl;

  struct Spec {
    Mat S, Scheck;              // normalized spectral Killing field, dressed variant
    DS tfac;                    // ttt-dot + ttt
  } sp;

  struct Conj {                 // conjugate-transpose tower (plus/mixed mode)
    bool built = false;
    Mat Vbp, Vbm, Sbt, Scheckb;
    DS esig_bar, tfac_bar;
  } cj;

  int ndirs() const { return D; }
  int M() const { return cfg.order; }

  DS mono(int deg, K c) const { return DS::monomial(deg, std::move(c), D); }
  DS konst(K c) const { return DS::konst_scalar(std::move(c), D); }
  DS dzero() const { return DS::zero(D); }
  Mat mzero() const { return Mat::zero(D); }

  K conj(const K& x) const { return Ops::conj(x); }

  // ---- sampling -------------------------------------------------------

  void sample_values() {
    Rng rng(cfg.seed);
    g = rng.template nonzero_rat<K>();
    if (rng.next_below(2)) g = -g;  // both branches of sqrt(gamma) occur
    gam = g * g;
    sval = rng.template nonzero_gauss<K>();

    int M_ = cfg.order;
    a_val.assign(size_t(M_) + 1, Ops::zero());
    b_val.assign(size_t(M_) + 1, Ops::zero());
    c_val.assign(size_t(M_) + 1, Ops::zero());
    for (int n = 1; n <= M_; ++n) a_val[size_t(n)] = rng.template gauss<K>();
    b_val[0] = -Ops::i() * gam / sval;
    for (int n = 1; n <= M_; ++n) b_val[size_t(n)] = rng.template gauss<K>();
    solve_c_from_det();

    t_val.assign(size_t(cfg.N) + 1, Ops::zero());
    for (int m = 0; m <= cfg.N; ++m) t_val[size_t(m)] = rng.template nonzero_gauss<K>();

    int Mp = std::max(1, M_ - 2);
    p_val.assign(size_t(Mp) + 1, Ops::zero());
    p_val[0] = rng.template nonzero_gauss<K>();
    for (int j = 1; j <= Mp; ++j) p_val[size_t(j)] = rng.template gauss<K>();

    // e^u: free invertible element; the support depth trades against the
    // certified residue window of e^u det S
    e_val.assign(2, Ops::zero());
    e_val[0] = rng.template nonzero_gauss<K>();
    for (size_t j = 1; j < e_val.size(); ++j) e_val[j] = rng.template gauss<K>();
  }

  // Order-by-order completion of the c-stream from
  // a^2 - 4 b c = -4 gamma lambda^2, with a^1 = 0. Linear in c^{2n+2}
  // with invertible pivot 4 b^2, and it lands c^2 = i h2^{1/2} exactly.
  void solve_c_from_det() {
    int M_ = cfg.order;
    for (int n = 0; n <= M_; ++n) {
      // (a**2 + 4 gamma lambda^2) coefficient at lambda^{2n+2}
      K rhs = Ops::zero();
      for (int p = 0; p <= n + 1; ++p) {
        int q = n + 1 - p;
        if (q >= 0 && q <= M_ && p <= M_) rhs = rhs + a_val[size_t(p)] * a_val[size_t(q)];
      }
      if (n == 0) rhs = rhs + Ops::from_int(4) * gam;
      // minus the already-determined part of 4 (b c) at that degree
      for (int i = 0; i <= n; ++i) {
        int j = n - i;
        if (j < n) rhs = rhs - Ops::from_int(4) * b_val[size_t(i)] * c_val[size_t(j)];
      }
      c_val[size_t(n)] = rhs / (Ops::from_int(4) * b_val[0]);
    }
  }

  // ---- primitive jet assembly ------------------------------------------

  LS stream_series(const std::vector<K>& v, bool even) const {
    // even: coefficients at lambda^{2n}; odd: at lambda^{2n+1}
    LS s;
    int M_ = int(v.size()) - 1;
    s.lo = NEG_INF;
    s.hi = even ? 2 * M_ + 1 : 2 * M_ + 2;
    for (int n = 0; n <= M_; ++n)
      if (!Ops::is_zero(v[size_t(n)])) s.coeffs.emplace_back(even ? 2 * n : 2 * n + 1, v[size_t(n)]);
    return s;
  }

  // Primitive jets start with unknown gradients; installation fills them.
  DS fresh_jet(LS v) const {
    DS s(D);
    s.val = std::move(v);
    for (auto& gg : s.d) gg = LS::unknown();
    return s;
  }

  void init_primitive_jets() {
    A = fresh_jet(stream_series(a_val, true));
    B = fresh_jet(stream_series(b_val, false));
    C = fresh_jet(stream_series(c_val, false));
    Ab = fresh_jet(A.val.conj_flip());
    Bb = fresh_jet(B.val.conj_flip());
    Cb = fresh_jet(C.val.conj_flip());

    LS pv;
    pv.lo = NEG_INF;
    pv.hi = POS_INF;  // sampled exactly: zero beyond the stored support
    for (int j = 0; j < int(p_val.size()); ++j)
      if (!Ops::is_zero(p_val[size_t(j)])) pv.coeffs.emplace_back(2 * j, p_val[size_t(j)]);
    Pj = fresh_jet(pv);
    Pbj = fresh_jet(pv.conj_flip());

    LS ev;
    ev.lo = NEG_INF;
    ev.hi = POS_INF;
    if (cfg.mode == Mode::Minus || cfg.mode == Mode::Mixed) {
      for (int j = 0; j < int(e_val.size()); ++j)
        if (!Ops::is_zero(e_val[size_t(j)]))
          ev.coeffs.emplace_back(-(2 * cfg.N + 2) - 2 * j, e_val[size_t(j)]);
      std::reverse(ev.coeffs.begin(), ev.coeffs.end());
    } else if (cfg.mode == Mode::Plus) {
      for (int j = 0; j < int(e_val.size()); ++j)
        if (!Ops::is_zero(e_val[size_t(j)]))
          ev.coeffs.emplace_back((2 * cfg.N + 2) + 2 * j, e_val[size_t(j)]);
    } else {
      ev.coeffs.emplace_back(0, Ops::one());
    }
    Ej = DS::konst(ev, D);  // gradients installed later (zero in base mode)
    install_e_grads();

    // ttt and t-jets: d(ttt) = alpha, with dt_0 folded into xi
    DS t(D);
    t.val = LS::zero();
    K mi2 = Ops::frac(-1, 2) * Ops::i();  // 1/(2i)
    for (int m = 0; m <= cfg.N; ++m)
      t.val.set(-(2 * m + 2), mi2 * t_val[size_t(m)]);
    for (auto& gg : t.d) gg = LS::zero();
    t.d[size_t(cf.xi())] = LS::monomial(-2, mi2 * (Ops::frac(-1, 2) * sval));
    for (int m = 1; m <= cfg.N; ++m)
      t.d[size_t(cf.find(DirLabel::T, m))] = LS::monomial(-(2 * m + 2), mi2);
    tttj = t;

    refresh_derived_jets();
  }

  void refresh_derived_jets() {
    DS c2 = C.extract_coeff(1);
    sj = c2.scaled(-Ops::i());        // h2^{1/2} = -i c^2
    h2 = -(c2 * c2);
    DS c2b = Cb.extract_coeff(-1);
    sjbar = c2b.scaled(Ops::i());     // conj: h2bar^{1/2} = i cbar^2
    h2bar = -(c2b * c2b);
  }

  void install_e_grads() {
    // audit flag 3 flips the E sigma-dot term of dE = E sigma-dot - E-dot sigma
    K flip = cfg.sign_flip == 3 ? -Ops::one() : Ops::one();
    for (auto& gg : Ej.d) gg = LS::zero();
    if (cfg.mode == Mode::Minus || cfg.mode == Mode::Mixed) {
      for (int dir : cf.sg_dirs()) {
        int k = cf.label(dir).idx;
        Ej.d[size_t(dir)] =
            (Ej.val.scaled(flip * Ops::from_int(-2 * k)) - Ej.val.euler()).shifted(-2 * k);
      }
    }
    if (cfg.mode == Mode::Plus || cfg.mode == Mode::Mixed) {
      for (int dir : cf.sgbar_dirs()) {
        int l = cf.label(dir).idx;
        Ej.d[size_t(dir)] =
            (Ej.val.scaled(flip * Ops::from_int(-2 * l)) + Ej.val.euler()).shifted(2 * l);
      }
    }
  }

  // ---- gradient installation -------------------------------------------

  // Install stream gradients in one direction from the value of dY (and
  // of its conjugate transpose) in that direction.
  void install_stream_grad(int dir, const Mat& dY) {
    A.d[size_t(dir)] = dY.e11.val.scaled(Ops::i());          // e11 = -i a
    B.d[size_t(dir)] = dY.e21.val.scaled(Ops::frac(1, 2));   // e21 = 2 b
    C.d[size_t(dir)] = dY.e12.val.scaled(Ops::frac(1, 2));   // e12 = 2 c
  }

  void install_conj_stream_grad(int dir, const Mat& dYbt) {
    Ab.d[size_t(dir)] = dYbt.e11.val.scaled(-Ops::i());      // e11 = +i abar
    Bb.d[size_t(dir)] = dYbt.e12.val.scaled(Ops::frac(1, 2));  // e12 = 2 bbar
    Cb.d[size_t(dir)] = dYbt.e21.val.scaled(Ops::frac(1, 2));  // e21 = 2 cbar
  }

  // ---- coframe helpers ---------------------------------------------------

  // Structure 2-form of d(sigma_i) over the active labels, valid for any
  // index i (indices beyond the active range still produce pairs inside
  // the frame). bar = positive-type family.
  TwoForm<DS> dsigma_struct(int i, bool bar) const {
    TwoForm<DS> w(D, D);
    auto dirs = bar ? cf.sgbar_dirs() : cf.sg_dirs();
    for (int dj : dirs)
      for (int dk : dirs) {
        int j = cf.label(dj).idx, k = cf.label(dk).idx;
        if (j >= k || j + k != i) continue;
        // d sigma_i = sum_{j+k=i} (k-j) sigma_j ^ sigma_k over ordered pairs
        w.add(dj, dk, konst(Ops::from_int(2 * (k - j))));
      }
    return w;
  }

  // ---- value-level helpers used during extraction ------------------------

  // spectral a-component a_S^{2k+1} (value)
  K spectral_a(int k) const {
    auto c = sp.S.e11.val.coeff(2 * k);
    if (!c) throw SeriesError("spectral_a: degree outside certified window");
    return Ops::i() * (*c);
  }
};

}  // namespace cmch
