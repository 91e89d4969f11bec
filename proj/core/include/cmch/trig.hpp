#pragma once

// The Killing fields for the undressed form involve cosh and sinh of
// w = 4 sqrt(gamma) lambda ttt, whose products with the tower are formal
// sums degree by degree. They are handled exactly in the quadratic slice
// of the extension ring C[ch, sh]/(ch^2 - sh^2 - 1): an element is
//
//   X = m1 + mc ch + ms sh + mss sh^2 + mcs ch sh
//
// with windowed-series matrix components. Products of two linear
// elements, Euler derivatives, and flow derivatives all stay inside this
// slice, which covers every identity the suites check about P+-.

#include "cmch/loopmat.hpp"

namespace cmch {

template <class K>
struct TrigMat {
  using Mat = LoopMatrix<K>;
  Mat m1, mc, ms, mss, mcs;

  TrigMat() = default;
  explicit TrigMat(int ndirs) : m1(ndirs), mc(ndirs), ms(ndirs), mss(ndirs), mcs(ndirs) {}

  static TrigMat pure(const Mat& x) {
    TrigMat r(x.ndirs());
    r.m1 = x;
    return r;
  }

  bool linear() const {
    auto z = [](const Mat& m) {
      for (auto* p : {&m.e11, &m.e12, &m.e21, &m.e22})
        if (!p->val.is_exact_zero()) return false;
      return true;
    };
    return z(mss) && z(mcs);
  }

  friend TrigMat operator+(const TrigMat& a, const TrigMat& b) {
    TrigMat r(a.m1.ndirs());
    r.m1 = a.m1 + b.m1;
    r.mc = a.mc + b.mc;
    r.ms = a.ms + b.ms;
    r.mss = a.mss + b.mss;
    r.mcs = a.mcs + b.mcs;
    return r;
  }
  friend TrigMat operator-(const TrigMat& a, const TrigMat& b) {
    TrigMat r(a.m1.ndirs());
    r.m1 = a.m1 - b.m1;
    r.mc = a.mc - b.mc;
    r.ms = a.ms - b.ms;
    r.mss = a.mss - b.mss;
    r.mcs = a.mcs - b.mcs;
    return r;
  }
  friend TrigMat operator-(const TrigMat& a) {
    TrigMat r(a.m1.ndirs());
    r.m1 = -a.m1;
    r.mc = -a.mc;
    r.ms = -a.ms;
    r.mss = -a.mss;
    r.mcs = -a.mcs;
    return r;
  }

  // product of elements at most linear in {ch, sh}
  friend TrigMat operator*(const TrigMat& a, const TrigMat& b) {
    if (!a.linear() || !b.linear())
      throw SeriesError("TrigMat: product beyond the quadratic slice");
    TrigMat r(a.m1.ndirs());
    r.m1 = a.m1 * b.m1 + a.mc * b.mc;  // ch^2 = 1 + sh^2
    r.mc = a.m1 * b.mc + a.mc * b.m1;
    r.ms = a.m1 * b.ms + a.ms * b.m1;
    r.mss = a.mc * b.mc + a.ms * b.ms;
    r.mcs = a.mc * b.ms + a.ms * b.mc;
    return r;
  }

  friend TrigMat bracket(const TrigMat& a, const TrigMat& b) { return a * b - b * a; }

  TrigMat scaled(const K& s) const {
    TrigMat r(m1.ndirs());
    r.m1 = m1.scaled(s);
    r.mc = mc.scaled(s);
    r.ms = ms.scaled(s);
    r.mss = mss.scaled(s);
    r.mcs = mcs.scaled(s);
    return r;
  }
  TrigMat scaled(const DSeries<K>& s) const {
    TrigMat r(m1.ndirs());
    r.m1 = m1.scaled(s);
    r.mc = mc.scaled(s);
    r.ms = ms.scaled(s);
    r.mss = mss.scaled(s);
    r.mcs = mcs.scaled(s);
    return r;
  }

  TrigMat shifted_all(int m) const {
    TrigMat r(m1.ndirs());
    r.m1 = m1.shifted(m);
    r.mc = mc.shifted(m);
    r.ms = ms.shifted(m);
    r.mss = mss.shifted(m);
    r.mcs = mcs.shifted(m);
    return r;
  }

  // Euler derivative; wdot = D(w) for the common hyperbolic argument.
  TrigMat euler(const DSeries<K>& wdot) const {
    TrigMat r(m1.ndirs());
    r.m1 = m1.euler() + mcs.scaled(wdot);
    r.mc = mc.euler() + ms.scaled(wdot);
    r.ms = ms.euler() + mc.scaled(wdot);
    r.mss = mss.euler() + mcs.scaled(wdot).scaled(ScalarOps<K>::from_int(2));
    r.mcs = mcs.euler() + mss.scaled(wdot).scaled(ScalarOps<K>::from_int(2));
    return r;
  }

  // flow derivative in one direction; wd = that direction's coefficient
  // of dw.
  TrigMat dir_deriv(int dir, const DSeries<K>& wd) const {
    TrigMat r(m1.ndirs());
    r.m1 = dir_grad(m1, dir) + mcs.scaled(wd);
    r.mc = dir_grad(mc, dir) + ms.scaled(wd);
    r.ms = dir_grad(ms, dir) + mc.scaled(wd);
    r.mss = dir_grad(mss, dir) + mcs.scaled(wd).scaled(ScalarOps<K>::from_int(2));
    r.mcs = dir_grad(mcs, dir) + mss.scaled(wd).scaled(ScalarOps<K>::from_int(2));
    return r;
  }

};

// Trig scalar: same basis with series components; enough for traces and
// determinants.
template <class K>
struct TrigScalar {
  using DS = DSeries<K>;
  DS c1, cc, cs, css, ccs;

  explicit TrigScalar(int ndirs) : c1(ndirs), cc(ndirs), cs(ndirs), css(ndirs), ccs(ndirs) {}

  friend TrigScalar operator-(const TrigScalar& a, const TrigScalar& b) {
    TrigScalar r(a.c1.ndirs());
    r.c1 = a.c1 - b.c1;
    r.cc = a.cc - b.cc;
    r.cs = a.cs - b.cs;
    r.css = a.css - b.css;
    r.ccs = a.ccs - b.ccs;
    return r;
  }
};

template <class K>
TrigScalar<K> trig_trace(const TrigMat<K>& x) {
  TrigScalar<K> r(x.m1.ndirs());
  r.c1 = x.m1.trace();
  r.cc = x.mc.trace();
  r.cs = x.ms.trace();
  r.css = x.mss.trace();
  r.ccs = x.mcs.trace();
  return r;
}

// det of a linear element: collect the quadratic expansion of
// e11 e22 - e12 e21 with the ch^2 reduction.
template <class K>
TrigScalar<K> trig_det(const TrigMat<K>& x) {
  if (!x.linear()) throw SeriesError("trig_det: beyond the quadratic slice");
  auto mul2 = [](const DSeries<K>& a1, const DSeries<K>& ac, const DSeries<K>& as,
                 const DSeries<K>& b1, const DSeries<K>& bc, const DSeries<K>& bs,
                 TrigScalar<K>& out, int sign) {
    auto app = [&](DSeries<K>& slot, DSeries<K> v) {
      slot = (sign > 0) ? slot + v : slot - v;
    };
    app(out.c1, a1 * b1 + ac * bc);
    app(out.cc, a1 * bc + ac * b1);
    app(out.cs, a1 * bs + as * b1);
    app(out.css, ac * bc + as * bs);
    app(out.ccs, ac * bs + as * bc);
  };
  TrigScalar<K> r(x.m1.ndirs());
  mul2(x.m1.e11, x.mc.e11, x.ms.e11, x.m1.e22, x.mc.e22, x.ms.e22, r, +1);
  mul2(x.m1.e12, x.mc.e12, x.ms.e12, x.m1.e21, x.mc.e21, x.ms.e21, r, -1);
  return r;
}

}  // namespace cmch
