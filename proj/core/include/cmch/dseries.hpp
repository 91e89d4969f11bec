#pragma once

// First-order jets of Laurent series over the coframe: a value together
// with one derivative series per coframe direction. All of the tower is
// assembled from these, so exterior derivatives of any composite object
// are exact by construction (Leibniz is built into the arithmetic).
//
// A gradient entry with an empty window means "derivative unknown in
// this direction"; window arithmetic keeps that sound through products.

#include <functional>
#include <memory>
#include <utility>
#include <vector>

#include "cmch/coframe.hpp"
#include "cmch/laurent.hpp"

namespace cmch {

template <class K>
struct DSeries {
  using LS = LaurentSeries<K>;
  using Ops = ScalarOps<K>;

  LS val;
  std::vector<LS> d;  // one entry per coframe direction

  DSeries() = default;
  explicit DSeries(int ndirs) : d(size_t(ndirs)) {}

  static DSeries konst(LS v, int ndirs) {
    DSeries s(ndirs);
    s.val = std::move(v);
    return s;  // gradient exactly zero
  }

  static DSeries konst_scalar(K c, int ndirs) {
    return konst(LS::konst(std::move(c)), ndirs);
  }

  static DSeries monomial(int deg, K c, int ndirs) {
    return konst(LS::monomial(deg, std::move(c)), ndirs);
  }

  static DSeries zero(int ndirs) { return DSeries(ndirs); }

  int ndirs() const { return int(d.size()); }

  friend DSeries operator+(const DSeries& a, const DSeries& b) {
    DSeries r(a.ndirs());
    r.val = a.val + b.val;
    for (int k = 0; k < a.ndirs(); ++k) r.d[size_t(k)] = a.d[size_t(k)] + b.d[size_t(k)];
    return r;
  }
  friend DSeries operator-(const DSeries& a, const DSeries& b) {
    DSeries r(a.ndirs());
    r.val = a.val - b.val;
    for (int k = 0; k < a.ndirs(); ++k) r.d[size_t(k)] = a.d[size_t(k)] - b.d[size_t(k)];
    return r;
  }
  friend DSeries operator-(const DSeries& a) {
    DSeries r(a.ndirs());
    r.val = -a.val;
    for (int k = 0; k < a.ndirs(); ++k) r.d[size_t(k)] = -a.d[size_t(k)];
    return r;
  }
  friend DSeries operator*(const DSeries& a, const DSeries& b) {
    DSeries r(a.ndirs());
    r.val = a.val * b.val;
    for (int k = 0; k < a.ndirs(); ++k)
      r.d[size_t(k)] = a.val * b.d[size_t(k)] + a.d[size_t(k)] * b.val;
    return r;
  }
  DSeries& operator+=(const DSeries& b) { return *this = *this + b; }
  DSeries& operator-=(const DSeries& b) { return *this = *this - b; }

  DSeries scaled(const K& s) const {
    DSeries r(ndirs());
    r.val = val.scaled(s);
    for (int k = 0; k < ndirs(); ++k) r.d[size_t(k)] = d[size_t(k)].scaled(s);
    return r;
  }

  DSeries shifted(int m) const {
    DSeries r(ndirs());
    r.val = val.shifted(m);
    for (int k = 0; k < ndirs(); ++k) r.d[size_t(k)] = d[size_t(k)].shifted(m);
    return r;
  }

  // Euler operator commutes with the flow derivatives.
  DSeries euler() const {
    DSeries r(ndirs());
    r.val = val.euler();
    for (int k = 0; k < ndirs(); ++k) r.d[size_t(k)] = d[size_t(k)].euler();
    return r;
  }

  // Degree filtering commutes with the flow derivatives.
  DSeries project(int cut, bool keep_ge) const {
    DSeries r(ndirs());
    r.val = val.project(cut, keep_ge);
    for (int k = 0; k < ndirs(); ++k) r.d[size_t(k)] = d[size_t(k)].project(cut, keep_ge);
    return r;
  }

  DSeries restricted(int lo, int hi) const {
    DSeries r(ndirs());
    r.val = val.restricted(lo, hi);
    for (int k = 0; k < ndirs(); ++k) r.d[size_t(k)] = d[size_t(k)].restricted(lo, hi);
    return r;
  }

  // Drop the jet: gradients become unknown. Subsequent arithmetic on the
  // gradients short-circuits, which keeps value-only residual chains cheap.
  DSeries val_only() const {
    DSeries r(ndirs());
    r.val = val;
    for (auto& gg : r.d) gg = LS::unknown();
    return r;
  }

  // The lambda^m coefficient as a degree-0 jet; unknown components stay
  // unknown.
  DSeries extract_coeff(int m) const {
    DSeries r(ndirs());
    auto pick = [m](const LS& s) {
      auto c = s.coeff(m);
      return c ? LS::konst(*c) : LS::unknown();
    };
    r.val = pick(val);
    for (int k = 0; k < ndirs(); ++k) r.d[size_t(k)] = pick(d[size_t(k)]);
    return r;
  }

  DSeries inverse(int wlo, int whi) const {
    DSeries r(ndirs());
    r.val = val.inverse(wlo, whi);
    LS m2 = -(r.val * r.val);  // d(1/f) = -df / f^2
    for (int k = 0; k < ndirs(); ++k) r.d[size_t(k)] = d[size_t(k)] * m2;
    return r;
  }

  DSeries sqrt_with(const K& root0, int wlo, int whi) const {
    DSeries r(ndirs());
    r.val = val.sqrt_with(root0, wlo, whi);
    LS half_inv = r.val.inverse(wlo, whi).scaled(Ops::frac(1, 2));
    for (int k = 0; k < ndirs(); ++k) r.d[size_t(k)] = d[size_t(k)] * half_inv;
    return r;
  }

  DSeries sqrt(int wlo, int whi) const {
    auto [d0, c0] = val.leading();
    (void)d0;
    auto r = Ops::try_sqrt(c0);
    if (!r) throw SeriesError("sqrt: leading coefficient has no root in the scalar backend");
    return sqrt_with(*r, wlo, whi);
  }

  // Formal conjugation of the jet. Needs a conjugation-closed coframe,
  // since d/dxi of the conjugate is the conjugate of d/dxibar.
  DSeries conj_dual(const Coframe& cf) const {
    DSeries r(ndirs());
    r.val = val.conj_flip();
    for (int k = 0; k < ndirs(); ++k) {
      int ck = cf.conj_dir(k);
      r.d[size_t(k)] = ck >= 0 ? d[size_t(ck)].conj_flip() : LS::unknown();
    }
    return r;
  }
};

// f(X) with the chain rule, for the exp family.
template <class K>
DSeries<K> analytic_apply(AnalyticFn f, const DSeries<K>& x, int wlo, int whi) {
  DSeries<K> r(x.ndirs());
  r.val = analytic_apply(f, x.val, wlo, whi);
  LaurentSeries<K> deriv;
  switch (f) {
    case AnalyticFn::Exp: deriv = r.val; break;
    case AnalyticFn::Cosh: deriv = analytic_apply(AnalyticFn::Sinh, x.val, wlo, whi); break;
    case AnalyticFn::Sinh: deriv = analytic_apply(AnalyticFn::Cosh, x.val, wlo, whi); break;
    case AnalyticFn::Sinhc: {
      // sinhc'(x) = sum_{m>=1} 2m x^{2m-1} / (2m+1)!; no division by x.
      using Ops = ScalarOps<K>;
      auto cs = std::make_shared<std::vector<K>>(1, Ops::one());
      auto invfact = [cs](int j) {
        while (int(cs->size()) <= j) {
          int n = int(cs->size());
          cs->push_back(cs->back() / Ops::from_int(n));
        }
        return (*cs)[size_t(j)];
      };
      std::function<K(int)> gen = [invfact](int j) {
        if (j % 2 == 0) return ScalarOps<K>::zero();
        return invfact(j + 2) * ScalarOps<K>::from_int(j + 1);
      };
      deriv = LaurentSeries<K>::compose_entire(gen, x.val, wlo, whi);
      break;
    }
    default: throw SeriesError("analytic_apply(DSeries): unsupported map");
  }
  for (int k = 0; k < x.ndirs(); ++k) r.d[size_t(k)] = deriv * x.d[size_t(k)];
  return r;
}

}  // namespace cmch
