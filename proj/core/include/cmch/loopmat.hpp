#pragma once

// 2x2 loop-matrix layer: the twisted loop algebra and the raw matrix
// products around it. Entries are jets, so matrix objects differentiate
// through the forms engine. Twisted pattern: diagonal even, off-diagonal
// odd, trace-free.

#include <array>
#include <string>
#include <utility>

#include "cmch/dseries.hpp"

namespace cmch {

template <class K>
struct LoopMatrix {
  using DS = DSeries<K>;
  using LS = LaurentSeries<K>;
  using Ops = ScalarOps<K>;

  DS e11, e12, e21, e22;

  LoopMatrix() = default;
  explicit LoopMatrix(int ndirs) : e11(ndirs), e12(ndirs), e21(ndirs), e22(ndirs) {}
  LoopMatrix(DS a, DS b, DS c, DS d)
      : e11(std::move(a)), e12(std::move(b)), e21(std::move(c)), e22(std::move(d)) {}

  int ndirs() const { return e11.ndirs(); }

  static LoopMatrix zero(int ndirs) { return LoopMatrix(ndirs); }

  static LoopMatrix identity(int ndirs) {
    LoopMatrix m(ndirs);
    m.e11 = DS::konst_scalar(Ops::one(), ndirs);
    m.e22 = DS::konst_scalar(Ops::one(), ndirs);
    return m;
  }

  // Algebra element [[ -i a, 2c ], [ 2b, i a ]] from component series.
  static LoopMatrix algebra(const DS& a, const DS& b, const DS& c) {
    LoopMatrix m;
    K two = Ops::from_int(2);
    m.e11 = a.scaled(-Ops::i());
    m.e22 = a.scaled(Ops::i());
    m.e12 = c.scaled(two);
    m.e21 = b.scaled(two);
    return m;
  }

  const DS& at(int r, int c) const {
    return r == 0 ? (c == 0 ? e11 : e12) : (c == 0 ? e21 : e22);
  }
  DS& at(int r, int c) { return r == 0 ? (c == 0 ? e11 : e12) : (c == 0 ? e21 : e22); }

  friend LoopMatrix operator+(const LoopMatrix& x, const LoopMatrix& y) {
    return {x.e11 + y.e11, x.e12 + y.e12, x.e21 + y.e21, x.e22 + y.e22};
  }
  friend LoopMatrix operator-(const LoopMatrix& x, const LoopMatrix& y) {
    return {x.e11 - y.e11, x.e12 - y.e12, x.e21 - y.e21, x.e22 - y.e22};
  }
  friend LoopMatrix operator-(const LoopMatrix& x) {
    return {-x.e11, -x.e12, -x.e21, -x.e22};
  }
  friend LoopMatrix operator*(const LoopMatrix& x, const LoopMatrix& y) {
    return {x.e11 * y.e11 + x.e12 * y.e21, x.e11 * y.e12 + x.e12 * y.e22,
            x.e21 * y.e11 + x.e22 * y.e21, x.e21 * y.e12 + x.e22 * y.e22};
  }
  LoopMatrix& operator+=(const LoopMatrix& y) { return *this = *this + y; }
  LoopMatrix& operator-=(const LoopMatrix& y) { return *this = *this - y; }

  LoopMatrix scaled(const K& s) const {
    return {e11.scaled(s), e12.scaled(s), e21.scaled(s), e22.scaled(s)};
  }
  LoopMatrix scaled(const DS& s) const {
    return {e11 * s, e12 * s, e21 * s, e22 * s};
  }
  LoopMatrix shifted(int m) const {
    return {e11.shifted(m), e12.shifted(m), e21.shifted(m), e22.shifted(m)};
  }
  LoopMatrix euler() const {
    return {e11.euler(), e12.euler(), e21.euler(), e22.euler()};
  }
  LoopMatrix project(int cut, bool keep_ge) const {
    return {e11.project(cut, keep_ge), e12.project(cut, keep_ge),
            e21.project(cut, keep_ge), e22.project(cut, keep_ge)};
  }
  LoopMatrix restricted(int lo, int hi) const {
    return {e11.restricted(lo, hi), e12.restricted(lo, hi), e21.restricted(lo, hi),
            e22.restricted(lo, hi)};
  }

  friend LoopMatrix bracket(const LoopMatrix& x, const LoopMatrix& y) {
    return x * y - y * x;
  }

  // ad_X^k (Z)
  friend LoopMatrix adpow(const LoopMatrix& x, int k, LoopMatrix z) {
    for (int i = 0; i < k; ++i) z = bracket(x, z);
    return z;
  }

  DS det() const { return e11 * e22 - e12 * e21; }
  DS trace() const { return e11 + e22; }

  // Transpose with formal conjugation applied entrywise, on values and
  // jets alike; requires a conjugation-closed coframe.
  LoopMatrix conj_transpose(const Coframe& cf) const {
    return {e11.conj_dual(cf), e21.conj_dual(cf), e12.conj_dual(cf), e22.conj_dual(cf)};
  }

  // Value-level conjugate transpose (jets dropped).
  LoopMatrix conj_transpose_val(int ndirs) const {
    LoopMatrix r(ndirs);
    r.e11.val = e11.val.conj_flip();
    r.e12.val = e21.val.conj_flip();
    r.e21.val = e12.val.conj_flip();
    r.e22.val = e22.val.conj_flip();
    for (auto* p : {&r.e11, &r.e12, &r.e21, &r.e22})
      for (auto& g : p->d) g = LS::unknown();
    return r;
  }

  LoopMatrix val_only() const {
    return {e11.val_only(), e12.val_only(), e21.val_only(), e22.val_only()};
  }

  bool trace_free_on_window() const {
    LS t = (e11 + e22).val;
    return t.stored_empty();
  }

  // eq. pattern of the twisted algebra: even diagonal, odd off-diagonal.
  bool twisted_pattern() const {
    auto ok = [](const LS& s, bool want_even) {
      Parity p = s.parity();
      if (p == Parity::None) return true;
      return p == (want_even ? Parity::Even : Parity::Odd);
    };
    return ok(e11.val, true) && ok(e22.val, true) && ok(e12.val, false) &&
           ok(e21.val, false) && trace_free_on_window();
  }
};

}  // namespace cmch
