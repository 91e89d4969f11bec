#pragma once

// Exterior calculus over the finite coframe: 1-forms and 2-forms with
// series- or matrix-valued coefficients, wedge products, and the exterior
// derivative. d(f theta) = df ^ theta + f dtheta, where df comes from the
// coefficient's jet and dtheta from the installed coframe differentials.

#include <string>
#include <vector>

#include "cmch/loopmat.hpp"

namespace cmch {

// --- coefficient traits ---------------------------------------------

template <class K>
inline DSeries<K> coeff_mul_ds(const DSeries<K>& a, const DSeries<K>& s) {
  return a * s;
}
template <class K>
inline LoopMatrix<K> coeff_mul_ds(const LoopMatrix<K>& a, const DSeries<K>& s) {
  return a.scaled(s);
}

// k-direction derivative extracted from the jet (result jets are unknown,
// first-order data only).
template <class K>
inline DSeries<K> dir_grad(const DSeries<K>& a, int k) {
  DSeries<K> g(a.ndirs());
  g.val = a.d[size_t(k)];
  for (auto& e : g.d) e = LaurentSeries<K>::unknown();
  return g;
}
template <class K>
inline LoopMatrix<K> dir_grad(const LoopMatrix<K>& a, int k) {
  return {dir_grad(a.e11, k), dir_grad(a.e12, k), dir_grad(a.e21, k),
          dir_grad(a.e22, k)};
}

template <class K>
inline DSeries<K> coeff_zero_like(const DSeries<K>&, int ndirs) {
  return DSeries<K>::zero(ndirs);
}
template <class K>
inline LoopMatrix<K> coeff_zero_like(const LoopMatrix<K>&, int ndirs) {
  return LoopMatrix<K>::zero(ndirs);
}

// --- forms ------------------------------------------------------------

template <class T>
struct OneForm {
  std::vector<T> c;  // one coefficient per coframe direction

  OneForm() = default;
  OneForm(int dirs, const T& proto) : c(size_t(dirs), proto) {}

  static OneForm zero(int dirs, int ndirs) {
    OneForm f;
    f.c.reserve(size_t(dirs));
    for (int i = 0; i < dirs; ++i) f.c.push_back(T(ndirs));
    return f;
  }

  int dirs() const { return int(c.size()); }

  friend OneForm operator+(const OneForm& a, const OneForm& b) {
    OneForm r = a;
    for (int i = 0; i < r.dirs(); ++i) r.c[size_t(i)] = a.c[size_t(i)] + b.c[size_t(i)];
    return r;
  }
  friend OneForm operator-(const OneForm& a, const OneForm& b) {
    OneForm r = a;
    for (int i = 0; i < r.dirs(); ++i) r.c[size_t(i)] = a.c[size_t(i)] - b.c[size_t(i)];
    return r;
  }
  friend OneForm operator-(const OneForm& a) {
    OneForm r = a;
    for (auto& x : r.c) x = -x;
    return r;
  }

  OneForm euler() const {
    OneForm r = *this;
    for (auto& x : r.c) x = x.euler();
    return r;
  }
};

template <class T>
struct TwoForm {
  int D = 0;
  std::vector<T> c;  // upper triangle, pair (i<j) at index pidx(i,j)

  TwoForm() = default;
  TwoForm(int dirs, int ndirs) : D(dirs) {
    c.reserve(size_t(D * (D - 1) / 2));
    for (int i = 0; i < D * (D - 1) / 2; ++i) c.push_back(T(ndirs));
  }

  int pidx(int i, int j) const {  // requires i < j
    return i * (2 * D - i - 1) / 2 + (j - i - 1);
  }

  const T& at(int i, int j) const { return c[size_t(pidx(i, j))]; }

  // signed accumulate of v theta^i ^ theta^j
  void add(int i, int j, const T& v) {
    if (i == j) return;
    if (i < j)
      c[size_t(pidx(i, j))] += v;
    else
      c[size_t(pidx(j, i))] -= v;
  }

  friend TwoForm operator+(const TwoForm& a, const TwoForm& b) {
    TwoForm r = a;
    for (size_t i = 0; i < r.c.size(); ++i) r.c[i] = a.c[i] + b.c[i];
    return r;
  }
  friend TwoForm operator-(const TwoForm& a, const TwoForm& b) {
    TwoForm r = a;
    for (size_t i = 0; i < r.c.size(); ++i) r.c[i] = a.c[i] - b.c[i];
    return r;
  }
};

// wedge of matrix- or series-valued 1-forms (left/right order kept)
template <class T>
TwoForm<T> wedge(const OneForm<T>& a, const OneForm<T>& b, int ndirs) {
  TwoForm<T> w(a.dirs(), ndirs);
  for (int i = 0; i < a.dirs(); ++i)
    for (int j = i + 1; j < a.dirs(); ++j)
      w.c[size_t(w.pidx(i, j))] =
          a.c[size_t(i)] * b.c[size_t(j)] - a.c[size_t(j)] * b.c[size_t(i)];
  return w;
}

// wedge of a matrix-valued 1-form with a scalar-series 1-form
template <class K>
TwoForm<LoopMatrix<K>> wedge_scalar(const OneForm<LoopMatrix<K>>& a,
                                    const OneForm<DSeries<K>>& s, int ndirs) {
  TwoForm<LoopMatrix<K>> w(a.dirs(), ndirs);
  for (int i = 0; i < a.dirs(); ++i)
    for (int j = i + 1; j < a.dirs(); ++j)
      w.c[size_t(w.pidx(i, j))] = a.c[size_t(i)].scaled(s.c[size_t(j)]) -
                                  a.c[size_t(j)].scaled(s.c[size_t(i)]);
  return w;
}

// Coframe differential table: d(theta^i) as a 2-form per label.
template <class K>
struct CoframeDiff {
  std::vector<TwoForm<DSeries<K>>> d;  // indexed by direction
};

// d of a 1-form, using the jets of its coefficients and the coframe table.
template <class T, class K>
TwoForm<T> exterior_d(const OneForm<T>& a, const CoframeDiff<K>& cd, int ndirs) {
  int D = a.dirs();
  TwoForm<T> r(D, ndirs);
  for (int i = 0; i < D; ++i) {
    // d(coefficient) ^ theta^i
    for (int k = 0; k < D; ++k) {
      if (k == i) continue;
      r.add(k, i, dir_grad(a.c[size_t(i)], k));
    }
    // coefficient * d(theta^i)
    const TwoForm<DSeries<K>>& dth = cd.d[size_t(i)];
    for (int p = 0; p < D; ++p)
      for (int q = p + 1; q < D; ++q) {
        const DSeries<K>& s = dth.at(p, q);
        if (s.val.is_exact_zero()) continue;
        r.add(p, q, coeff_mul_ds(a.c[size_t(i)], s));
      }
  }
  return r;
}

// Scale a scalar 1-form by a matrix (or series) function: X * s.
template <class K>
OneForm<LoopMatrix<K>> times_form(const LoopMatrix<K>& X, const OneForm<DSeries<K>>& s) {
  OneForm<LoopMatrix<K>> r;
  r.c.reserve(s.c.size());
  for (auto& si : s.c) r.c.push_back(X.scaled(si));
  return r;
}

template <class K>
OneForm<DSeries<K>> times_form(const DSeries<K>& f, const OneForm<DSeries<K>>& s) {
  OneForm<DSeries<K>> r;
  r.c.reserve(s.c.size());
  for (auto& si : s.c) r.c.push_back(f * si);
  return r;
}

}  // namespace cmch
