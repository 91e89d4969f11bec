#pragma once

// Windowed formal Laurent series in the spectral parameter lambda.
//
// A series knows its coefficients exactly on a certified degree interval
// [lo, hi]; inside the window an unstored coefficient is exactly zero,
// outside the window coefficients are unknown (truncated). Window
// bookkeeping is what makes hard truncation sound: no operation ever
// reports a coefficient unless it is fully determined by certified data.
//
// lo = NEG_INF means the series is known to vanish below its stored
// support (the usual bounded-below Laurent situation); hi = POS_INF the
// mirror case, which arises from the formal conjugation lambda -> 1/lambda.

#include <algorithm>
#include <cassert>
#include <functional>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "cmch/scalar.hpp"

namespace cmch {

inline constexpr int NEG_INF = -(1 << 30);
inline constexpr int POS_INF = (1 << 30);

inline int sat_add(int a, int b) {
  if (a == NEG_INF || b == NEG_INF) return NEG_INF;
  if (a == POS_INF || b == POS_INF) return POS_INF;
  long s = long(a) + long(b);
  if (s <= NEG_INF) return NEG_INF;
  if (s >= POS_INF) return POS_INF;
  return int(s);
}

enum class Parity { Even, Odd, Mixed, None };  // None: identically-zero data

inline Parity parity_mul(Parity a, Parity b) {
  if (a == Parity::None || b == Parity::None) return Parity::None;
  if (a == Parity::Mixed || b == Parity::Mixed) return Parity::Mixed;
  return (a == b) ? Parity::Even : Parity::Odd;
}

inline Parity parity_add(Parity a, Parity b) {
  if (a == Parity::None) return b;
  if (b == Parity::None) return a;
  return (a == b) ? a : Parity::Mixed;
}

inline const char* parity_name(Parity p) {
  switch (p) {
    case Parity::Even: return "even";
    case Parity::Odd: return "odd";
    case Parity::Mixed: return "mixed";
    default: return "zero";
  }
}

struct SeriesError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

template <class K>
class LaurentSeries {
  using Ops = ScalarOps<K>;

 public:
  int lo = NEG_INF;
  int hi = POS_INF;
  bool partial = false;  // set when a projection cut fell outside the window
  // sorted by degree, values nonzero
  std::vector<std::pair<int, K>> coeffs;

  LaurentSeries() = default;

  static LaurentSeries zero() { return LaurentSeries(); }

  static LaurentSeries unknown() {
    LaurentSeries s;
    s.lo = 1;
    s.hi = 0;
    return s;
  }

  static LaurentSeries monomial(int deg, K c) {
    LaurentSeries s;
    if (!Ops::is_zero(c)) s.coeffs.emplace_back(deg, std::move(c));
    return s;
  }

  static LaurentSeries konst(K c) { return monomial(0, std::move(c)); }

  bool window_empty() const { return lo > hi; }
  bool stored_empty() const { return coeffs.empty(); }

  // zero at every certified degree and certified everywhere
  bool is_exact_zero() const {
    return coeffs.empty() && lo == NEG_INF && hi == POS_INF;
  }

  int min_stored() const { return coeffs.front().first; }
  int max_stored() const { return coeffs.back().first; }

  // Hull of degrees where the series could be nonzero (unknown regions
  // included). empty = certainly zero everywhere.
  struct Hull {
    int lo, hi;
    bool empty;
  };

  Hull pn_hull() const {
    Hull h{NEG_INF, POS_INF, false};
    if (lo > NEG_INF) {
      h.lo = NEG_INF;
    } else {
      h.lo = !coeffs.empty() ? min_stored() : (hi < POS_INF ? sat_add(hi, 1) : POS_INF);
    }
    if (hi < POS_INF) {
      h.hi = POS_INF;
    } else {
      h.hi = !coeffs.empty() ? max_stored() : (lo > NEG_INF ? sat_add(lo, -1) : NEG_INF);
    }
    if (h.lo > h.hi) h.empty = true;
    return h;
  }

  // Known coefficient, nullopt if the degree lies outside the window.
  std::optional<K> coeff(int d) const {
    if (d < lo || d > hi) return std::nullopt;
    auto it = std::lower_bound(coeffs.begin(), coeffs.end(), d,
                               [](const auto& p, int x) { return p.first < x; });
    if (it != coeffs.end() && it->first == d) return it->second;
    return Ops::zero();
  }

  K coeff_or_zero(int d) const {
    auto c = coeff(d);
    return c ? *c : Ops::zero();
  }

  Parity parity() const {
    bool ev = false, od = false;
    for (auto& [d, c] : coeffs) ((d % 2) ? od : ev) = true;
    if (!ev && !od) return Parity::None;
    if (ev && od) return Parity::Mixed;
    return ev ? Parity::Even : Parity::Odd;
  }

  void set(int d, K v) {
    assert(d >= lo && d <= hi);
    auto it = std::lower_bound(coeffs.begin(), coeffs.end(), d,
                               [](const auto& p, int x) { return p.first < x; });
    if (it != coeffs.end() && it->first == d) {
      if (Ops::is_zero(v))
        coeffs.erase(it);
      else
        it->second = std::move(v);
    } else if (!Ops::is_zero(v)) {
      coeffs.insert(it, {d, std::move(v)});
    }
  }

  // Narrow the window; drops coefficients that fall outside.
  LaurentSeries restricted(int nlo, int nhi) const {
    LaurentSeries r;
    r.lo = std::max(lo, nlo);
    r.hi = std::min(hi, nhi);
    r.partial = partial;
    for (auto& [d, c] : coeffs)
      if (d >= r.lo && d <= r.hi) r.coeffs.emplace_back(d, c);
    return r;
  }

  friend LaurentSeries operator+(const LaurentSeries& a, const LaurentSeries& b) {
    LaurentSeries r;
    r.lo = std::max(a.lo, b.lo);
    r.hi = std::min(a.hi, b.hi);
    r.partial = a.partial || b.partial;
    if (r.lo > r.hi) return r;
    auto ia = a.coeffs.begin(), ib = b.coeffs.begin();
    while (ia != a.coeffs.end() || ib != b.coeffs.end()) {
      int da = ia != a.coeffs.end() ? ia->first : POS_INF;
      int db = ib != b.coeffs.end() ? ib->first : POS_INF;
      int d = std::min(da, db);
      K v = Ops::zero();
      if (da == d) v = v + (ia++)->second;
      if (db == d) v = v + (ib++)->second;
      if (d >= r.lo && d <= r.hi && !Ops::is_zero(v)) r.coeffs.emplace_back(d, std::move(v));
    }
    return r;
  }

  friend LaurentSeries operator-(const LaurentSeries& a) {
    LaurentSeries r = a;
    for (auto& [d, c] : r.coeffs) c = -c;
    return r;
  }

  friend LaurentSeries operator-(const LaurentSeries& a, const LaurentSeries& b) {
    return a + (-b);
  }

  LaurentSeries scaled(const K& s) const {
    LaurentSeries r;
    r.lo = lo;
    r.hi = hi;
    r.partial = partial;
    if (Ops::is_zero(s)) {
      r.lo = NEG_INF;
      r.hi = POS_INF;
      return r;
    }
    r.coeffs.reserve(coeffs.size());
    for (auto& [d, c] : coeffs) {
      K v = c * s;
      if (!Ops::is_zero(v)) r.coeffs.emplace_back(d, std::move(v));
    }
    return r;
  }

  LaurentSeries shifted(int k) const {
    LaurentSeries r;
    r.lo = sat_add(lo, k);
    r.hi = sat_add(hi, k);
    r.partial = partial;
    r.coeffs.reserve(coeffs.size());
    for (auto& [d, c] : coeffs) r.coeffs.emplace_back(d + k, c);
    return r;
  }

  friend LaurentSeries operator*(const LaurentSeries& a, const LaurentSeries& b) {
    Hull ha = a.pn_hull(), hb = b.pn_hull();
    LaurentSeries r;
    r.partial = a.partial || b.partial;
    if (ha.empty || hb.empty) return r;  // certainly-zero factor
    int rlo = NEG_INF, rhi = POS_INF;
    if (a.lo > NEG_INF) rlo = std::max(rlo, sat_add(a.lo, hb.hi));
    if (b.lo > NEG_INF) rlo = std::max(rlo, sat_add(b.lo, ha.hi));
    if (a.hi < POS_INF) rhi = std::min(rhi, sat_add(a.hi, hb.lo));
    if (b.hi < POS_INF) rhi = std::min(rhi, sat_add(b.hi, ha.lo));
    r.lo = rlo;
    r.hi = rhi;
    if (r.lo > r.hi || a.coeffs.empty() || b.coeffs.empty()) return r;
    // dense accumulation over the reachable degree range
    int slo = std::max(a.min_stored() + b.min_stored(), r.lo);
    int shi = std::min(a.max_stored() + b.max_stored(), r.hi);
    if (slo > shi) return r;
    std::vector<K> acc(size_t(shi - slo + 1), Ops::zero());
    for (auto& [da, ca] : a.coeffs) {
      for (auto& [db, cb] : b.coeffs) {
        int d = da + db;
        if (d < slo || d > shi) continue;
        acc[size_t(d - slo)] += ca * cb;
      }
    }
    for (int d = slo; d <= shi; ++d) {
      K& v = acc[size_t(d - slo)];
      if (!Ops::is_zero(v)) r.coeffs.emplace_back(d, std::move(v));
    }
    return r;
  }

  // Euler operator D = lambda d/dlambda: degree-d coefficient scaled by d.
  LaurentSeries euler() const {
    LaurentSeries r;
    r.lo = lo;
    r.hi = hi;
    r.partial = partial;
    for (auto& [d, c] : coeffs) {
      if (d == 0) continue;
      r.coeffs.emplace_back(d, c * Ops::from_int(d));
    }
    return r;
  }

  // lambda -> 1/lambda with complex-conjugated coefficients.
  LaurentSeries conj_flip() const {
    LaurentSeries r;
    r.lo = (hi == POS_INF) ? NEG_INF : -hi;
    r.hi = (lo == NEG_INF) ? POS_INF : -lo;
    r.partial = partial;
    r.coeffs.reserve(coeffs.size());
    for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it)
      r.coeffs.emplace_back(-it->first, Ops::conj(it->second));
    return r;
  }

  K residue() const {
    auto c = coeff(0);
    if (!c) throw SeriesError("residue: degree 0 outside certified window");
    return *c;
  }

  // Degree filtering. keep_ge: retain degrees >= cut, else degrees <= cut.
  LaurentSeries project(int cut, bool keep_ge) const {
    LaurentSeries r;
    if (keep_ge) {
      if (lo <= cut) {
        r.lo = NEG_INF;
        r.hi = std::max(hi, cut - 1);
      } else {
        r.lo = lo;
        r.hi = hi;
        r.partial = true;  // cut below the certified window
      }
      for (auto& [d, c] : coeffs)
        if (d >= cut) r.coeffs.emplace_back(d, c);
    } else {
      if (hi >= cut) {
        r.hi = POS_INF;
        r.lo = std::min(lo, cut + 1);
      } else {
        r.lo = lo;
        r.hi = hi;
        r.partial = true;
      }
      for (auto& [d, c] : coeffs)
        if (d <= cut) r.coeffs.emplace_back(d, c);
    }
    r.partial = r.partial || partial;
    return r;
  }

  // --- inversion / analytic maps -------------------------------------

  // Extreme certified term with nothing hidden beyond it: the lowest
  // stored term when the series is bounded below, the highest when
  // bounded above.
  std::pair<int, K> leading() const {
    if (coeffs.empty()) throw SeriesError("leading term not certified");
    if (lo == NEG_INF) return coeffs.front();
    if (hi == POS_INF) return coeffs.back();
    throw SeriesError("leading term not certified");
  }

  // Truncated composition f(X) for an entire f given by its Taylor
  // coefficients. X must have a definite composition direction: all
  // possibly-nonzero degrees >= 1, or all <= -1. The result is reported
  // within [work_lo, work_hi], which bounds the computation when X is
  // exact on a full window.
  static LaurentSeries compose_entire(const std::function<K(int)>& taylor,
                                      const LaurentSeries& x, int work_lo,
                                      int work_hi) {
    Hull hx = x.pn_hull();
    if (!hx.empty && !(hx.lo >= 1 || hx.hi <= -1))
      throw SeriesError("compose: argument has a degree-0 obstruction");
    LaurentSeries acc = zero().restricted(work_lo, work_hi);
    LaurentSeries p = konst(Ops::one());
    for (int j = 0;; ++j) {
      if (j > 0) p = p * x;
      acc = acc + p.scaled(taylor(j));
      Hull hp = p.pn_hull();
      if (j > 0 && (hp.empty || (hx.lo >= 1 && hp.lo > acc.hi) ||
                    (hx.hi <= -1 && hp.hi < acc.lo)))
        break;
      if (j > 4096) throw SeriesError("compose: runaway composition");
    }
    // The work-window cap hid one-sided support knowledge: an ascending
    // composition is certainly zero below degree 0, a descending one
    // above it. Restore that certainty when the cap was the only reason
    // for the finite window edge.
    bool asc = hx.empty || hx.lo >= 1;
    bool desc = hx.empty || hx.hi <= -1;
    if (asc && x.lo == NEG_INF && acc.lo <= 0 && acc.lo == work_lo) acc.lo = NEG_INF;
    if (desc && x.hi == POS_INF && acc.hi >= 0 && acc.hi == work_hi) acc.hi = POS_INF;
    return acc;
  }

  LaurentSeries inverse(int work_lo, int work_hi) const {
    auto [d0, c0] = leading();
    // x := A / (c0 lambda^d0) - 1; geometric series in -x
    LaurentSeries x = shifted(-d0).scaled(Ops::one() / c0) - konst(Ops::one());
    auto taylor = [](int j) {
      return j % 2 == 0 ? Ops::one() : -Ops::one();
    };
    LaurentSeries g =
        compose_entire(taylor, x, sat_add(work_lo, d0), sat_add(work_hi, d0));
    return g.shifted(-d0).scaled(Ops::one() / c0);
  }

  // sqrt with an explicitly chosen root of the leading coefficient.
  LaurentSeries sqrt_with(const K& root0, int work_lo, int work_hi) const {
    auto [d0, c0] = leading();
    if (d0 % 2 != 0) throw SeriesError("sqrt: odd leading degree");
    LaurentSeries x = shifted(-d0).scaled(Ops::one() / c0) - konst(Ops::one());
    // binomial series for (1+x)^{1/2}
    auto cs = std::make_shared<std::vector<K>>(1, Ops::one());
    auto taylor = [cs](int j) {
      while (int(cs->size()) <= j) {
        int n = int(cs->size());
        K f = (Ops::frac(1, 2) - Ops::from_int(n - 1)) / Ops::from_int(n);
        cs->push_back(cs->back() * f);
      }
      return (*cs)[size_t(j)];
    };
    LaurentSeries r = compose_entire(taylor, x, sat_add(work_lo, -d0 / 2),
                                     sat_add(work_hi, -d0 / 2));
    return r.shifted(d0 / 2).scaled(root0);
  }

  LaurentSeries sqrt(int work_lo, int work_hi) const {
    auto [d0, c0] = leading();
    (void)d0;
    auto r = Ops::try_sqrt(c0);
    if (!r) throw SeriesError("sqrt: leading coefficient has no root in the scalar backend");
    return sqrt_with(*r, work_lo, work_hi);
  }

  // log(A) for A with certified constant term 1.
  LaurentSeries log1(int work_lo, int work_hi) const {
    auto [d0, c0] = leading();
    if (d0 != 0 || !(c0 == Ops::one()))
      throw SeriesError("log: constant term must be 1");
    LaurentSeries x = *this - konst(Ops::one());
    auto taylor = [](int j) {
      if (j == 0) return Ops::zero();
      K v = Ops::one() / Ops::from_int(j);
      return j % 2 == 0 ? -v : v;
    };
    return compose_entire(taylor, x, work_lo, work_hi);
  }

  std::string str() const {
    std::string out;
    if (lo > hi) return "<unknown>";
    for (auto& [d, c] : coeffs) {
      if (!out.empty()) out += " + ";
      out += "(" + Ops::str(c) + ")";
      if (d != 0) out += "*l^" + std::to_string(d);
    }
    if (out.empty()) out = "0";
    auto b = [](int v) {
      if (v == NEG_INF) return std::string("-inf");
      if (v == POS_INF) return std::string("inf");
      return std::to_string(v);
    };
    return out + "  on [" + b(lo) + "," + b(hi) + "]";
  }
};

// Named analytic maps, per the series calculus the dressing layer needs.
enum class AnalyticFn { Exp, Cosh, Sinh, Sinhc, Sqrt, Log };

template <class K>
LaurentSeries<K> analytic_apply(AnalyticFn f, const LaurentSeries<K>& s,
                                int work_lo, int work_hi) {
  using Ops = ScalarOps<K>;
  using LS = LaurentSeries<K>;
  switch (f) {
    case AnalyticFn::Sqrt: return s.sqrt(work_lo, work_hi);
    case AnalyticFn::Log: return s.log1(work_lo, work_hi);
    default: break;
  }
  // exp-family Taylor coefficients, built incrementally
  auto cs = std::make_shared<std::vector<K>>();
  cs->push_back(Ops::one());  // 1/0!
  auto invfact = [cs](int j) {
    while (int(cs->size()) <= j) {
      int n = int(cs->size());
      cs->push_back(cs->back() / Ops::from_int(n));
    }
    return (*cs)[size_t(j)];
  };
  std::function<K(int)> taylor;
  switch (f) {
    case AnalyticFn::Exp:
      taylor = [invfact](int j) { return invfact(j); };
      break;
    case AnalyticFn::Cosh:
      taylor = [invfact](int j) { return j % 2 == 0 ? invfact(j) : Ops::zero(); };
      break;
    case AnalyticFn::Sinh:
      taylor = [invfact](int j) { return j % 2 == 1 ? invfact(j) : Ops::zero(); };
      break;
    case AnalyticFn::Sinhc:
      // sinh(x)/x = sum_j x^{2j} / (2j+1)!
      taylor = [invfact](int j) { return j % 2 == 0 ? invfact(j + 1) : Ops::zero(); };
      break;
    default: throw SeriesError("unreachable");
  }
  return LS::compose_entire(taylor, s, work_lo, work_hi);
}

}  // namespace cmch
