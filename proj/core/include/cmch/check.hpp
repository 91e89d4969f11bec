#pragma once

// Residual evaluation: the left-minus-right side of a verified identity,
// reported per coframe direction (or pair), matrix entry, and lambda
// degree. A zero report on the certified window is a verified identity;
// the certified coverage is recorded so a pass can never be vacuous.

#include <algorithm>
#include <string>
#include <type_traits>
#include <vector>

#include "cmch/forms.hpp"

namespace cmch {

struct CheckRow {
  std::string where;  // direction (pair), matrix entry
  int degree = 0;
  double magnitude = 0.0;
  std::string value;  // exact offender, for diagnostics
};

struct Check {
  std::string label;       // identity tag
  bool pass = true;
  int cov_lo = NEG_INF;    // certified coverage common to all entries
  int cov_hi = POS_INF;
  int entries = 0;
  double max_mag = 0.0;
  std::vector<CheckRow> bad;

  bool covers(int lo, int hi) const { return cov_lo <= lo && cov_hi >= hi; }

  void fail_note(const std::string& msg) {
    pass = false;
    bad.push_back({msg, 0, 0.0, ""});
  }

  void merge(const Check& o) {
    pass = pass && o.pass;
    cov_lo = std::max(cov_lo, o.cov_lo);
    cov_hi = std::min(cov_hi, o.cov_hi);
    entries += o.entries;
    max_mag = std::max(max_mag, o.max_mag);
    bad.insert(bad.end(), o.bad.begin(), o.bad.end());
  }
};

template <class K>
class Checker {
 public:
  Checker(const Coframe& cf, int rep_lo, int rep_hi, double tol = 0.0)
      : cf_(cf), rep_lo_(rep_lo), rep_hi_(rep_hi), tol_(tol) {}

  const Coframe& coframe() const { return cf_; }
  int rep_lo() const { return rep_lo_; }
  int rep_hi() const { return rep_hi_; }

  void series(Check& ck, const std::string& where, const LaurentSeries<K>& s) const {
    ck.entries++;
    ck.cov_lo = std::max(ck.cov_lo, std::max(s.lo, rep_lo_));
    ck.cov_hi = std::min(ck.cov_hi, std::min(s.hi, rep_hi_));
    if (s.window_empty()) {
      // nothing certified: never let this pass vacuously
      ck.pass = false;
      if (ck.bad.size() < 64) ck.bad.push_back({where + " <uncertified>", 0, 0.0, ""});
      return;
    }
    for (auto& [d, c] : s.coeffs) {
      if (d < std::max(s.lo, rep_lo_) || d > std::min(s.hi, rep_hi_)) continue;
      double mag = ScalarOps<K>::abs_approx(c);
      if (mag <= tol_) continue;
      ck.pass = false;
      ck.max_mag = std::max(ck.max_mag, mag);
      if (ck.bad.size() < 64)
        ck.bad.push_back({where, d, mag, ScalarOps<K>::str(c)});
    }
  }

  void mat(Check& ck, const std::string& where, const LoopMatrix<K>& m) const {
    series(ck, where + " e11", m.e11.val);
    series(ck, where + " e12", m.e12.val);
    series(ck, where + " e21", m.e21.val);
    series(ck, where + " e22", m.e22.val);
  }

  void ds(Check& ck, const std::string& where, const DSeries<K>& s) const {
    series(ck, where, s.val);
  }

  void oneform(Check& ck, const OneForm<LoopMatrix<K>>& f) const {
    for (int i = 0; i < f.dirs(); ++i) mat(ck, cf_.label(i).name(), f.c[size_t(i)]);
  }

  void oneform(Check& ck, const OneForm<DSeries<K>>& f) const {
    for (int i = 0; i < f.dirs(); ++i) ds(ck, cf_.label(i).name(), f.c[size_t(i)]);
  }

  template <class T>
  void twoform(Check& ck, const TwoForm<T>& w) const {
    for (int i = 0; i < w.D; ++i)
      for (int j = i + 1; j < w.D; ++j) {
        std::string where = cf_.label(i).name() + "^" + cf_.label(j).name();
        if constexpr (std::is_same_v<T, LoopMatrix<K>>)
          mat(ck, where, w.at(i, j));
        else
          ds(ck, where, w.at(i, j));
      }
  }

 private:
  const Coframe& cf_;
  int rep_lo_, rep_hi_;
  double tol_;
};

}  // namespace cmch
