#pragma once

// The finite coframe of the truncated hierarchy. Labels:
//   xi, xibar, rho            base surface directions
//   dt_m, dtbar_n  (1<=m<=N)  higher flow directions (t_0 is folded into
//                             xi through dt_0 = -(1/2) h2^{1/2} xi)
//   sg_k    (k in Virasoro range)   negative-type Virasoro duals sigma_k
//   sgbar_l (l in Virasoro range)   positive-type duals sigmabar_l
//
// Which sigma family is present depends on the run mode; the two
// one-sided extensions are kept separate by convention.

#include <cassert>
#include <string>
#include <vector>

namespace cmch {

enum class Mode { Base, Minus, Plus, Mixed };

inline const char* mode_name(Mode m) {
  switch (m) {
    case Mode::Base: return "base";
    case Mode::Minus: return "minus";
    case Mode::Plus: return "plus";
    default: return "mixed";
  }
}

struct DirLabel {
  enum Kind { Xi, XiBar, Rho, T, TBar, Sg, SgBar } kind;
  int idx = 0;  // flow / Virasoro index

  std::string name() const {
    switch (kind) {
      case Xi: return "xi";
      case XiBar: return "xibar";
      case Rho: return "rho";
      case T: return "dt" + std::to_string(idx);
      case TBar: return "dtbar" + std::to_string(idx);
      case Sg: return "sg" + std::to_string(idx);
      default: return "sgbar" + std::to_string(idx);
    }
  }

  bool operator==(const DirLabel& o) const { return kind == o.kind && idx == o.idx; }
};

class Coframe {
 public:
  Coframe() = default;

  // vir_lo is normally N+1; the truncation-violation control lowers it.
  Coframe(int N, int vir_lo, int vir_hi, Mode mode) : N_(N), mode_(mode) {
    labels_.push_back({DirLabel::Xi, 0});
    labels_.push_back({DirLabel::XiBar, 0});
    labels_.push_back({DirLabel::Rho, 0});
    for (int m = 1; m <= N; ++m) labels_.push_back({DirLabel::T, m});
    for (int n = 1; n <= N; ++n) labels_.push_back({DirLabel::TBar, n});
    if (mode == Mode::Minus || mode == Mode::Mixed)
      for (int k = vir_lo; k <= vir_hi; ++k) labels_.push_back({DirLabel::Sg, k});
    if (mode == Mode::Plus || mode == Mode::Mixed)
      for (int l = vir_lo; l <= vir_hi; ++l) labels_.push_back({DirLabel::SgBar, l});
  }

  int size() const { return int(labels_.size()); }
  const DirLabel& label(int i) const { return labels_[size_t(i)]; }
  const std::vector<DirLabel>& labels() const { return labels_; }
  int truncation() const { return N_; }
  Mode mode() const { return mode_; }

  int find(DirLabel::Kind kind, int idx = 0) const {
    for (int i = 0; i < size(); ++i)
      if (labels_[size_t(i)].kind == kind && labels_[size_t(i)].idx == idx) return i;
    return -1;
  }

  int xi() const { return 0; }
  int xibar() const { return 1; }
  int rho() const { return 2; }

  std::vector<int> sg_dirs() const {
    std::vector<int> v;
    for (int i = 0; i < size(); ++i)
      if (labels_[size_t(i)].kind == DirLabel::Sg) v.push_back(i);
    return v;
  }
  std::vector<int> sgbar_dirs() const {
    std::vector<int> v;
    for (int i = 0; i < size(); ++i)
      if (labels_[size_t(i)].kind == DirLabel::SgBar) v.push_back(i);
    return v;
  }

  // The conjugation involution on labels. Defined whenever the label set
  // is closed under it (always true for Base and Mixed modes).
  int conj_dir(int i) const {
    const DirLabel& l = labels_[size_t(i)];
    switch (l.kind) {
      case DirLabel::Xi: return xibar();
      case DirLabel::XiBar: return xi();
      case DirLabel::Rho: return rho();
      case DirLabel::T: return find(DirLabel::TBar, l.idx);
      case DirLabel::TBar: return find(DirLabel::T, l.idx);
      case DirLabel::Sg: return find(DirLabel::SgBar, l.idx);
      default: return find(DirLabel::Sg, l.idx);
    }
  }

  bool conj_closed() const {
    for (int i = 0; i < size(); ++i)
      if (conj_dir(i) < 0) return false;
    return true;
  }

 private:
  int N_ = 0;
  Mode mode_ = Mode::Base;
  std::vector<DirLabel> labels_;
};

}  // namespace cmch
