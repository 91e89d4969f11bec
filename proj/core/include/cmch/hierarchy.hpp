#pragma once

// Residual suites for the base hierarchy objects: the determinant
// constraint, the structure equations for Y and phi, the recursive
// structure equations for the coefficient streams, and the truncation
// degree bound.

#include "cmch/towers.hpp"

namespace cmch::hierarchy {

template <class K>
Check det_constraint(const Environment<K>& e, const Checker<K>& ck) {
  using Ops = ScalarOps<K>;
  using LS = LaurentSeries<K>;
  Check c{"b2c2"};
  LS detY = e.h.Y.val_only().det().val;
  ck.series(c, "det(Y)+4*gamma*l^2", detY + LS::monomial(2, Ops::from_int(4) * e.gam));
  // seeds
  ck.series(c, "b2c2-gamma", LS::konst(e.b_val[0] * e.c_val[0] - e.gam));
  ck.series(c, "c2-i*h2half", LS::konst(e.c_val[0] - ScalarOps<K>::i() * e.sval));
  if (!c.covers(std::max(ck.rep_lo(), 0), std::min(ck.rep_hi(), 2 * e.M())))
    c.fail_note("window does not certify the determinant constraint");
  return c;
}

// dX + [phi, X] per direction; for the extended form the (Xdot - X) sigma
// term is included.
template <class K>
Check killing_residual(const Environment<K>& e, const Checker<K>& ck,
                       const LoopMatrix<K>& X, const OneForm<LoopMatrix<K>>& phi,
                       bool extended, const std::string& label) {
  Check c{label};
  LoopMatrix<K> em = X.euler() - X;
  for (int dir = 0; dir < e.D; ++dir) {
    LoopMatrix<K> r = dir_grad(X, dir) + bracket(phi.c[size_t(dir)], X);
    if (extended) {
      const auto& s = e.h.sigma.c[size_t(dir)];
      if (!s.val.is_exact_zero()) r += em.scaled(s);
    }
    ck.mat(c, e.cf.label(dir).name(), r.val_only());
  }
  return c;
}

template <class K>
Check maurer_cartan(const Environment<K>& e, const Checker<K>& ck,
                    const OneForm<LoopMatrix<K>>& phi, const std::string& label) {
  Check c{label};
  auto W = exterior_d(phi, e.cdiff, e.D) + wedge(phi, phi, e.D);
  ck.twoform(c, W);
  return c;
}

// The displayed recursion for the streams against the installed table.
template <class K>
Check recursion_residual(const Environment<K>& e, const Checker<K>& ck) {
  using Ops = ScalarOps<K>;
  Check c{"abcstrt"};
  K i = Ops::i(), half = Ops::frac(1, 2);
  K h2v = e.sval * e.sval, h2bv = e.conj(h2v);
  const auto &A = e.A, &B = e.B, &C = e.C;
  int xi = e.cf.xi(), xb = e.cf.xibar(), rho = e.cf.rho();

  ck.series(c, "da/xi", A.d[size_t(xi)] -
                            (C.val.scaled(i * e.gam) + B.val.scaled(i * h2v)).shifted(-1));
  ck.series(c, "da/xibar", A.d[size_t(xb)] -
                               (B.val.scaled(i * e.gam) + C.val.scaled(i * h2bv)).shifted(1));
  ck.series(c, "da/rho", A.d[size_t(rho)]);
  ck.series(c, "db/xi", B.d[size_t(xi)] - A.val.scaled(i * e.gam * half).shifted(-1));
  ck.series(c, "db/xibar", B.d[size_t(xb)] - A.val.scaled(i * h2bv * half).shifted(1));
  ck.series(c, "db/rho", B.d[size_t(rho)] - B.val.scaled(i));
  ck.series(c, "dc/xi", C.d[size_t(xi)] - A.val.scaled(i * h2v * half).shifted(-1));
  ck.series(c, "dc/xibar", C.d[size_t(xb)] - A.val.scaled(i * e.gam * half).shifted(1));
  ck.series(c, "dc/rho", C.d[size_t(rho)] + C.val.scaled(i));
  // n = 0 content: i gamma c^2 + i h2 b^2 = 0 and da^1 = 0
  ck.series(c, "seed", LaurentSeries<K>::konst(i * e.gam * e.c_val[0] + i * h2v * e.b_val[0]));
  for (int dir = 0; dir < e.D; ++dir) {
    auto a1 = A.d[size_t(dir)].coeff(0);
    if (a1 && !Ops::is_zero(*a1)) {
      c.pass = false;
      c.bad.push_back({"da1/" + e.cf.label(dir).name(), 0, Ops::abs_approx(*a1), Ops::str(*a1)});
    }
  }
  return c;
}

// lambda-degree of the extended Maurer-Cartan form stays in
// [-(2N+1), 2N+1].
template <class K>
Check truncation_bound(const Environment<K>& e, const Checker<K>& ck) {
  Check c{"truncation"};
  int bound = 2 * e.cfg.N + 1;
  for (int dir = 0; dir < e.D; ++dir) {
    const auto& m = e.h.phi.c[size_t(dir)];
    for (auto* p : {&m.e11, &m.e12, &m.e21, &m.e22})
      for (auto& [d, v] : p->val.coeffs)
        if (d < -bound || d > bound) {
          c.pass = false;
          c.bad.push_back({"phi " + e.cf.label(dir).name(), d,
                           ScalarOps<K>::abs_approx(v), ScalarOps<K>::str(v)});
        }
  }
  c.entries++;
  (void)ck;
  return c;
}

// 2i lambda^{2m+2} (U_m + U_{(m+1)}) reconstructs Y.
template <class K>
Check u_reconstruction(const Environment<K>& e, const Checker<K>& ck) {
  using Ops = ScalarOps<K>;
  Check c{"YUm"};
  for (int m = 0; m <= e.cfg.N; ++m) {
    LoopMatrix<K> lhs =
        (e.h.U[size_t(m)] + build_U_tail(e.h.Y, m)).shifted(2 * m + 2).scaled(
            Ops::from_int(2) * Ops::i());
    ck.mat(c, "m=" + std::to_string(m), (lhs - e.h.Y).val_only());
    // U_m is g_{<=-1}-valued, the tail lands in g_{>=0} after the shift
    ck.mat(c, "proj m=" + std::to_string(m),
           e.h.U[size_t(m)].project(0, true).val_only());
  }
  return c;
}

}  // namespace cmch::hierarchy
