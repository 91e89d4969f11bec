#pragma once

// Named residual suites, addressed by the equation tags their identities
// carry, plus the runner that produces machine-readable reports.

#include <functional>
#include <map>

#include "cmch/dressing.hpp"
#include "cmch/hierarchy.hpp"
#include "cmch/tau.hpp"

namespace cmch {

enum ModeBit : unsigned {
  MB_Base = 1u,
  MB_Minus = 2u,
  MB_Plus = 4u,
  MB_Mixed = 8u,
  MB_All = 15u,
  MB_Sigma = MB_Minus | MB_Plus | MB_Mixed,
};

inline unsigned mode_bit(Mode m) {
  switch (m) {
    case Mode::Base: return MB_Base;
    case Mode::Minus: return MB_Minus;
    case Mode::Plus: return MB_Plus;
    default: return MB_Mixed;
  }
}

template <class K>
struct SuiteDef {
  std::string name;
  std::string desc;
  unsigned modes;
  std::function<std::vector<Check>(const Environment<K>&, const Checker<K>&)> fn;
};

// Plus-mode mirror of the commutator check, composed from the conjugate
// substitution formulas.
template <class K>
Check conj_commutator(const Environment<K>& e, const Checker<K>& ck) {
  using Ops = ScalarOps<K>;
  Check c{"tbarsl"};
  if (!e.cj.built) {
    c.fail_note("conjugate tower not built");
    return c;
  }
  auto proj_hi = [](const LoopMatrix<K>& m) { return m.project(1, true); };
  auto Sbt = [&](int l) { return spectral_Sbt(e, l); };
  auto Sbt_tail = [&](int l) {  // ct of S_{(l+1)}: (lambda^{2l} Sbar^t)_{<=0}
    return e.cj.Sbt.shifted(2 * l).project(0, false);
  };
  auto Ubt_tail = [&](int n) {  // ct of U_{(n+1)}
    return e.h.Ybt.shifted(2 * n + 2).project(0, false).scaled(
        Ops::frac(1, 2) * Ops::i());
  };
  auto Ubt = [&](int n) { return build_Ubt(e.h.Ybt, n); };
  const LoopMatrix<K>& Yb = e.h.Ybt;
  for (int l = e.cfg.vir_lo; l <= e.cfg.Kvir + 1; ++l)
    for (int n = 1; n <= e.cfg.N; ++n) {
      LoopMatrix<K> DtbY = bracket(Ubt(n), Yb);
      LoopMatrix<K> dlY = bracket(Sbt(l), Yb) + (Yb.euler() + Yb).shifted(2 * l);
      LoopMatrix<K> dUbt = bracket(Sbt(l), Ubt(n)) +
                           proj_hi(bracket(Sbt(l), Ubt_tail(n))) -
                           Ubt(l + n).scaled(Ops::from_int(2 * n + 2 * l + 1)) +
                           Ubt(l + n).euler();
      LoopMatrix<K> dSbt = bracket(Ubt(n), Sbt(l)) +
                           proj_hi(bracket(Ubt(n), Sbt_tail(l))) -
                           proj_hi(Ubt(n).euler().shifted(2 * l));
      LoopMatrix<K> t_of_l =
          bracket(dSbt, Yb) + bracket(Sbt(l), DtbY) + (DtbY.euler() + DtbY).shifted(2 * l);
      LoopMatrix<K> l_of_t = bracket(dUbt, Yb) + bracket(Ubt(n), dlY);
      ck.mat(c, "l=" + std::to_string(l) + " n=" + std::to_string(n),
             (t_of_l - l_of_t).val_only());
    }
  return c;
}

// Conjugate-tower consistency: the plus-mode objects are the literal
// conjugate transposes of the minus-side ones.
template <class K>
Check conj_consistency(const Environment<K>& e, const Checker<K>& ck) {
  Check c{"conjtower"};
  if (!e.cj.built) {
    c.fail_note("conjugate tower not built");
    return c;
  }
  ck.mat(c, "Sbt-ct(S)", (e.cj.Sbt - e.sp.S.conj_transpose_val(e.D)).val_only());
  ck.mat(c, "Vbp-ct(V+)", (e.cj.Vbp - e.kl.Vp.conj_transpose_val(e.D)).val_only());
  ck.mat(c, "Vbm-ct(V-)", (e.cj.Vbm - e.kl.Vm.conj_transpose_val(e.D)).val_only());
  ck.series(c, "tfacbar", e.cj.tfac_bar.val - e.sp.tfac.val.conj_flip());
  return c;
}

template <class K>
std::vector<SuiteDef<K>> suite_registry() {
  using E = Environment<K>;
  using C = Checker<K>;
  auto one = [](Check c) { return std::vector<Check>{std::move(c)}; };
  std::vector<SuiteDef<K>> r;

  r.push_back({"b2c2", "determinant constraint det(Y) = -4 gamma l^2", MB_All,
               [one](const E& e, const C& ck) { return one(hierarchy::det_constraint(e, ck)); }});
  r.push_back({"Ybphi", "structure equations for Y and phi", MB_Base,
               [](const E& e, const C& ck) {
                 std::vector<Check> v;
                 v.push_back(hierarchy::killing_residual(e, ck, e.h.Y, e.h.phi, false, "Ybphi"));
                 v.push_back(hierarchy::killing_residual(e, ck, e.h.Ybt, e.h.phi, false, "Ybphi-ct"));
                 v.push_back(hierarchy::maurer_cartan(e, ck, e.h.phi, "dbphi"));
                 return v;
               }});
  r.push_back({"abcstrt", "recursive structure equation for the streams", MB_All,
               [one](const E& e, const C& ck) { return one(hierarchy::recursion_residual(e, ck)); }});
  r.push_back({"truncation", "lambda-degree bound of the Maurer-Cartan form", MB_All,
               [one](const E& e, const C& ck) { return one(hierarchy::truncation_bound(e, ck)); }});
  r.push_back({"YUm", "U_m decomposition of Y", MB_All,
               [one](const E& e, const C& ck) { return one(hierarchy::u_reconstruction(e, ck)); }});
  r.push_back({"Yidentity", "phihat - cbphi = Y alpha + S sigma", MB_All,
               [one](const E& e, const C& ck) { return one(dressing::y_identity(e, ck)); }});
  r.push_back({"cbphi", "Maurer-Cartan equation for cbphi", MB_All,
               [one](const E& e, const C& ck) {
                 Check c{"cbphi"};
                 auto W = exterior_d(e.dr.cbphi, e.cdiff, e.D) +
                          wedge(e.dr.cbphi, e.dr.cbphi, e.D) + cbphi_sigma_correction(e);
                 ck.twoform(c, W);
                 Check c2 = dressing::cbphi_valued(e, ck);
                 c.merge(c2);
                 return one(std::move(c));
               }});
  r.push_back({"detZ", "normalized constant field Z", MB_All,
               [one](const E& e, const C& ck) { return one(dressing::z_normal(e, ck)); }});
  r.push_back({"wave", "wave exponential solves d(e^zeta) = e^zeta Z alpha", MB_All,
               [one](const E& e, const C& ck) { return one(dressing::wave_exponential(e, ck)); }});
  r.push_back({"bthetapm", "theta+- closed; Omega decomposition", MB_All,
               [one](const E& e, const C& ck) { return one(dressing::uv_system(e, ck)); }});
  r.push_back({"gformula", "closed-form g solves dg = g Omega", MB_All,
               [one](const E& e, const C& ck) { return one(dressing::closed_form_g(e, ck)); }});
  r.push_back({"bbp", "lambda^0 expansion of dp", MB_All,
               [one](const E& e, const C& ck) { return one(dressing::dp_expansion(e, ck)); }});
  r.push_back({"YVV", "bracket and product relations for {Y, V+-}", MB_All,
               [one](const E& e, const C& ck) { return one(killing::v_relations(e, ck)); }});
  r.push_back({"VVdet", "determinant and trace table for V+-", MB_All,
               [one](const E& e, const C& ck) { return one(killing::v_determinants(e, ck)); }});
  r.push_back({"dV+2", "Killing equation for V+- under cbphi", MB_All,
               [one](const E& e, const C& ck) { return one(killing::v_killing(e, ck)); }});
  r.push_back({"YPP", "bracket and product relations for {Y, P+-}", MB_All,
               [one](const E& e, const C& ck) { return one(killing::p_relations(e, ck)); }});
  r.push_back({"PPdet", "determinant and trace table for P+-", MB_All,
               [one](const E& e, const C& ck) { return one(killing::p_determinants(e, ck)); }});
  r.push_back({"PPpm", "P decomposition over the ch/sh basis", MB_All,
               [one](const E& e, const C& ck) { return one(killing::p_membership(e, ck)); }});
  r.push_back({"dP+2", "extended Killing equation for P+-", MB_All,
               [one](const E& e, const C& ck) { return one(killing::p_killing(e, ck)); }});
  r.push_back({"bsigma+normal", "perturbing the sigma+ normalization", MB_All,
               [one](const E& e, const C& ck) {
                 return one(killing::sigma_perturbation(e, ck, 2, 1));
               }});
  r.push_back({"Rformula", "adjoint-operator formula for S", MB_All,
               [one](const E& e, const C& ck) { return one(spectral::adjoint_resolution(e, ck)); }});
  r.push_back({"adresolution", "resolution of identity on twisted elements", MB_All,
               [one](const E& e, const C& ck) {
                 return one(spectral::operator_identity(e, ck, 5));
               }});
  r.push_back({"RVformula", "S in terms of {Y, V+-}", MB_All,
               [one](const E& e, const C& ck) { return one(spectral::rv_formula(e, ck)); }});
  r.push_back({"inhomKF", "inhomogeneous Killing field equation", MB_Base,
               [one](const E& e, const C& ck) { return one(spectral::inhom_killing(e, ck)); }});
  r.push_back({"dcS+", "dressed spectral Killing field equation", MB_All,
               [one](const E& e, const C& ck) { return one(spectral::dressed_spectral(e, ck)); }});
  r.push_back({"compat", "compatibility of the inhomogeneous right side", MB_Base,
               [one](const E& e, const C& ck) {
                 return one(spectral::compatibility(e, ck, e.h.phihat.euler(), "compat"));
               }});
  r.push_back({"mus", "bracket normal forms for S and S-check", MB_All,
               [one](const E& e, const C& ck) { return one(spectral::bracket_normal_forms(e, ck)); }});
  r.push_back({"keyformula", "[S, l^{-1}Y] + D(l^{-1}Y) = 0", MB_All,
               [one](const E& e, const C& ck) { return one(spectral::key_formula(e, ck)); }});
  r.push_back({"ddetS", "d det S = -tr(S phidot)", MB_Base,
               [one](const E& e, const C& ck) { return one(spectral::det_s(e, ck)); }});
  r.push_back({"ssbracket", "Virasoro constants from the realization", MB_All,
               [one](const E& e, const C& ck) {
                 return one(affine::virasoro_constants(e, ck, 8));
               }});
  r.push_back({"affineJacobi", "Jacobi identity for the semidirect bracket", MB_All,
               [one](const E& e, const C& ck) { return one(affine::affine_jacobi(e, ck, 10)); }});
  r.push_back({"Virstrt", "structure equation of the generating form", MB_Sigma,
               [one](const E& e, const C& ck) { return one(affine::virstrt(e, ck)); }});
  r.push_back({"dY+2", "extended structure equation for Y", MB_Sigma,
               [](const E& e, const C& ck) {
                 std::vector<Check> v;
                 v.push_back(hierarchy::killing_residual(e, ck, e.h.Y, e.h.phihat, true, "dY+2"));
                 return v;
               }});
  r.push_back({"dS+2", "extended structure equation for S", MB_Sigma,
               [one](const E& e, const C& ck) { return one(affine::ds_plus(e, ck)); }});
  r.push_back({"u2", "structure equation for the conformal factor", MB_Sigma,
               [one](const E& e, const C& ck) { return one(affine::u_equation(e, ck)); }});
  r.push_back({"hbphi+", "extended structure equation for phihat", MB_All,
               [one](const E& e, const C& ck) { return one(affine::hbphi_plus(e, ck)); }});
  r.push_back({"detYpres", "determinant preservation along sigma", MB_Sigma,
               [one](const E& e, const C& ck) { return one(affine::det_preservation(e, ck)); }});
  r.push_back({"h2xi", "extended structure equations for xi and h2", MB_All,
               [one](const E& e, const C& ck) { return one(affine::h2_xi_equations(e, ck)); }});
  r.push_back({"SkUm", "spectral/U bracket identities", MB_All,
               [one](const E& e, const C& ck) { return one(affine::mixed_identities(e, ck)); }});
  r.push_back({"delSk", "del_t S_k and del_k U_m formulas", MB_Minus,
               [one](const E& e, const C& ck) { return one(affine::del_formulas(e, ck)); }});
  r.push_back({"Smixed", "mixed sigma_j sigma_k identity", MB_Minus,
               [one](const E& e, const C& ck) { return one(affine::smixed(e, ck)); }});
  r.push_back({"tmsk", "[del_t, del_k] Y = 0 by substitution", MB_All,
               [one](const E& e, const C& ck) { return one(affine::commutator_check(e, ck)); }});
  r.push_back({"truncationcontr", "truncation constraint detector", MB_All,
               [](const E& e, const C& ck) {
                 std::vector<Check> v;
                 for (int m = 0; m <= e.cfg.N; ++m)
                   v.push_back(affine::truncation_control(e, ck, e.cfg.N + 1, m, true));
                 v.push_back(affine::truncation_control(e, ck, 3 * e.cfg.N + 4, e.cfg.N, true));
                 return v;
               }});
  r.push_back({"lifteq", "affine lifts of Y and S", MB_All,
               [one](const E& e, const C& ck) { return one(affine::affine_lifts(e, ck)); }});
  r.push_back({"varphi0bY", "central component of l^{-1}Y vanishes", MB_All,
               [one](const E& e, const C& ck) { return one(tau::phi_y_central(e, ck)); }});
  r.push_back({"varphibY", "affine conservation-law 1-form is closed", MB_All,
               [one](const E& e, const C& ck) { return one(tau::phi_y_conservation(e, ck)); }});
  r.push_back({"tau", "log tau = Res(e^u det S), d log tau = phi_S", MB_All,
               [](const E& e, const C& ck) {
                 std::vector<Check> v;
                 Check dphi{"varphibS"};
                 v.push_back(tau::tau_evaluate(e, ck, &dphi));
                 v.push_back(std::move(dphi));
                 return v;
               }});
  r.push_back({"euS2", "derivative identity behind the tau formula", MB_All,
               [one](const E& e, const C& ck) { return one(tau::eu_s2(e, ck)); }});
  r.push_back({"tbarsl", "[del_tbar, delbar_l] Ybar^t = 0 (mirror)", MB_Plus,
               [one](const E& e, const C& ck) { return one(conj_commutator(e, ck)); }});
  r.push_back({"conjtower", "conjugate-transpose tower consistency", MB_Plus,
               [one](const E& e, const C& ck) { return one(conj_consistency(e, ck)); }});
  return r;
}

}  // namespace cmch
