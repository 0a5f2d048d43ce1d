#include "sqg/verify.hpp"

#include <cstdlib>
#include <functional>
#include <random>

namespace sqg {

namespace {

FgAbGroup G(const std::string& text) { return parse_group(text); }

std::string int_str(const Int& v) { return v.str(); }

struct Suite {
  size_t checks = 0;
  size_t failed = 0;
  std::string first;

  void check(bool ok, const std::string& what) {
    ++checks;
    if (!ok) {
      ++failed;
      if (first.empty()) first = what;
    }
  }
};

// ---- shared small helpers -------------------------------------------------

AbHom include_of(const Subgroup& s) { return AbHom{s.grp, s.ambient, s.gens}; }

// One cokernel projection per side instead of a coordinate solve per
// generator; the corpus sweeps hit groups with dozens of generators.
bool same_subgroup(const Subgroup& s, const Subgroup& t) {
  AbHom ps = quotient_projection(hom_cokernel(include_of(s)));
  AbHom pt = quotient_projection(hom_cokernel(include_of(t)));
  return hom_is_zero(compose(ps, include_of(t))) &&
         hom_is_zero(compose(pt, include_of(s)));
}

bool exact_at(const AbHom& f, const AbHom& g) {
  if (!hom_is_zero(compose(g, f))) return false;
  AbHom pi = quotient_projection(hom_cokernel(f));
  return hom_is_zero(compose(pi, include_of(hom_kernel(g))));
}

bool injective(const AbHom& f) { return hom_kernel(f).grp.is_trivial(); }
bool surjective(const AbHom& f) { return hom_cokernel(f).grp.is_trivial(); }
bool is_bijective(const AbHom& f) { return injective(f) && surjective(f); }

AbHom from_struct_images(const FunctorValue& src, const FgAbGroup& dst,
                         const std::vector<Vec>& img) {
  Mat m(dst.ngens(), src.group.ngens());
  for (size_t t = 0; t < src.group.ngens(); ++t) {
    Vec c = get_col(src.lift, t);
    Vec acc = zero_of(dst);
    for (size_t s = 0; s < c.size(); ++s)
      if (c[s] != 0) acc = add(dst, acc, smul(dst, c[s], img[s]));
    set_col(m, t, acc);
  }
  return AbHom{src.group, dst, m};
}

AbHom tensor_to_lambda(const FgAbGroup& a) {
  FunctorValue t2 = quad_value(Functor::Tensor2, a);
  FunctorValue l2 = quad_value(Functor::Lambda2, a);
  std::vector<Vec> img;
  for (const StructGen& g : t2.sgens)
    img.push_back(eval_pair(l2, unit_of(a, g.i), unit_of(a, g.j)));
  return from_struct_images(t2, l2.group, img);
}

AbHom psi_into_tensor(const FgAbGroup& a) {
  FunctorValue ps = quad_value(Functor::Psi, a);
  FunctorValue t2 = quad_value(Functor::Tensor2, a);
  std::vector<Vec> img;
  for (const StructGen& g : ps.sgens) {
    if (g.kind == GenKind::Diag) {
      img.push_back(eval_quad(t2, unit_of(a, g.i)));
    } else {
      Vec ij = eval_pair(t2, unit_of(a, g.i), unit_of(a, g.j));
      Vec ji = eval_pair(t2, unit_of(a, g.j), unit_of(a, g.i));
      img.push_back(add(t2.group, ij, ji));
    }
  }
  return from_struct_images(ps, t2.group, img);
}

Subgroup two_torsion(const FgAbGroup& a) {
  return hom_kernel(hom_smul(2, hom_identity(a)));
}

// Searches for an isomorphism beta with beta . lhs = rhs (and compatible
// involutions when given).
bool carried_by_iso(const FgAbGroup& src_grp, const FgAbGroup& dst_grp,
                    const AbHom& lhs, const AbHom& rhs,
                    const AbHom* lhs_inv = nullptr, const AbHom* rhs_inv = nullptr) {
  if (!is_isomorphic(src_grp, dst_grp)) return false;
  if (!dst_grp.is_finite()) return false;
  std::vector<Vec> elems = all_elements(dst_grp);
  const size_t g = src_grp.ngens();
  std::vector<size_t> pick(g, 0);
  while (true) {
    std::vector<Vec> cols;
    for (size_t i = 0; i < g; ++i) cols.push_back(elems[pick[i]]);
    AbHom beta = hom_from_cols(src_grp, dst_grp, cols);
    if (hom_well_defined(beta) && is_bijective(beta) &&
        hom_equal(compose(beta, lhs), rhs) &&
        (lhs_inv == nullptr ||
         hom_equal(compose(beta, *lhs_inv), compose(*rhs_inv, beta))))
      return true;
    size_t i = 0;
    while (i < g && ++pick[i] == elems.size()) pick[i++] = 0;
    if (i == g) return false;
  }
}

AbHom include_hom(const Subgroup& s) { return AbHom{s.grp, s.ambient, s.gens}; }

bool psg_same(const PreSquareGroup& a, const PreSquareGroup& b) {
  if (!(a.me.quotient == b.me.quotient) || !(a.me.center_part == b.me.center_part) ||
      !(a.mee == b.mee))
    return false;
  if (!cocycle_equal(a.me.f, b.me.f)) return false;
  if (!hom_equal(a.sigma, b.sigma) || !hom_equal(a.p, b.p)) return false;
  for (size_t i = 0; i < a.bracket.size(); ++i)
    for (size_t j = 0; j < a.bracket.size(); ++j)
      if (!is_zero(a.mee, sub(a.mee, a.bracket[i][j], b.bracket[i][j]))) return false;
  return true;
}

bool hmaps_agree(const SquareGroup& a, const SquareGroup& b) {
  std::mt19937_64 rng(20260815);
  std::uniform_int_distribution<int> d(-9, 9);
  auto rnd = [&](const FgAbGroup& g) {
    Vec x(g.ngens());
    for (auto& e : x) e = d(rng);
    return reduce(g, x);
  };
  for (int t = 0; t < 24; ++t) {
    Nil2El x = nil2_el(a.qe, rnd(a.qe.quotient), rnd(a.qe.center_part));
    Vec va = sg_h_eval(a, x);
    Vec vb = sg_h_eval(b, x);
    if (!is_zero(a.qee, sub(a.qee, va, vb))) return false;
  }
  return true;
}

std::vector<H2Class> enumerate_classes(const FgAbGroup& q, const FgAbGroup& c) {
  ExtGroup e = ext_group(q, c);
  FunctorValue l2 = quad_value(Functor::Lambda2, q);
  HomGroup hg = hom_group(l2.group, c);
  std::vector<H2Class> out;
  for (const Vec& ec : all_elements(e.group))
    for (const Vec& hc : all_elements(hg.group))
      out.push_back(H2Class{ExtClass{e, ec}, hg.to_hom(hc)});
  return out;
}

PreSquareGroup omega_plain(const FgAbGroup& a) {
  return omega(canonical_TA(a), OmegaVariant::Plain);
}

PreSquareGroup omega_bar(const FgAbGroup& a) {
  return omega(canonical_TA(a), OmegaVariant::Bar);
}

Int me_order(const PreSquareGroup& m) {
  return m.me.quotient.order() * m.me.center_part.order();
}

// All finitely generated groups with torsion order <= bound and free rank
// <= free_rank, one per isomorphism class, enumerated as invariant-factor
// chains so the sweep order is stable.
std::vector<FgAbGroup> group_corpus(const Int& bound, size_t free_rank) {
  std::vector<Vec> chains;
  std::function<void(Vec, Int)> extend = [&](Vec cur, Int prod) {
    chains.push_back(cur);
    Int base = cur.empty() ? Int(1) : cur.back();
    Int d = base == 1 ? Int(2) : base;
    for (; prod * d <= bound; d += base == 1 ? Int(1) : base) {
      Vec next = cur;
      next.push_back(d);
      extend(next, prod * d);
    }
  };
  extend({}, 1);
  std::vector<FgAbGroup> out;
  for (const Vec& ch : chains)
    for (size_t r = 0; r <= free_rank; ++r) {
      Vec fac = ch;
      fac.insert(fac.end(), r, Int(0));
      out.push_back(FgAbGroup{fac});
    }
  return out;
}

// ---- suites ----------------------------------------------------------------

void suite_functor_tables(Suite& s, const VerifyBounds& b, bool mutate) {
  auto expect = [&](Functor f, const Int& phi_n, const std::string& in,
                    std::string want, const Int& input_order) {
    if (input_order != 0 && input_order > b.max_order) return;
    if (mutate && f == Functor::P && in == "Z/2Z" && phi_n == 0) want = "Z/8Z";
    FunctorValue v = phi_n == 0 ? quad_value(f, G(in)) : quad_value_phi(phi_n, G(in));
    std::string got = format_group(v.group);
    s.check(got == want, functor_name(f, phi_n) + "(" + in + ") = " + got +
                             ", expected " + want);
  };

  expect(Functor::P, 0, "Z", "Z + Z", 0);
  expect(Functor::P, 0, "Z/2Z", "Z/4Z", 2);
  expect(Functor::P, 0, "Z/4Z", "Z/2Z + Z/8Z", 4);
  expect(Functor::P, 0, "Z/8Z", "Z/4Z + Z/16Z", 8);
  expect(Functor::P, 0, "Z/3Z", "Z/3Z + Z/3Z", 3);
  expect(Functor::P, 0, "Z/9Z", "Z/9Z + Z/9Z", 9);
  expect(Functor::P, 0, "Z/27Z", "Z/27Z + Z/27Z", 27);
  expect(Functor::P, 0, "Z/5Z", "Z/5Z + Z/5Z", 5);
  expect(Functor::P, 0, "Z/25Z", "Z/25Z + Z/25Z", 25);

  expect(Functor::Gamma, 0, "Z", "Z", 0);
  expect(Functor::Gamma, 0, "Z/2Z", "Z/4Z", 2);
  expect(Functor::Gamma, 0, "Z/4Z", "Z/8Z", 4);
  expect(Functor::Gamma, 0, "Z/8Z", "Z/16Z", 8);
  expect(Functor::Gamma, 0, "Z/3Z", "Z/3Z", 3);
  expect(Functor::Gamma, 0, "Z/9Z", "Z/9Z", 9);
  expect(Functor::Gamma, 0, "Z/27Z", "Z/27Z", 27);
  expect(Functor::Gamma, 0, "Z/5Z", "Z/5Z", 5);
  expect(Functor::Gamma, 0, "Z/25Z", "Z/25Z", 25);

  expect(Functor::Psi, 0, "Z", "Z", 0);
  for (int n = 2; n <= 12; ++n) {
    std::string cn = "Z/" + std::to_string(n) + "Z";
    expect(Functor::Psi, 0, cn, cn, n);
  }

  for (int n = 1; n <= 3; ++n)
    for (int k = 1; k <= 3; ++k) {
      Int order = Int(1) << k;
      expect(Functor::PhiN, n, "Z/" + int_str(order) + "Z",
             k == n ? "Z/2Z" : "0", order);
    }
}

void suite_cross_effects(Suite& s, const VerifyBounds& b) {
  const std::vector<Functor> all = {
      Functor::P,       Functor::Gamma,   Functor::Psi,
      Functor::Sym2,    Functor::Lambda2, Functor::LambdaTilde2,
      Functor::Tensor2, Functor::Phi};
  const std::vector<std::pair<std::string, Int>> groups = {
      {"Z/4Z", 4}, {"Z/6Z", 6}, {"Z/2Z", 2}, {"Z + Z/2Z", 2}, {"Z/3Z", 3}};
  const std::vector<std::pair<size_t, size_t>> pairs = {{0, 1}, {2, 2}, {3, 4}};
  for (Functor f : all)
    for (auto [ia, ib] : pairs) {
      if (groups[ia].second > b.max_order || groups[ib].second > b.max_order)
        continue;
      CrossEffectReport rep =
          cross_effect_check(f, G(groups[ia].first), G(groups[ib].first));
      std::string what = functor_name(f) + " on (" + groups[ia].first + ", " +
                         groups[ib].first + ")";
      s.check(rep.ok, what + ": decomposition failed");
      s.check(is_isomorphic(rep.sum, rep.whole), what + ": summands mismatch");
    }
}

void suite_exact_sequences(Suite& s, const VerifyBounds& b) {
  Int bound = b.max_order < 64 ? b.max_order : Int(64);
  for (const FgAbGroup& a : group_corpus(bound, 2)) {
    std::string name = format_group(a);

    AbHom j = nat_map(NatMapName::J, a);
    AbHom q = nat_map(NatMapName::Q, a);
    s.check(injective(j) && exact_at(j, q) && surjective(q),
            "symmetric square sequence fails on " + name);

    AbHom incl = psi_into_tensor(a);
    AbHom rho = tensor_to_lambda(a);
    s.check(injective(incl) && exact_at(incl, rho) && surjective(rho),
            "tensor square sequence fails on " + name);

    AbHom iota = nat_map(NatMapName::Iota, a);
    AbHom tau = nat_map(NatMapName::Tau, a);
    s.check(injective(iota) && exact_at(iota, tau) && exact_at(tau, rho),
            "whitehead sequence fails on " + name);

    AbHom fpm = nat_map(NatMapName::FPM, a);
    AbHom nu = nat_map(NatMapName::Nu, a);
    s.check(same_subgroup(hom_kernel(fpm), two_torsion(a)) && exact_at(fpm, nu) &&
                surjective(nu),
            "two-torsion sequence fails on " + name);

    s.check(surjective(nat_map(NatMapName::TauPrime, a)),
            "reduced projection not onto on " + name);
  }
}

void suite_oracle_agreement(Suite& s, const VerifyBounds& b) {
  std::vector<FgAbGroup> groups;
  Int top = b.max_order < 32 ? b.max_order : Int(32);
  for (Int n = 2; n <= top; ++n) groups.push_back(cyclic(n));
  if (b.max_order >= 8) groups.push_back(G("Z/2Z + Z/4Z"));
  const std::vector<Functor> four = {Functor::P, Functor::Gamma, Functor::Sym2,
                                     Functor::Lambda2};
  for (const FgAbGroup& a : groups)
    for (Functor f : four) {
      std::string what = functor_name(f) + " on " + format_group(a);
      FunctorValue fo = oracle_value(f, a, b.max_order);
      FunctorValue fs = quad_value(f, a);
      s.check(fo.group == fs.group, what + ": value groups differ");
      bool orders_ok = true;
      ElementIndex ei = element_index(a);
      for (size_t i = 0; i < ei.size && orders_ok; ++i) {
        Vec x = ei.element(i);
        if (f == Functor::Lambda2) {
          for (size_t jj = 0; jj < ei.size && orders_ok; ++jj) {
            Vec y = ei.element(jj);
            orders_ok = element_order(fo.group, eval_pair(fo, x, y)) ==
                        element_order(fs.group, eval_pair(fs, x, y));
          }
        } else {
          orders_ok = element_order(fo.group, eval_quad(fo, x)) ==
                      element_order(fs.group, eval_quad(fs, x));
        }
      }
      s.check(orders_ok, what + ": element orders differ");
    }
}

void suite_theta(Suite& s, const VerifyBounds& b) {
  auto expect = [&](const std::string& in, bool nonzero, const Int& order) {
    if (order > b.max_order) return;
    ExtClass t = theta(G(in));
    s.check(t.zero() != nonzero, "theta(" + in + ") should be " +
                                     (nonzero ? "nonzero" : "zero"));
  };
  expect("Z/2Z", true, 2);
  expect("Z/4Z", true, 4);
  expect("Z/8Z", true, 8);
  for (Int n = 3; n <= 45; n += 2) {
    if (n > b.max_order) break;
    expect("Z/" + int_str(n) + "Z", false, n);
  }
  expect("Z", false, 0);
  expect("Z + Z", false, 0);
  expect("Z/6Z", true, 6);
  expect("Z + Z/6Z", true, 6);

  auto expect_reduced = [&](const std::string& in, bool nonzero, const Int& order) {
    if (order > b.max_order) return;
    s.check(theta(G(in), true).zero() != nonzero,
            "reduced theta(" + in + ") should be " + (nonzero ? "nonzero" : "zero"));
  };
  expect_reduced("Z/2Z", true, 2);
  expect_reduced("Z/4Z", false, 4);
  expect_reduced("Z/3Z", false, 3);
  expect_reduced("Z/2Z + Z/4Z", true, 8);

  // the extension class vanishes exactly when the splitting of its
  // representative cocycle has both components zero
  for (const char* name : {"Z/2Z", "Z/3Z", "Z/4Z", "Z/5Z", "Z/8Z", "Z/9Z"}) {
    FgAbGroup a = G(name);
    if (a.order() > b.max_order) continue;
    PreSquareGroup m = omega_plain(a);
    LiftResult res = lift(m);
    bool lifts = res.status == LiftStatus::Lifted;
    s.check(lifts == theta(a).zero(),
            std::string("lift of the universal form disagrees with theta on ") +
                name);
  }
}

void suite_h2_round_trip(Suite& s, const VerifyBounds& b) {
  const std::vector<std::pair<std::string, Int>> qs = {
      {"Z/2Z", 2}, {"Z/4Z", 4}, {"Z/2Z + Z/2Z", 4}, {"Z/2Z + Z/4Z", 8}, {"Z/8Z", 8}};
  const std::vector<std::pair<std::string, Int>> cs = {
      {"Z/2Z", 2}, {"Z/3Z", 3}, {"Z/4Z", 4}};
  for (const auto& [qn, qo] : qs)
    for (const auto& [cn, co] : cs) {
      if (qo > b.max_order || co > b.max_order) continue;
      FgAbGroup q = G(qn), c = G(cn);
      for (const H2Class& h : enumerate_classes(q, c)) {
        Cocycle f = class_to_cocycle(h);
        std::string what = "class over (" + qn + ", " + cn + ")";
        s.check(cocycle_valid(f), what + ": representative is not a cocycle");
        s.check(h2_equal(h2_split(f), h), what + ": splitting does not round trip");
        s.check(h2_equal(h2_split(cocycle_to_table(f)), h),
                what + ": table form changes the class");
      }
    }
}

void suite_omega_invariants(Suite& s, const VerifyBounds& b) {
  const std::vector<std::pair<std::string, Int>> groups = {
      {"Z", 0}, {"Z/2Z", 2}, {"Z/3Z", 3}, {"Z/4Z", 4}, {"Z/2Z + Z/2Z", 4}};
  for (const auto& [name, order] : groups) {
    if (order > b.max_order) continue;
    FgAbGroup a = G(name);
    TensorGroup t2a = tensor(cyclic(2), a);

    PreSquareGroup m = omega_plain(a);
    PsgCheck chk = psg_validate(m, 16);
    s.check(chk.ok, "universal form on " + name + " is invalid: " + chk.violation);
    PsgInvariants inv = psg_invariants(m);
    s.check(inv.pi0 == a, "pi0 of the universal form on " + name);
    s.check(is_isomorphic(inv.pi1.grp, quad_value(Functor::Psi, a).group),
            "pi1 of the universal form on " + name);
    s.check(hom_equal(compose(include_hom(inv.pi1), inv.k),
                      nat_map(NatMapName::Tau, a)),
            "kernel invariant of the universal form on " + name);
    s.check(hom_equal(inv.pi1_involution, hom_neg(hom_identity(inv.pi1.grp))),
            "involution of the universal form on " + name);
    s.check(inv.is_psg0 && inv.is_flat, "class flags of the universal form on " + name);

    QComplex qc = q_complex_homology(m);
    s.check(is_isomorphic(qc.pi1_bar, t2a.group),
            "stable pi1 of the universal form on " + name);
    s.check(surjective(qc.k_bar), "stable kernel invariant not onto on " + name);
    s.check(hom_equal(compose(qc.epsilon, inv.k),
                      compose(qc.k_bar, nat_map(NatMapName::GammaMod2, a))),
            "kernel invariants do not commute with reduction on " + name);

    PreSquareGroup mb = omega_bar(a);
    PsgCheck bchk = psg_validate(mb, 16);
    s.check(bchk.ok, "reduced universal form on " + name + " is invalid");
    PsgInvariants binv = psg_invariants(mb);
    s.check(binv.pi0 == a && binv.is_psgs && binv.is_flat,
            "flags of the reduced universal form on " + name);
    s.check(is_isomorphic(binv.pi1.grp, t2a.group),
            "pi1 of the reduced universal form on " + name);
    s.check(hom_equal(binv.pi1_involution, hom_identity(binv.pi1.grp)),
            "involution of the reduced universal form on " + name);
  }
}

void suite_coproduct_laws(Suite& s, const VerifyBounds& b) {
  if (b.max_order >= 4) {
    PreSquareGroup m = omega_plain(G("Z/2Z"));
    PreSquareGroup c = psg_combine(PsgCombine::Coproduct, m, m);
    s.check(psg_validate(c, 16).ok, "coproduct of universal forms is invalid");
    s.check(c.me.quotient == G("Z/2Z + Z/2Z"), "coproduct quotient");
    s.check(me_order(c) == 8, "coproduct order law on two copies");
    PsgInvariants cinv = psg_invariants(c);
    s.check(is_isomorphic(cinv.pi1.grp, G("Z/2Z + Z/2Z + Z/2Z")),
            "coproduct pi1 sum formula on two copies");

    Nil2Group s2 = odot_eval(2, m);
    s.check(s2.quotient.order() * s2.center_part.order() ==
                me_order(m) * me_order(m) * tensor(G("Z/2Z"), G("Z/2Z")).group.order(),
            "two-point smash order law");
  }

  const std::vector<std::tuple<std::string, std::string, Int>> pairs = {
      {"Z/2Z", "Z/3Z", 6}, {"Z/2Z", "Z/4Z", 8}, {"Z/3Z", "Z/3Z", 9}};
  for (const auto& [na, nb, bound] : pairs) {
    if (bound > b.max_order) continue;
    PreSquareGroup ma = omega_plain(G(na));
    PreSquareGroup mb = omega_plain(G(nb));
    PreSquareGroup cc = psg_combine(PsgCombine::Coproduct, ma, mb);
    std::string what = "coproduct of universal forms on (" + na + ", " + nb + ")";
    s.check(psg_validate(cc, 16).ok, what + " is invalid");
    Int cross = tensor(G(na), G(nb)).group.order();
    s.check(me_order(cc) == me_order(ma) * me_order(mb) * cross,
            what + ": order law fails");
    PsgInvariants ia = psg_invariants(ma);
    PsgInvariants ib = psg_invariants(mb);
    PsgInvariants ic = psg_invariants(cc);
    s.check(ic.pi0 == direct_sum({G(na), G(nb)}).group, what + ": pi0 formula");
    s.check(is_isomorphic(ic.pi1.grp,
                          direct_sum({ia.pi1.grp, ib.pi1.grp,
                                      tensor(G(na), G(nb)).group})
                              .group),
            what + ": pi1 formula");

    PreSquareGroup pp = psg_combine(PsgCombine::Product, ma, mb);
    PsgInvariants ip = psg_invariants(pp);
    s.check(psg_validate(pp, 16).ok &&
                ip.pi0 == direct_sum({G(na), G(nb)}).group &&
                is_isomorphic(ip.pi1.grp, direct_sum({ia.pi1.grp, ib.pi1.grp}).group),
            "product of universal forms on (" + na + ", " + nb + ")");
  }
}

void suite_lift_round_trips(Suite& s, const VerifyBounds& b) {
  std::vector<std::pair<std::string, SquareGroup>> qs;
  qs.emplace_back("the integral realizer", sg_znil());
  if (b.max_order >= 4)
    qs.emplace_back("the two-power realizer at 1", sg_two_power_cyclic(1));
  if (b.max_order >= 8)
    qs.emplace_back("the two-power realizer at 2", sg_two_power_cyclic(2));
  if (b.max_order >= 15)
    qs.emplace_back("the half-invertible realizer", sg_half_invertible(G("Z/15Z")));
  if (b.max_order >= 8)
    qs.emplace_back("the stable universal form",
                    sg_stable_universal(G("Z/2Z + Z/4Z")));
  if (b.max_order >= 4)
    qs.emplace_back("a product of realizers",
                    sg_combine(PsgCombine::Product, sg_znil(), sg_two_power_cyclic(1)));
  for (const auto& [name, q] : qs) {
    PreSquareGroup m = wp(q);
    Obstruction ob = lift_obstruction(m);
    s.check(ob.zero, "obstruction of " + name + " is not zero");
    LiftResult res = lift(m);
    if (res.status != LiftStatus::Lifted) {
      s.check(false, "lift of " + name + " did not produce a square group");
      continue;
    }
    s.check(psg_same(wp(*res.q), m), "lift of " + name + " changed the underlying data");
    AbHom alpha = alpha_defect(*res.q, q);
    s.check(hmaps_agree(sg_twist(*res.q, alpha), q),
            "twist defect does not recover " + name);
  }

  if (b.max_order >= 4) {
    LiftResult even = lift(omega_plain(G("Z/2Z")));
    bool good = even.status == LiftStatus::Obstructed && even.obstruction &&
                !even.obstruction->zero &&
                hom_is_zero(even.obstruction->value.pairing_component) &&
                !even.obstruction->value.ext_component.zero();
    s.check(good, "universal form on Z/2Z should be obstructed in the extension part");
  }
  if (b.max_order >= 3) {
    s.check(lift(omega_plain(G("Z/3Z"))).status == LiftStatus::Lifted,
            "universal form on Z/3Z should lift");
    OmegaLift ol = lift_omega(G("Z/3Z"));
    s.check(ol.ok && ol.q && sg_validate(*ol.q, 8).ok,
            "corrected universal lift fails on Z/3Z");
  }
  {
    OmegaLift oz = lift_omega(G("Z"));
    s.check(oz.ok && oz.q && psg_same(wp(*oz.q), wp(sg_znil())) &&
                hom_is_zero(alpha_defect(*oz.q, sg_znil())),
            "corrected universal lift on Z does not match the integral realizer");
  }
  if (b.max_order >= 2) {
    OmegaLift bad = lift_omega(G("Z/2Z"));
    s.check(!bad.ok && !bad.theta.zero(),
            "universal lift on Z/2Z should fail with a nonzero theta certificate");
  }
}

void suite_stable_quotients(Suite& s, const VerifyBounds& b) {
  {
    SquareGroup z = sg_znil();
    SquareGroup zu = sg_underline(z);
    s.check(zu.qee == G("Z/2Z") && sg_validate(zu).ok,
            "stable quotient of the integral realizer");
    s.check(hom_equal(wp(zu).sigma, hom_identity(zu.qee)),
            "stable quotient involution on the integral realizer");
    s.check(psg_same(wp(sg_underline(zu)), wp(zu)),
            "stable quotient is not idempotent on the integral realizer");
  }
  if (b.max_order >= 4) {
    SquareGroup q1 = sg_two_power_cyclic(1);
    SquareGroup u1 = sg_underline(q1);
    s.check(psg_same(wp(u1), wp(q1)) && hmaps_agree(u1, q1),
            "the two-power realizer at 1 should be stable already");
  }
  if (b.max_order >= 8) {
    SquareGroup u2 = sg_underline(sg_two_power_cyclic(2));
    s.check(u2.qee == G("Z/2Z") && sg_validate(u2).ok,
            "stable quotient of the two-power realizer at 2");
    SquareGroup su = sg_stable_universal(G("Z/2Z + Z/4Z"));
    SquareGroup suu = sg_underline(su);
    s.check(psg_same(wp(suu), wp(su)) && hmaps_agree(suu, su),
            "the stable universal form should be stable already");
  }
}

void suite_flat_realization(Suite& s, const VerifyBounds& b) {
  struct Case {
    std::string name;
    FgAbGroup a;
    FgAbGroup bgrp;
    AbHom k;
    Int order;
  };
  std::vector<Case> cases;
  {
    FgAbGroup a = G("Z/2Z");
    FunctorValue gm = quad_value(Functor::Gamma, a);
    cases.push_back({"mod-two invariant on Z/2Z", a, G("Z/2Z"),
                     hom_from_cols(gm.group, G("Z/2Z"), {Vec{1}}), 2});
  }
  for (const char* name : {"Z/3Z", "Z/6Z"}) {
    FgAbGroup a = G(name);
    cases.push_back({std::string("reduced projection on ") + name, a,
                     quad_value(Functor::Psi, a).group,
                     nat_map(NatMapName::TauPrime, a), a.order()});
  }
  for (const Case& c : cases) {
    if (c.order > b.max_order) continue;
    KTriple t{2, c.a, c.bgrp, hom_neg(hom_identity(c.bgrp)), c.k};
    SgRealization r = realize_sg(t, RealizeMode::Flat23);
    if (!r.ok || !r.q) {
      s.check(false, "flat realization failed for " + c.name);
      continue;
    }
    SgCheck chk = sg_validate(*r.q, 8);
    s.check(chk.ok, "flat realization for " + c.name + " is invalid: " + chk.violation);
    s.check(r.q->qe.quotient == c.a, "flat realization quotient for " + c.name);
    PsgInvariants inv = psg_invariants(wp(*r.q));
    s.check(carried_by_iso(inv.pi1.grp, c.bgrp, inv.k, c.k),
            "flat realization misses the kernel invariant for " + c.name);
  }
  {
    FgAbGroup a = G("Z");
    FunctorValue gm = quad_value(Functor::Gamma, a);
    KTriple t{2, a, G("Z"), hom_neg(hom_identity(G("Z"))),
              hom_from_cols(gm.group, G("Z"), {Vec{1}})};
    SgRealization r = realize_sg(t, RealizeMode::Flat23);
    s.check(r.ok && r.q && r.q->qe.quotient == a,
            "flat realization failed on the free line");
  }
}

void suite_stable_realization(Suite& s, const VerifyBounds& b) {
  struct Case {
    std::string name;
    FgAbGroup a;
    FgAbGroup bgrp;
    std::vector<Vec> kcols;
    Int order;
  };
  const std::vector<Case> cases = {
      {"identity invariant on Z/2Z", G("Z/2Z"), G("Z/2Z"), {Vec{1}}, 2},
      {"rank-two source", G("Z/2Z + Z/4Z"), G("Z/2Z"), {Vec{1}, Vec{1}}, 8},
      {"zero invariant on Z/4Z", G("Z/4Z"), G("Z/2Z"), {Vec{0}}, 4},
  };
  for (const Case& c : cases) {
    if (c.order > b.max_order) continue;
    TensorGroup t2 = tensor(G("Z/2Z"), c.a);
    AbHom k = hom_from_cols(t2.group, c.bgrp, c.kcols);
    KTriple t{4, c.a, c.bgrp, hom_identity(c.bgrp), k};
    SgRealization r = realize_sg(t, RealizeMode::Stable);
    if (!r.ok || !r.q) {
      s.check(false, "stable realization failed for " + c.name);
      continue;
    }
    s.check(sg_validate(*r.q, 8).ok, "stable realization for " + c.name + " is invalid");
    s.check(r.q->qe.quotient == c.a, "stable realization quotient for " + c.name);
    PsgInvariants inv = psg_invariants(wp(*r.q));
    s.check(hom_equal(inv.pi1_involution, hom_identity(inv.pi1.grp)),
            "stable realization involution for " + c.name);
    QComplex qc = q_complex_homology(wp(*r.q));
    s.check(carried_by_iso(qc.pi1_bar, c.bgrp, qc.k_bar, k),
            "stable realization misses the kernel invariant for " + c.name);
  }
}

void suite_degree_realizers(Suite& s, const VerifyBounds& b) {
  {
    SquareGroup z = sg_znil();
    PsgInvariants inv = psg_invariants(wp(z));
    s.check(hom_equal(delta(z), hom_identity(inv.pi1.grp)),
            "degree map of the integral realizer is not the identity");
  }
  if (b.max_order >= 15) {
    SquareGroup h = sg_half_invertible(G("Z/15Z"));
    PsgInvariants inv = psg_invariants(wp(h));
    s.check(hom_equal(delta(h), hom_identity(inv.pi1.grp)),
            "degree map of the half-invertible realizer is not the identity");
  }
  if (b.max_order >= 4) {
    SquareGroup q = sg_two_power_cyclic(1);
    PsgInvariants inv = psg_invariants(wp(q));
    AbHom incl = include_hom(inv.pi1);
    s.check(hom_equal(delta(q), hom_identity(inv.pi1.grp)) &&
                is_zero(q.qee, sub(q.qee, incl.apply(unit_of(inv.pi1.grp, 0)), Vec{2})),
            "degree data of the two-power realizer at 1");
  }
  if (b.max_order >= 8) {
    SquareGroup q = sg_two_power_cyclic(2);
    PreSquareGroup m = wp(q);
    PsgInvariants inv = psg_invariants(m);
    AbHom incl = include_hom(inv.pi1);
    for (const Vec& av : {Vec{1}, Vec{2}, Vec{5}}) {
      AbHom alpha = hom_from_cols(q.qe.quotient, q.qee, {av});
      if (!hom_well_defined(alpha)) continue;
      SquareGroup tw = sg_twist(q, alpha);
      AbHom lhs = compose(incl, delta(tw));
      AbHom rhs = hom_add(compose(incl, delta(q)),
                          compose(hom_sub(m.sigma, hom_identity(m.mee)), alpha));
      s.check(hom_equal(lhs, rhs),
              "degree map does not shift by the twist " + int_str(av[0]));
    }
  }

  struct Case {
    std::string name;
    FgAbGroup a;
    FgAbGroup bgrp;
    std::vector<Vec> cols;
    Int order;
  };
  const std::vector<Case> cases = {
      {"identity on Z/4Z", G("Z/4Z"), G("Z/4Z"), {Vec{1}}, 4},
      {"projection Z/6Z to Z/3Z", G("Z/6Z"), G("Z/3Z"), {Vec{1}}, 6},
      {"doubling on Z/15Z", G("Z/15Z"), G("Z/15Z"), {Vec{2}}, 15},
      {"fold of the plane onto Z/2Z", G("Z^2"), G("Z/2Z"), {Vec{1}, Vec{1}}, 2},
      {"unit from the trivial group", G("0"), G("Z/3Z"), {}, 3},
  };
  for (const Case& c : cases) {
    if (c.order > b.max_order) continue;
    AbHom f = hom_from_cols(c.a, c.bgrp, c.cols);
    SgRealization r = realize_delta(f);
    if (!r.ok || !r.q) {
      s.check(false, "degree realization failed for " + c.name);
      continue;
    }
    s.check(sg_validate(*r.q, 8).ok && r.q->qe.quotient == c.a,
            "degree realization data for " + c.name);
    PsgInvariants inv = psg_invariants(wp(*r.q));
    s.check(is_isomorphic(inv.pi1.grp, c.bgrp),
            "degree realization kernel for " + c.name);
    s.check(carried_by_iso(inv.pi1.grp, c.bgrp, delta(*r.q), f),
            "degree realization misses the map for " + c.name);
  }
}

}  // namespace

VerifyReport verify_all(const VerifyBounds& bounds) {
  SQG_INPUT_CHECK(bounds.max_order > 0, "max order must be positive");
  const bool mutate = std::getenv("SQG_VERIFY_MUTATE") != nullptr;

  const std::vector<
      std::pair<std::string, std::function<void(Suite&, const VerifyBounds&)>>>
      suites = {
          {"functor-tables",
           [&](Suite& s, const VerifyBounds& b) { suite_functor_tables(s, b, mutate); }},
          {"functor-cross-effects", suite_cross_effects},
          {"exact-sequences", suite_exact_sequences},
          {"oracle-agreement", suite_oracle_agreement},
          {"theta-classification", suite_theta},
          {"cocycle-class-round-trip", suite_h2_round_trip},
          {"omega-invariants", suite_omega_invariants},
          {"coproduct-laws", suite_coproduct_laws},
          {"lift-round-trips", suite_lift_round_trips},
          {"stable-quotients", suite_stable_quotients},
          {"flat-realization", suite_flat_realization},
          {"stable-realization", suite_stable_realization},
          {"degree-realizers", suite_degree_realizers},
      };

  VerifyReport report;
  for (const auto& [anchor, fn] : suites) {
    Suite s;
    fn(s, bounds);
    VerifyLine line;
    line.anchor = anchor;
    line.ok = s.failed == 0;
    line.detail = line.ok ? std::to_string(s.checks) + " checks"
                          : s.first + " [" + std::to_string(s.failed) + "/" +
                                std::to_string(s.checks) + " failed]";
    report.all_ok = report.all_ok && line.ok;
    report.lines.push_back(std::move(line));
  }
  return report;
}

std::string format_report(const VerifyReport& report) {
  std::string out;
  for (const VerifyLine& line : report.lines) {
    out += line.ok ? "ok   " : "FAIL ";
    out += line.anchor;
    out += ": ";
    out += line.detail;
    out += "\n";
  }
  out += report.all_ok ? "all suites passed\n" : "some suites FAILED\n";
  return out;
}

}  // namespace sqg
