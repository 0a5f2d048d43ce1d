#include "sqg/psg.hpp"

#include <functional>
#include <utility>

namespace sqg {

namespace {

PsgCheck fail(const std::string& msg) { return PsgCheck{false, msg}; }

Vec bilinear_form_eval(const FgAbGroup& q, const FgAbGroup& dst,
                       const std::vector<std::vector<Vec>>& form, const Vec& x,
                       const Vec& y) {
  Vec xr = reduce(q, x), yr = reduce(q, y);
  Vec acc = zero_of(dst);
  for (size_t i = 0; i < q.ngens(); ++i) {
    if (xr[i] == 0) continue;
    for (size_t j = 0; j < q.ngens(); ++j) {
      if (yr[j] == 0) continue;
      acc = add(dst, acc, smul(dst, xr[i] * yr[j], form[i][j]));
    }
  }
  return acc;
}

std::string check_form(const FgAbGroup& q, const FgAbGroup& dst,
                       const std::vector<std::vector<Vec>>& form) {
  if (form.size() != q.ngens()) return "form has the wrong number of rows";
  for (const auto& row : form) {
    if (row.size() != q.ngens()) return "form has the wrong number of columns";
    for (const Vec& v : row)
      if (v.size() != dst.ngens()) return "form value has the wrong length";
  }
  for (size_t i = 0; i < q.ngens(); ++i)
    for (size_t j = 0; j < q.ngens(); ++j) {
      if (q.fac[i] != 0 && !is_zero(dst, smul(dst, q.fac[i], form[i][j])))
        return "form does not descend in the first slot";
      if (q.fac[j] != 0 && !is_zero(dst, smul(dst, q.fac[j], form[i][j])))
        return "form does not descend in the second slot";
    }
  return "";
}

// Cocycle of the e-part assembled from its cohomology class, so structured
// data comes out even over an infinite quotient. The class is read off
// pointwise: generator antisymmetrizations give the commutator pairing and
// the cyclic sums give the restriction classes.
Cocycle cocycle_from_function(const FgAbGroup& q, const FgAbGroup& c,
                              const std::function<Vec(const Vec&, const Vec&)>& f) {
  FunctorValue l2 = quad_value(Functor::Lambda2, q);
  std::vector<Vec> img;
  for (const StructGen& g : l2.sgens)
    img.push_back(sub(c, f(unit_of(q, g.i), unit_of(q, g.j)),
                      f(unit_of(q, g.j), unit_of(q, g.i))));
  AbHom pairing = hom_on_struct_gens(l2, c, img);
  SQG_LOGIC_CHECK(hom_well_defined(pairing), "commutator pairing is not well defined");

  ExtGroup e = ext_group(q, c);
  std::vector<Vec> cls(q.ngens(), zero_of(c));
  for (size_t i = 0; i < q.ngens(); ++i) {
    if (q.fac[i] == 0) continue;
    Vec ei = unit_of(q, i);
    Vec acc = zero_of(c);
    for (Int k = 0; k < q.fac[i]; ++k) acc = add(c, acc, f(smul(q, k, ei), ei));
    cls[i] = acc;
  }
  ExtClass ext{e, e.from_classification(cls)};
  return class_to_cocycle(H2Class{std::move(ext), std::move(pairing)});
}

}  // namespace

Vec PreSquareGroup::bracket_eval(const Vec& x, const Vec& y) const {
  return bilinear_form_eval(me.quotient, mee, bracket, x, y);
}

Vec Bcg::brace_eval(const Vec& x, const Vec& y) const {
  return bilinear_form_eval(ce.quotient, cee, brace, x, y);
}

PsgCheck psg_validate(const PreSquareGroup& m, const Int& exhaustive_bound) {
  const FgAbGroup& q = m.me.quotient;
  const FgAbGroup& cc = m.me.center_part;
  if (!nil2_validate(m.me)) return fail("e-part data is not a valid extension");
  if (m.sigma.src != m.mee || m.sigma.dst != m.mee)
    return fail("sigma is not an endomorphism of the ee-part");
  if (!hom_well_defined(m.sigma)) return fail("sigma is not well defined");
  if (m.p.src != m.mee || m.p.dst != cc)
    return fail("P does not map the ee-part to the center part");
  if (!hom_well_defined(m.p)) return fail("P is not well defined");
  if (!hom_cokernel(m.p).grp.is_trivial())
    return fail("P is not onto the stored center part");
  if (!hom_equal(compose(m.sigma, m.sigma), hom_identity(m.mee)))
    return fail("sigma is not an involution");
  if (!hom_equal(compose(m.p, m.sigma), m.p)) return fail("P sigma differs from P");

  std::string shape = check_form(q, m.mee, m.bracket);
  if (!shape.empty()) return fail("bracket " + shape);

  const size_t nq = q.ngens();
  for (size_t i = 0; i < nq; ++i)
    for (size_t j = 0; j < nq; ++j) {
      if (!is_zero(m.mee, add(m.mee, m.sigma.apply(m.bracket[i][j]), m.bracket[j][i])))
        return fail("sigma{x,y} + {y,x} is nonzero on generators");
      Nil2El a = nil2_el(m.me, unit_of(q, i), zero_of(cc));
      Nil2El b = nil2_el(m.me, unit_of(q, j), zero_of(cc));
      Nil2El comm = nil2_commutator(m.me, a, b);
      if (!is_zero(q, comm.q)) return fail("commutators do not vanish in the quotient");
      if (reduce(cc, m.p.apply(m.bracket[i][j])) != reduce(cc, comm.c))
        return fail("P{x,y} differs from the commutator on generators");
    }

  if (exhaustive_bound > 0 && q.is_finite() && q.order() <= exhaustive_bound) {
    std::vector<Vec> elems = all_elements(q);
    Vec c0 = zero_of(cc);
    for (const Vec& x : elems)
      for (const Vec& y : elems) {
        Vec br = m.bracket_eval(x, y);
        if (!is_zero(m.mee, add(m.mee, m.sigma.apply(br), m.bracket_eval(y, x))))
          return fail("sigma{x,y} + {y,x} is nonzero");
        Nil2El comm =
            nil2_commutator(m.me, nil2_el(m.me, x, c0), nil2_el(m.me, y, c0));
        if (!is_zero(q, comm.q) || reduce(cc, m.p.apply(br)) != reduce(cc, comm.c))
          return fail("P{x,y} differs from the commutator");
      }
  }
  return PsgCheck{};
}

PsgInvariants psg_invariants(const PreSquareGroup& m) {
  PsgCheck chk = psg_validate(m, 0);
  SQG_DOMAIN_CHECK(chk.ok, "not a presquare group: " + chk.violation);

  PsgInvariants out;
  out.pi0 = m.me.quotient;
  out.pi1 = hom_kernel(m.p);
  const size_t npi1 = out.pi1.grp.ngens();

  std::vector<Vec> icols;
  for (size_t i = 0; i < npi1; ++i) {
    Vec a = out.pi1.include(unit_of(out.pi1.grp, i));
    std::optional<Vec> c = out.pi1.coords_of(m.sigma.apply(a));
    SQG_LOGIC_CHECK(c.has_value(), "sigma does not preserve the kernel of P");
    icols.push_back(*c);
  }
  out.pi1_involution = hom_from_cols(out.pi1.grp, out.pi1.grp, icols);
  SQG_LOGIC_CHECK(hom_well_defined(out.pi1_involution),
                  "restricted involution is not well defined");

  AbHom splus = hom_add(m.sigma, hom_identity(m.mee));
  out.pi1_minus = hom_kernel(compose(splus, subgroup_inclusion(out.pi1))).grp;

  FunctorValue gm = quad_value(Functor::Gamma, out.pi0);
  std::vector<Vec> kimg;
  for (const StructGen& g : gm.sgens) {
    Vec v = g.kind == GenKind::Diag
                ? m.bracket[g.i][g.i]
                : add(m.mee, m.bracket[g.i][g.j], m.bracket[g.j][g.i]);
    std::optional<Vec> c = out.pi1.coords_of(v);
    SQG_LOGIC_CHECK(c.has_value(), "k does not land in the kernel of P");
    kimg.push_back(*c);
  }
  out.k = hom_on_struct_gens(gm, out.pi1.grp, kimg);
  SQG_LOGIC_CHECK(hom_well_defined(out.k), "k is not well defined");

  out.is_psg0 = true;
  for (size_t i = 0; i < npi1 && out.is_psg0; ++i) {
    Vec a = out.pi1.include(unit_of(out.pi1.grp, i));
    if (!is_zero(m.mee, add(m.mee, m.sigma.apply(a), a))) out.is_psg0 = false;
  }
  out.is_psgs = hom_equal(m.sigma, hom_identity(m.mee));
  out.is_flat = hom_is_zero(compose(out.k, nat_map(NatMapName::Iota, out.pi0)));
  return out;
}

QComplex q_complex_homology(const PreSquareGroup& m) {
  PsgCheck chk = psg_validate(m, 0);
  SQG_DOMAIN_CHECK(chk.ok, "not a presquare group: " + chk.violation);

  QComplex out;
  const size_t nq = m.me.quotient.ngens();
  AbHom id = hom_identity(m.mee);
  AbHom sminus = hom_sub(id, m.sigma);
  AbHom splus = hom_add(id, m.sigma);
  QuotientMap co = hom_cokernel(sminus);
  AbHom proj = quotient_projection(co);

  AbHom pbar = compose(m.p, quotient_section(co));
  SQG_LOGIC_CHECK(hom_well_defined(pbar), "P does not descend to the coinvariants");
  SQG_LOGIC_CHECK(hom_equal(compose(pbar, proj), m.p),
                  "descended P disagrees with P");

  out.pi1_bar_sub = hom_kernel(pbar);
  out.pi1_bar = out.pi1_bar_sub.grp;

  TensorGroup t2 = tensor(cyclic(2), m.me.quotient);
  std::vector<Vec> kimg(nq);
  for (size_t i = 0; i < nq; ++i) {
    std::optional<Vec> c = out.pi1_bar_sub.coords_of(co.project(m.bracket[i][i]));
    SQG_LOGIC_CHECK(c.has_value(), "k_bar does not land in the kernel");
    kimg[t2.sidx(0, i)] = *c;
  }
  out.k_bar = hom_from_struct(t2.group, t2.proj, t2.lift, out.pi1_bar, kimg);

  PreSquareGroup um;
  um.me = m.me;
  um.mee = co.grp;
  um.sigma = hom_identity(co.grp);
  um.p = pbar;
  um.bracket.assign(nq, std::vector<Vec>(nq));
  for (size_t i = 0; i < nq; ++i)
    for (size_t j = 0; j < nq; ++j) um.bracket[i][j] = co.project(m.bracket[i][j]);
  PsgCheck uchk = psg_validate(um, 0);
  SQG_LOGIC_CHECK(uchk.ok, "coinvariant form is not a presquare group");
  out.underline_m = std::move(um);

  Subgroup pi1 = hom_kernel(m.p);
  std::vector<Vec> ecols;
  for (size_t i = 0; i < pi1.grp.ngens(); ++i) {
    Vec a = pi1.include(unit_of(pi1.grp, i));
    std::optional<Vec> c = out.pi1_bar_sub.coords_of(co.project(a));
    SQG_LOGIC_CHECK(c.has_value(), "kernel classes leave the descended kernel");
    ecols.push_back(*c);
  }
  out.epsilon = hom_from_cols(pi1.grp, out.pi1_bar, ecols);
  SQG_LOGIC_CHECK(hom_well_defined(out.epsilon), "epsilon is not well defined");

  auto tail_homology = [&](const AbHom& ker_of, const AbHom& im_of) {
    Subgroup kk = hom_kernel(ker_of);
    std::vector<Vec> cols;
    for (size_t i = 0; i < m.mee.ngens(); ++i) {
      std::optional<Vec> c = kk.coords_of(im_of.apply(unit_of(m.mee, i)));
      SQG_LOGIC_CHECK(c.has_value(), "tail differentials do not compose to zero");
      cols.push_back(*c);
    }
    AbHom g = hom_from_cols(m.mee, kk.grp, cols);
    SQG_LOGIC_CHECK(hom_well_defined(g), "tail comparison map is not well defined");
    return hom_cokernel(g).grp;
  };
  out.h_even = tail_homology(sminus, splus);
  out.h_odd = tail_homology(splus, sminus);
  return out;
}

PreSquareGroup psg_combine(PsgCombine kind, const PreSquareGroup& m,
                           const PreSquareGroup& n) {
  PsgCheck cm = psg_validate(m, 0), cn = psg_validate(n, 0);
  SQG_DOMAIN_CHECK(cm.ok, "left operand: " + cm.violation);
  SQG_DOMAIN_CHECK(cn.ok, "right operand: " + cn.violation);

  const FgAbGroup& qm = m.me.quotient;
  const FgAbGroup& qn = n.me.quotient;
  DirectSum dq = direct_sum({qm, qn});
  const size_t nq = dq.group.ngens();

  PreSquareGroup out;
  if (kind == PsgCombine::Product) {
    DirectSum dc = direct_sum({m.me.center_part, n.me.center_part});
    DirectSum de = direct_sum({m.mee, n.mee});
    auto f = [&](const Vec& x, const Vec& y) {
      Vec xm = dq.proj[0].apply(x), ym = dq.proj[0].apply(y);
      Vec xn = dq.proj[1].apply(x), yn = dq.proj[1].apply(y);
      return add(dc.group, dc.inj[0].apply(m.me.f.eval(xm, ym)),
                 dc.inj[1].apply(n.me.f.eval(xn, yn)));
    };
    out.me = nil2_group(dq.group, dc.group,
                        cocycle_from_function(dq.group, dc.group, f));
    out.mee = de.group;
    out.sigma = hom_direct_sum(m.sigma, n.sigma);
    out.p = hom_add(compose(dc.inj[0], compose(m.p, de.proj[0])),
                    compose(dc.inj[1], compose(n.p, de.proj[1])));
    out.bracket.assign(nq, std::vector<Vec>(nq));
    for (size_t i = 0; i < nq; ++i)
      for (size_t j = 0; j < nq; ++j) {
        Vec gi = unit_of(dq.group, i), gj = unit_of(dq.group, j);
        Vec vm = m.bracket_eval(dq.proj[0].apply(gi), dq.proj[0].apply(gj));
        Vec vn = n.bracket_eval(dq.proj[1].apply(gi), dq.proj[1].apply(gj));
        out.bracket[i][j] =
            add(de.group, de.inj[0].apply(vm), de.inj[1].apply(vn));
      }
  } else {
    TensorGroup tmn = tensor(qm, qn);
    TensorGroup tnm = tensor(qn, qm);
    DirectSum dc = direct_sum({m.me.center_part, n.me.center_part, tmn.group});
    DirectSum de = direct_sum({m.mee, n.mee, tmn.group, tnm.group});
    auto f = [&](const Vec& x, const Vec& y) {
      Vec xm = dq.proj[0].apply(x), ym = dq.proj[0].apply(y);
      Vec xn = dq.proj[1].apply(x), yn = dq.proj[1].apply(y);
      Vec v = add(dc.group, dc.inj[0].apply(m.me.f.eval(xm, ym)),
                  dc.inj[1].apply(n.me.f.eval(xn, yn)));
      return add(dc.group, v, dc.inj[2].apply(tmn.pair(xm, yn)));
    };
    out.me = nil2_group(dq.group, dc.group,
                        cocycle_from_function(dq.group, dc.group, f));
    out.mee = de.group;
    AbHom swap_nm = hom_neg(tensor_swap(tnm, tmn));
    AbHom swap_mn = hom_neg(tensor_swap(tmn, tnm));
    out.sigma = hom_add(
        hom_add(compose(de.inj[0], compose(m.sigma, de.proj[0])),
                compose(de.inj[1], compose(n.sigma, de.proj[1]))),
        hom_add(compose(de.inj[2], compose(swap_nm, de.proj[3])),
                compose(de.inj[3], compose(swap_mn, de.proj[2]))));
    out.p = hom_add(
        hom_add(compose(dc.inj[0], compose(m.p, de.proj[0])),
                compose(dc.inj[1], compose(n.p, de.proj[1]))),
        hom_add(compose(dc.inj[2], de.proj[2]),
                compose(dc.inj[2], compose(swap_nm, de.proj[3]))));
    out.bracket.assign(nq, std::vector<Vec>(nq));
    for (size_t i = 0; i < nq; ++i)
      for (size_t j = 0; j < nq; ++j) {
        Vec gi = unit_of(dq.group, i), gj = unit_of(dq.group, j);
        Vec gim = dq.proj[0].apply(gi), gjm = dq.proj[0].apply(gj);
        Vec gin = dq.proj[1].apply(gi), gjn = dq.proj[1].apply(gj);
        Vec v = add(de.group, de.inj[0].apply(m.bracket_eval(gim, gjm)),
                    de.inj[1].apply(n.bracket_eval(gin, gjn)));
        v = add(de.group, v, de.inj[2].apply(tmn.pair(gim, gjn)));
        out.bracket[i][j] = add(de.group, v, de.inj[3].apply(tnm.pair(gin, gjm)));
      }
  }

  PsgCheck res = psg_validate(out, 0);
  SQG_LOGIC_CHECK(res.ok, "combined presquare group is invalid: " + res.violation);
  return out;
}

PsgPushforward psg_pushforward_map(const PreSquareGroup& m, const AbHom& f,
                                   const AbHom& involution) {
  PsgInvariants inv = psg_invariants(m);
  SQG_DOMAIN_CHECK(f.src == inv.pi1.grp, "map must start on the kernel of P");
  SQG_DOMAIN_CHECK(involution.src == f.dst && involution.dst == f.dst,
                   "involution must act on the pushforward target");
  SQG_DOMAIN_CHECK(hom_well_defined(f), "map is not well defined");
  SQG_DOMAIN_CHECK(hom_well_defined(involution), "involution is not well defined");
  SQG_DOMAIN_CHECK(
      hom_equal(compose(involution, involution), hom_identity(f.dst)),
      "involution must square to the identity");
  SQG_DOMAIN_CHECK(hom_equal(compose(f, inv.pi1_involution), compose(involution, f)),
                   "map must intertwine the involutions");

  DirectSum ds = direct_sum({f.dst, m.mee});
  std::vector<Vec> rels;
  for (size_t i = 0; i < inv.pi1.grp.ngens(); ++i) {
    Vec z = unit_of(inv.pi1.grp, i);
    rels.push_back(sub(ds.group, ds.inj[0].apply(f.apply(z)),
                       ds.inj[1].apply(inv.pi1.include(z))));
  }
  AbHom relmap = hom_from_cols(inv.pi1.grp, ds.group, rels);
  SQG_LOGIC_CHECK(hom_well_defined(relmap), "pushout relations are not well defined");
  QuotientMap qm = hom_cokernel(relmap);
  AbHom proj = quotient_projection(qm);
  AbHom lift = quotient_section(qm);

  PreSquareGroup out;
  out.me = m.me;
  out.mee = qm.grp;
  AbHom block = hom_direct_sum(involution, m.sigma);
  out.sigma = compose(proj, compose(block, lift));
  SQG_LOGIC_CHECK(hom_well_defined(out.sigma), "involution does not survive the pushout");
  SQG_LOGIC_CHECK(hom_equal(compose(out.sigma, proj), compose(proj, block)),
                  "involution does not descend to the pushout");
  out.p = compose(compose(m.p, ds.proj[1]), lift);
  SQG_LOGIC_CHECK(hom_well_defined(out.p), "P does not survive the pushout");
  SQG_LOGIC_CHECK(hom_equal(compose(out.p, proj), compose(m.p, ds.proj[1])),
                  "P does not descend to the pushout");

  const size_t nq = m.me.quotient.ngens();
  out.bracket.assign(nq, std::vector<Vec>(nq));
  for (size_t i = 0; i < nq; ++i)
    for (size_t j = 0; j < nq; ++j)
      out.bracket[i][j] = proj.apply(ds.inj[1].apply(m.bracket[i][j]));

  PsgCheck res = psg_validate(out, 0);
  SQG_LOGIC_CHECK(res.ok, "pushforward is invalid: " + res.violation);
  return PsgPushforward{std::move(out), compose(proj, ds.inj[1]),
                        compose(proj, ds.inj[0])};
}

PreSquareGroup psg_pushforward(const PreSquareGroup& m, const AbHom& f,
                               const AbHom& involution) {
  return psg_pushforward_map(m, f, involution).m;
}

PreSquareGroup omega(const CentralExtension& n, OmegaVariant variant) {
  const FgAbGroup& a = n.base;
  FunctorValue l2 = quad_value(Functor::Lambda2, a);
  SQG_DOMAIN_CHECK(n.total.quotient == a, "extension base mismatch");
  SQG_DOMAIN_CHECK(n.total.center_part == l2.group,
                   "extension kernel must be the exterior square of the base");
  SQG_DOMAIN_CHECK(hom_equal(n.kernel_inclusion, hom_identity(l2.group)),
                   "kernel inclusion must be the identity");
  SQG_DOMAIN_CHECK(nil2_validate(n.total), "extension data is invalid");
  H2Class h = h2_split(n.total.f);
  SQG_DOMAIN_CHECK(hom_equal(h.pairing_component, hom_identity(l2.group)),
                   "commutator pairing must be the identity");

  const size_t na = a.ngens();
  PreSquareGroup out;
  out.me = n.total;
  out.bracket.assign(na, std::vector<Vec>(na));
  if (variant == OmegaVariant::Plain) {
    TensorGroup t = tensor(a, a);
    out.mee = t.group;
    out.sigma = hom_neg(tensor_swap(t, t));
    std::vector<Vec> img(na * na);
    for (size_t i = 0; i < na; ++i)
      for (size_t j = 0; j < na; ++j)
        img[t.sidx(i, j)] = eval_pair(l2, unit_of(a, i), unit_of(a, j));
    out.p = hom_from_struct(t.group, t.proj, t.lift, l2.group, img);
    for (size_t i = 0; i < na; ++i)
      for (size_t j = 0; j < na; ++j) out.bracket[i][j] = t.gen(i, j);
  } else {
    FunctorValue lt = quad_value(Functor::LambdaTilde2, a);
    out.mee = lt.group;
    out.sigma = hom_identity(lt.group);
    std::vector<Vec> img;
    for (const StructGen& g : lt.sgens)
      img.push_back(g.kind == GenKind::Diag
                        ? zero_of(l2.group)
                        : eval_pair(l2, unit_of(a, g.i), unit_of(a, g.j)));
    out.p = hom_on_struct_gens(lt, l2.group, img);
    SQG_LOGIC_CHECK(hom_well_defined(out.p), "wedge projection is not well defined");
    for (size_t i = 0; i < na; ++i)
      for (size_t j = 0; j < na; ++j)
        out.bracket[i][j] = eval_pair(lt, unit_of(a, i), unit_of(a, j));
  }

  PsgCheck res = psg_validate(out, 0);
  SQG_LOGIC_CHECK(res.ok, "universal form is invalid: " + res.violation);
  return out;
}

PreSquareGroup realize_psg(const KTriple& target, RealizeMode mode) {
  const FgAbGroup& a = target.pi_n;
  SQG_DOMAIN_CHECK(target.k.dst == target.pi_n1, "k must land in the next homotopy group");
  SQG_DOMAIN_CHECK(
      target.involution.src == target.pi_n1 && target.involution.dst == target.pi_n1,
      "involution must act on the next homotopy group");
  SQG_DOMAIN_CHECK(hom_well_defined(target.k), "k is not well defined");
  SQG_DOMAIN_CHECK(hom_well_defined(target.involution), "involution is not well defined");
  SQG_DOMAIN_CHECK(
      hom_equal(compose(target.involution, target.involution),
                hom_identity(target.pi_n1)),
      "involution must square to the identity");

  if (mode == RealizeMode::Flat23) {
    SQG_DOMAIN_CHECK(target.n == 2, "flat realization expects degree two data");
    FunctorValue gm = quad_value(Functor::Gamma, a);
    SQG_DOMAIN_CHECK(target.k.src == gm.group, "k must start on the divided square");
    SQG_DOMAIN_CHECK(hom_equal(compose(target.involution, target.k), hom_neg(target.k)),
                     "k must land in the minus part of the involution");
    AbHom iota = nat_map(NatMapName::Iota, a);
    SQG_DOMAIN_CHECK(hom_is_zero(compose(target.k, iota)), "k is not flat");

    PreSquareGroup m0 = omega(canonical_TA(a), OmegaVariant::Plain);
    PsgInvariants inv0 = psg_invariants(m0);

    // the kernel of A (x) A -> A ^ A is the symmetric part
    FunctorValue ps = quad_value(Functor::Psi, a);
    TensorGroup t = tensor(a, a);
    std::vector<Vec> cols;
    for (const StructGen& g : ps.sgens) {
      Vec v = g.kind == GenKind::Diag
                  ? t.gen(g.i, g.i)
                  : add(t.group, t.gen(g.i, g.j), t.gen(g.j, g.i));
      std::optional<Vec> c = inv0.pi1.coords_of(v);
      SQG_LOGIC_CHECK(c.has_value(), "symmetric part is not killed by the wedge map");
      cols.push_back(*c);
    }
    AbHom iso = hom_on_struct_gens(ps, inv0.pi1.grp, cols);
    SQG_LOGIC_CHECK(hom_well_defined(iso), "symmetric comparison is not well defined");
    AbHom iso_inv = hom_inverse(iso);

    AbHom tau_prime = nat_map(NatMapName::TauPrime, a);
    std::vector<Vec> kcols;
    for (size_t i = 0; i < ps.group.ngens(); ++i) {
      std::optional<Vec> pre = hom_solve(tau_prime, unit_of(ps.group, i));
      SQG_LOGIC_CHECK(pre.has_value(), "symmetrization is not surjective");
      kcols.push_back(target.k.apply(*pre));
    }
    AbHom kprime = hom_from_cols(ps.group, target.pi_n1, kcols);
    SQG_LOGIC_CHECK(hom_well_defined(kprime), "k does not factor through the quotient");
    SQG_LOGIC_CHECK(hom_equal(compose(kprime, tau_prime), target.k),
                    "factorization disagrees with k");

    return psg_pushforward(m0, compose(kprime, iso_inv), target.involution);
  }

  SQG_DOMAIN_CHECK(target.n >= 3, "stable realization expects degree three or higher");
  TensorGroup t2 = tensor(cyclic(2), a);
  SQG_DOMAIN_CHECK(target.k.src == t2.group, "k must start on the mod-two reduction");
  SQG_DOMAIN_CHECK(hom_equal(target.involution, hom_identity(target.pi_n1)),
                   "stable involution must be the identity");

  PreSquareGroup m0 = omega(canonical_TA(a), OmegaVariant::Bar);
  PsgInvariants inv0 = psg_invariants(m0);
  FunctorValue lt = quad_value(Functor::LambdaTilde2, a);
  std::vector<Vec> img(a.ngens());
  for (size_t i = 0; i < a.ngens(); ++i) {
    std::optional<Vec> c = inv0.pi1.coords_of(eval_quad(lt, unit_of(a, i)));
    SQG_LOGIC_CHECK(c.has_value(), "diagonal part is not killed by the wedge map");
    img[t2.sidx(0, i)] = *c;
  }
  AbHom iso = hom_from_struct(t2.group, t2.proj, t2.lift, inv0.pi1.grp, img);
  return psg_pushforward(m0, compose(target.k, hom_inverse(iso)), target.involution);
}

PsgCheck bcg_validate(const Bcg& b, const Int& exhaustive_bound) {
  const FgAbGroup& q = b.ce.quotient;
  const FgAbGroup& cc = b.ce.center_part;
  if (!nil2_validate(b.ce)) return fail("group data is not a valid extension");
  if (b.boundary.src != b.cee || b.boundary.dst != cc)
    return fail("boundary does not map the ee-part to the center part");
  if (!hom_well_defined(b.boundary)) return fail("boundary is not well defined");

  std::string shape = check_form(q, b.cee, b.brace);
  if (!shape.empty()) return fail("brace " + shape);

  const size_t nq = q.ngens();
  for (size_t i = 0; i < nq; ++i)
    for (size_t j = 0; j < nq; ++j) {
      Nil2El x = nil2_el(b.ce, unit_of(q, i), zero_of(cc));
      Nil2El y = nil2_el(b.ce, unit_of(q, j), zero_of(cc));
      Nil2El comm = nil2_commutator(b.ce, x, y);
      if (!is_zero(q, comm.q)) return fail("commutators do not vanish in the quotient");
      if (reduce(cc, b.boundary.apply(b.brace[i][j])) != reduce(cc, comm.c))
        return fail("boundary of the brace differs from the commutator");
      if (b.symmetric &&
          !is_zero(b.cee, add(b.cee, b.brace[i][j], b.brace[j][i])))
        return fail("brace is not symmetric");
    }

  if (exhaustive_bound > 0 && q.is_finite() && q.order() <= exhaustive_bound) {
    std::vector<Vec> elems = all_elements(q);
    Vec c0 = zero_of(cc);
    auto el = [&](const Vec& x) { return nil2_el(b.ce, x, c0); };
    for (const Vec& xq : elems)
      for (const Vec& yq : elems) {
        Nil2El x = el(xq), y = el(yq);
        Nil2El comm = nil2_commutator(b.ce, x, y);
        if (reduce(cc, b.boundary.apply(b.brace_eval(xq, yq))) != reduce(cc, comm.c))
          return fail("boundary of the brace differs from the commutator");
        if (b.symmetric &&
            !is_zero(b.cee, add(b.cee, b.brace_eval(xq, yq), b.brace_eval(yq, xq))))
          return fail("brace is not symmetric");
        for (const Vec& zq : elems) {
          Nil2El z = el(zq);
          // {x, yz} = {x,z} + {x,y} + {y^-1 x^-1 y x, z}
          Nil2El u = nil2_mul(
              b.ce, nil2_mul(b.ce, nil2_inv(b.ce, y), nil2_inv(b.ce, x)),
              nil2_mul(b.ce, y, x));
          Vec lhs = b.brace_eval(xq, nil2_mul(b.ce, y, z).q);
          Vec rhs = add(b.cee, b.brace_eval(xq, zq), b.brace_eval(xq, yq));
          rhs = add(b.cee, rhs, b.brace_eval(u.q, zq));
          if (reduce(b.cee, lhs) != reduce(b.cee, rhs))
            return fail("brace fails the right expansion law");
          // {xy, z} = {y^-1 x y, y^-1 z y} + {y, z}
          Nil2El cx = nil2_mul(b.ce, nil2_mul(b.ce, nil2_inv(b.ce, y), x), y);
          Nil2El cz = nil2_mul(b.ce, nil2_mul(b.ce, nil2_inv(b.ce, y), z), y);
          Vec lhs2 = b.brace_eval(nil2_mul(b.ce, x, y).q, zq);
          Vec rhs2 = add(b.cee, b.brace_eval(cx.q, cz.q), b.brace_eval(yq, zq));
          if (reduce(b.cee, lhs2) != reduce(b.cee, rhs2))
            return fail("brace fails the left expansion law");
        }
      }
  }
  return PsgCheck{};
}

UpsilonLambda upsilon_lambda(const PreSquareGroup& m) {
  PsgCheck chk = psg_validate(m, 0);
  SQG_DOMAIN_CHECK(chk.ok, "not a presquare group: " + chk.violation);

  UpsilonLambda out;
  out.bcg = Bcg{m.me, m.mee, m.p, m.bracket, false};

  const size_t nq = m.me.quotient.ngens();
  std::vector<Vec> rels;
  for (size_t i = 0; i < nq; ++i)
    for (size_t j = i; j < nq; ++j)
      rels.push_back(add(m.mee, m.bracket[i][j], m.bracket[j][i]));
  FgAbGroup free_src{Vec(rels.size(), Int(0))};
  AbHom relmap = hom_from_cols(free_src, m.mee, rels);
  QuotientMap qm = hom_cokernel(relmap);

  Bcg s;
  s.ce = m.me;
  s.cee = qm.grp;
  s.boundary = compose(m.p, quotient_section(qm));
  SQG_LOGIC_CHECK(hom_well_defined(s.boundary), "boundary does not descend");
  SQG_LOGIC_CHECK(hom_equal(compose(s.boundary, quotient_projection(qm)), m.p),
                  "descended boundary disagrees with P");
  s.brace.assign(nq, std::vector<Vec>(nq));
  for (size_t i = 0; i < nq; ++i)
    for (size_t j = 0; j < nq; ++j) s.brace[i][j] = qm.project(m.bracket[i][j]);
  s.symmetric = true;
  out.scg = std::move(s);

  out.valid = bcg_validate(out.bcg, 0).ok && bcg_validate(out.scg, 0).ok;
  return out;
}

Nil2Group odot_eval(const Int& n, const PreSquareGroup& m, const Int& max_n) {
  PsgCheck chk = psg_validate(m, 0);
  SQG_DOMAIN_CHECK(chk.ok, "not a presquare group: " + chk.violation);
  SQG_INPUT_CHECK(n >= 0, "the pointed set needs a nonnegative size");
  SQG_INPUT_CHECK(n <= max_n, "pointed set size exceeds the bound");
  if (n == 0)
    return nil2_group(trivial_group(), trivial_group(),
                      cocycle_zero(trivial_group(), trivial_group()));
  if (n == 1) return m.me;
  PreSquareGroup acc = m;
  for (Int i = 2; i <= n; ++i) acc = psg_combine(PsgCombine::Coproduct, acc, m);
  return acc.me;
}

MooreComplex moore_s1(const PreSquareGroup& m) {
  PsgCheck chk = psg_validate(m, 0);
  SQG_DOMAIN_CHECK(chk.ok, "not a presquare group: " + chk.violation);
  return MooreComplex{m.mee, m.p, m.me};
}

}  // namespace sqg
