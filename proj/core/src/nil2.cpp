#include "sqg/nil2.hpp"

namespace sqg {

namespace {

bool carry_at(const FgAbGroup& q, size_t i, const Int& xi, const Int& yi) {
  return q.fac[i] != 0 && xi + yi >= q.fac[i];
}

std::vector<std::vector<Vec>> zero_bil(const FgAbGroup& q, const FgAbGroup& c) {
  return std::vector<std::vector<Vec>>(q.ngens(), std::vector<Vec>(q.ngens(), zero_of(c)));
}

std::vector<Vec> zero_carry(const FgAbGroup& q, const FgAbGroup& c) {
  return std::vector<Vec>(q.ngens(), zero_of(c));
}

}  // namespace

Vec Cocycle::eval(const Vec& x_in, const Vec& y_in) const {
  Vec x = reduce(q, x_in);
  Vec y = reduce(q, y_in);
  if (!structured) {
    ElementIndex ei = element_index(q);
    return table[ei.index(x) * ei.size + ei.index(y)];
  }
  Vec acc = zero_of(c);
  for (size_t i = 0; i < q.ngens(); ++i) {
    if (x[i] == 0) continue;
    for (size_t j = 0; j < q.ngens(); ++j)
      if (y[j] != 0) acc = add(c, acc, smul(c, x[i] * y[j], bil[i][j]));
  }
  for (size_t i = 0; i < q.ngens(); ++i)
    if (carry_at(q, i, x[i], y[i])) acc = add(c, acc, carry[i]);
  return acc;
}

Cocycle cocycle_zero(const FgAbGroup& q, const FgAbGroup& c) {
  Cocycle f;
  f.q = q;
  f.c = c;
  f.bil = zero_bil(q, c);
  f.carry = zero_carry(q, c);
  return f;
}

Cocycle cocycle_bilinear(const FgAbGroup& q, const FgAbGroup& c,
                         const std::vector<std::vector<Vec>>& bil) {
  Cocycle f = cocycle_zero(q, c);
  SQG_INPUT_CHECK(bil.size() == q.ngens(), "bilinear coefficient shape mismatch");
  for (size_t i = 0; i < q.ngens(); ++i) {
    SQG_INPUT_CHECK(bil[i].size() == q.ngens(), "bilinear coefficient shape mismatch");
    for (size_t j = 0; j < q.ngens(); ++j) f.bil[i][j] = reduce(c, bil[i][j]);
  }
  return f;
}

Cocycle cocycle_from_table(const FgAbGroup& q, const FgAbGroup& c,
                           const std::vector<Vec>& table, const Int& max_order) {
  SQG_DOMAIN_CHECK(q.is_finite() && q.order() <= max_order,
                   "cocycle tables need a finite base within the size bound");
  size_t n = static_cast<size_t>(q.order());
  SQG_INPUT_CHECK(table.size() == n * n, "cocycle table has wrong size");
  Cocycle f;
  f.q = q;
  f.c = c;
  f.structured = false;
  f.table.reserve(n * n);
  for (const Vec& v : table) f.table.push_back(reduce(c, v));
  return f;
}

Cocycle cocycle_to_table(const Cocycle& f, const Int& max_order) {
  SQG_DOMAIN_CHECK(f.q.is_finite() && f.q.order() <= max_order,
                   "cocycle tables need a finite base within the size bound");
  if (!f.structured) return f;
  ElementIndex ei = element_index(f.q);
  std::vector<Vec> table(ei.size * ei.size);
  for (size_t i = 0; i < ei.size; ++i)
    for (size_t j = 0; j < ei.size; ++j)
      table[i * ei.size + j] = f.eval(ei.element(i), ei.element(j));
  Cocycle g;
  g.q = f.q;
  g.c = f.c;
  g.structured = false;
  g.table = std::move(table);
  return g;
}

Cocycle cocycle_add(const Cocycle& f, const Cocycle& g) {
  SQG_DOMAIN_CHECK(f.q == g.q && f.c == g.c, "cocycle domain mismatch");
  if (f.structured && g.structured) {
    Cocycle h = cocycle_zero(f.q, f.c);
    for (size_t i = 0; i < f.q.ngens(); ++i) {
      h.carry[i] = add(f.c, f.carry[i], g.carry[i]);
      for (size_t j = 0; j < f.q.ngens(); ++j)
        h.bil[i][j] = add(f.c, f.bil[i][j], g.bil[i][j]);
    }
    return h;
  }
  Cocycle ft = cocycle_to_table(f);
  Cocycle gt = cocycle_to_table(g);
  for (size_t i = 0; i < ft.table.size(); ++i)
    ft.table[i] = add(f.c, ft.table[i], gt.table[i]);
  return ft;
}

Cocycle cocycle_neg(const Cocycle& f) {
  Cocycle h = f;
  if (f.structured) {
    for (size_t i = 0; i < f.q.ngens(); ++i) {
      h.carry[i] = neg(f.c, f.carry[i]);
      for (size_t j = 0; j < f.q.ngens(); ++j) h.bil[i][j] = neg(f.c, f.bil[i][j]);
    }
  } else {
    for (auto& v : h.table) v = neg(f.c, v);
  }
  return h;
}

Cocycle cocycle_sub(const Cocycle& f, const Cocycle& g) {
  return cocycle_add(f, cocycle_neg(g));
}

bool cocycle_valid(const Cocycle& f) {
  const size_t k = f.q.ngens();
  if (f.structured) {
    if (f.bil.size() != k || f.carry.size() != k) return false;
    for (size_t i = 0; i < k; ++i) {
      if (f.bil[i].size() != k) return false;
      if (f.carry[i].size() != f.c.ngens()) return false;
      if (f.q.fac[i] == 0 && !is_zero(f.c, f.carry[i])) return false;
      for (size_t j = 0; j < k; ++j) {
        if (f.bil[i][j].size() != f.c.ngens()) return false;
        if (f.q.fac[i] != 0 && !is_zero(f.c, smul(f.c, f.q.fac[i], f.bil[i][j])))
          return false;
        if (f.q.fac[j] != 0 && !is_zero(f.c, smul(f.c, f.q.fac[j], f.bil[i][j])))
          return false;
      }
    }
    return true;
  }
  if (!f.q.is_finite()) return false;
  ElementIndex ei = element_index(f.q);
  const size_t n = ei.size;
  if (f.table.size() != n * n) return false;
  for (size_t i = 0; i < n; ++i)
    if (!is_zero(f.c, f.table[i]) || !is_zero(f.c, f.table[i * n])) return false;
  std::vector<size_t> sum(n * n);
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < n; ++j)
      sum[i * n + j] = ei.index(add(f.q, ei.element(i), ei.element(j)));
  for (size_t a = 0; a < n; ++a)
    for (size_t b = 0; b < n; ++b) {
      size_t ab = sum[a * n + b];
      for (size_t cc = 0; cc < n; ++cc) {
        size_t bc = sum[b * n + cc];
        Vec lhs = add(f.c, f.table[a * n + b], f.table[ab * n + cc]);
        Vec rhs = add(f.c, f.table[b * n + cc], f.table[a * n + bc]);
        if (lhs != rhs) return false;
      }
    }
  return true;
}

bool cocycle_equal(const Cocycle& f, const Cocycle& g) {
  if (f.q != g.q || f.c != g.c) return false;
  if (f.structured && g.structured) {
    for (size_t i = 0; i < f.q.ngens(); ++i) {
      for (size_t j = 0; j < f.q.ngens(); ++j)
        if (i != j && reduce(f.c, f.bil[i][j]) != reduce(f.c, g.bil[i][j]))
          return false;
      // for a factor of two the diagonal coefficient and the carry only occur
      // together, at x_i = y_i = 1
      if (f.q.fac[i] == 2) {
        Vec fs = add(f.c, f.bil[i][i], f.carry[i]);
        Vec gs = add(f.c, g.bil[i][i], g.carry[i]);
        if (reduce(f.c, fs) != reduce(f.c, gs)) return false;
      } else {
        if (reduce(f.c, f.bil[i][i]) != reduce(f.c, g.bil[i][i])) return false;
        if (reduce(f.c, f.carry[i]) != reduce(f.c, g.carry[i])) return false;
      }
    }
    return true;
  }
  Cocycle ft = cocycle_to_table(f);
  Cocycle gt = cocycle_to_table(g);
  for (size_t i = 0; i < ft.table.size(); ++i)
    if (ft.table[i] != gt.table[i]) return false;
  return true;
}

Nil2Group nil2_group(const FgAbGroup& quotient, const FgAbGroup& center, Cocycle f) {
  SQG_INPUT_CHECK(f.q == quotient && f.c == center, "cocycle does not match the group data");
  return Nil2Group{quotient, center, std::move(f)};
}

bool nil2_validate(const Nil2Group& g) {
  return g.f.q == g.quotient && g.f.c == g.center_part && cocycle_valid(g.f);
}

Nil2El nil2_el(const Nil2Group& g, Vec q, Vec c) {
  SQG_INPUT_CHECK(q.size() == g.quotient.ngens() && c.size() == g.center_part.ngens(),
                  "element does not match the group");
  return Nil2El{reduce(g.quotient, std::move(q)), reduce(g.center_part, std::move(c))};
}

Nil2El nil2_id(const Nil2Group& g) {
  return Nil2El{zero_of(g.quotient), zero_of(g.center_part)};
}

Nil2El nil2_mul(const Nil2Group& g, const Nil2El& a, const Nil2El& b) {
  Vec q = add(g.quotient, a.q, b.q);
  Vec c = add(g.center_part, add(g.center_part, a.c, b.c), g.f.eval(a.q, b.q));
  return Nil2El{std::move(q), std::move(c)};
}

Nil2El nil2_inv(const Nil2Group& g, const Nil2El& a) {
  Vec q = neg(g.quotient, a.q);
  Vec c = neg(g.center_part, add(g.center_part, a.c, g.f.eval(a.q, q)));
  return Nil2El{std::move(q), std::move(c)};
}

Nil2El nil2_pow(const Nil2Group& g, const Nil2El& a, const Int& n) {
  if (n < 0) return nil2_pow(g, nil2_inv(g, a), -n);
  Nil2El r = nil2_id(g);
  for (Int k = 0; k < n; ++k) r = nil2_mul(g, r, a);
  return r;
}

Nil2El nil2_commutator(const Nil2Group& g, const Nil2El& a, const Nil2El& b) {
  Nil2El ab = nil2_mul(g, a, b);
  Nil2El ba = nil2_mul(g, b, a);
  return nil2_mul(g, ab, nil2_inv(g, ba));
}

Int nil2_order(const Nil2Group& g, const Nil2El& a) {
  Int d = element_order(g.quotient, a.q);
  if (d == 0) return 0;
  Nil2El r = nil2_pow(g, a, d);
  SQG_LOGIC_CHECK(is_zero(g.quotient, r.q), "power did not land in the center");
  Int o = element_order(g.center_part, r.c);
  if (o == 0) return 0;
  return d * o;
}

bool nil2_is_central(const Nil2Group& g, const Nil2El& a) {
  if (g.f.structured) {
    for (size_t i = 0; i < g.quotient.ngens(); ++i) {
      Vec e = unit_of(g.quotient, i);
      if (g.f.eval(a.q, e) != g.f.eval(e, a.q)) return false;
    }
    return true;
  }
  for (const Vec& y : all_elements(g.quotient))
    if (g.f.eval(a.q, y) != g.f.eval(y, a.q)) return false;
  return true;
}

bool nil2_el_equal(const Nil2Group& g, const Nil2El& a, const Nil2El& b) {
  return reduce(g.quotient, a.q) == reduce(g.quotient, b.q) &&
         reduce(g.center_part, a.c) == reduce(g.center_part, b.c);
}

namespace {

// lower-triangular bilinear representative of a commutator pairing
Cocycle lower_triangular_rep(const FgAbGroup& q, const FgAbGroup& c,
                             const FunctorValue& l2, const AbHom& pairing) {
  Cocycle beta = cocycle_zero(q, c);
  for (size_t i = 0; i < q.ngens(); ++i)
    for (size_t j = 0; j < i; ++j)
      beta.bil[i][j] = pairing.apply(eval_pair(l2, unit_of(q, i), unit_of(q, j)));
  return beta;
}

std::vector<Vec> ext_restriction(const Cocycle& f) {
  std::vector<Vec> cls(f.q.ngens(), zero_of(f.c));
  for (size_t i = 0; i < f.q.ngens(); ++i) {
    const Int d = f.q.fac[i];
    if (d == 0) continue;
    Vec e = unit_of(f.q, i);
    Vec acc = zero_of(f.c);
    for (Int k = 0; k < d; ++k) acc = add(f.c, acc, f.eval(smul(f.q, k, e), e));
    cls[i] = acc;
  }
  return cls;
}

}  // namespace

H2Class h2_split(const Cocycle& f) {
  SQG_DOMAIN_CHECK(cocycle_valid(f), "not a normalized 2-cocycle");
  FunctorValue l2 = quad_value(Functor::Lambda2, f.q);
  std::vector<Vec> img;
  for (const StructGen& s : l2.sgens) {
    Vec ei = unit_of(f.q, s.i), ej = unit_of(f.q, s.j);
    img.push_back(sub(f.c, f.eval(ei, ej), f.eval(ej, ei)));
  }
  AbHom pairing = hom_on_struct_gens(l2, f.c, img);
  SQG_LOGIC_CHECK(hom_well_defined(pairing), "commutator pairing must factor through the wedge");

  Cocycle beta = lower_triangular_rep(f.q, f.c, l2, pairing);
  Cocycle sym = cocycle_sub(f, beta);
  ExtGroup e = ext_group(f.q, f.c);
  ExtClass ext{e, e.from_classification(ext_restriction(sym))};
  return H2Class{std::move(ext), std::move(pairing)};
}

Cocycle class_to_cocycle(const H2Class& h) {
  const FgAbGroup& q = h.ext_component.ext.a;
  const FgAbGroup& c = h.ext_component.ext.b;
  FunctorValue l2 = quad_value(Functor::Lambda2, q);
  Cocycle f = lower_triangular_rep(q, c, l2, h.pairing_component);
  std::vector<Vec> t = h.ext_component.ext.to_classification(h.ext_component.coords);
  for (size_t i = 0; i < q.ngens(); ++i)
    if (q.fac[i] != 0) f.carry[i] = reduce(c, t[i]);
  return f;
}

bool h2_is_zero(const H2Class& h) {
  return is_zero(h.ext_component.ext.group, h.ext_component.coords) &&
         hom_is_zero(h.pairing_component);
}

bool h2_equal(const H2Class& a, const H2Class& b) {
  return a.ext_component.ext.group == b.ext_component.ext.group &&
         reduce(a.ext_component.ext.group, a.ext_component.coords) ==
             reduce(b.ext_component.ext.group, b.ext_component.coords) &&
         hom_equal(a.pairing_component, b.pairing_component);
}

Vec OneCochain::eval(const Vec& x_in) const {
  Vec x = reduce(q, x_in);
  if (!structured) {
    ElementIndex ei = element_index(q);
    return table[ei.index(x)];
  }
  Vec acc = zero_of(c);
  for (size_t i = 0; i < q.ngens(); ++i) {
    if (x[i] != 0) {
      acc = add(c, acc, smul(c, binom2(x[i]), quad[i][i]));
      acc = add(c, acc, smul(c, x[i], lin[i]));
    }
    for (size_t j = i + 1; j < q.ngens(); ++j)
      if (x[i] != 0 && x[j] != 0) acc = add(c, acc, smul(c, x[i] * x[j], quad[i][j]));
  }
  return acc;
}

std::optional<OneCochain> solve_coboundary(const Cocycle& f) {
  SQG_DOMAIN_CHECK(cocycle_valid(f), "not a normalized 2-cocycle");
  H2Class h = h2_split(f);
  if (!hom_is_zero(h.pairing_component)) return std::nullopt;

  // one coefficient per torsion factor: d_i * u_i = class restriction
  AbHom idc = hom_identity(f.c);

  if (f.structured) {
    OneCochain g;
    g.q = f.q;
    g.c = f.c;
    g.quad = zero_bil(f.q, f.c);
    g.lin = zero_carry(f.q, f.c);
    for (size_t i = 0; i < f.q.ngens(); ++i) {
      g.quad[i][i] = neg(f.c, f.bil[i][i]);
      for (size_t j = i + 1; j < f.q.ngens(); ++j) g.quad[i][j] = neg(f.c, f.bil[i][j]);
      const Int d = f.q.fac[i];
      if (d == 0) continue;
      Vec rhs = sub(f.c, f.carry[i], smul(f.c, binom2(d), f.bil[i][i]));
      std::optional<Vec> u = hom_solve(hom_smul(d, idc), rhs);
      if (!u) return std::nullopt;
      g.lin[i] = reduce(f.c, *u);
    }
    return g;
  }

  ElementIndex ei = element_index(f.q);
  std::vector<Vec> cls = ext_restriction(f);
  std::vector<Vec> alpha(f.q.ngens(), zero_of(f.c));
  for (size_t i = 0; i < f.q.ngens(); ++i) {
    std::optional<Vec> u = hom_solve(hom_smul(f.q.fac[i], idc), cls[i]);
    if (!u) return std::nullopt;
    alpha[i] = reduce(f.c, *u);
  }
  // path integration: g(y + e_i) = g(y) + g(e_i) - f(y, e_i), descending on
  // the last nonzero coordinate
  std::vector<Vec> table(ei.size, zero_of(f.c));
  for (size_t idx = 1; idx < ei.size; ++idx) {
    Vec x = ei.element(idx);
    size_t i = x.size();
    while (i-- > 0)
      if (x[i] != 0) break;
    Vec y = x;
    y[i] -= 1;
    Vec val = add(f.c, table[ei.index(y)], alpha[i]);
    table[idx] = sub(f.c, val, f.eval(y, unit_of(f.q, i)));
  }
  OneCochain g;
  g.q = f.q;
  g.c = f.c;
  g.structured = false;
  g.table = std::move(table);
  for (size_t i = 0; i < ei.size; ++i)
    for (size_t j = 0; j < ei.size; ++j) {
      Vec x = ei.element(i), y = ei.element(j);
      Vec dg = sub(f.c, add(f.c, g.eval(x), g.eval(y)), g.eval(add(f.q, x, y)));
      SQG_LOGIC_CHECK(dg == f.eval(x, y), "path-integrated primitive failed to verify");
    }
  return g;
}

Cocycle coboundary(const OneCochain& g) {
  if (!g.structured) {
    ElementIndex ei = element_index(g.q);
    std::vector<Vec> table(ei.size * ei.size);
    for (size_t i = 0; i < ei.size; ++i)
      for (size_t j = 0; j < ei.size; ++j) {
        Vec x = ei.element(i), y = ei.element(j);
        table[i * ei.size + j] =
            sub(g.c, add(g.c, g.eval(x), g.eval(y)), g.eval(add(g.q, x, y)));
      }
    return cocycle_from_table(g.q, g.c, table);
  }
  bool representable = true;
  for (size_t i = 0; i < g.q.ngens() && representable; ++i) {
    const Int d = g.q.fac[i];
    if (d == 0) continue;
    for (size_t j = i; j < g.q.ngens() && representable; ++j)
      if (!is_zero(g.c, smul(g.c, d, g.quad[i][j]))) representable = false;
    for (size_t j = 0; j < i && representable; ++j)
      if (!is_zero(g.c, smul(g.c, d, g.quad[j][i]))) representable = false;
  }
  if (!representable) {
    SQG_DOMAIN_CHECK(g.q.is_finite(),
                     "coboundary of this cochain has no structured form; base is infinite");
    OneCochain t = g;
    t.structured = false;
    ElementIndex ei = element_index(g.q);
    t.table.clear();
    for (size_t i = 0; i < ei.size; ++i) t.table.push_back(g.eval(ei.element(i)));
    return coboundary(t);
  }
  Cocycle f = cocycle_zero(g.q, g.c);
  for (size_t i = 0; i < g.q.ngens(); ++i) {
    f.bil[i][i] = neg(g.c, g.quad[i][i]);
    for (size_t j = i + 1; j < g.q.ngens(); ++j) {
      f.bil[i][j] = neg(g.c, g.quad[i][j]);
      f.bil[j][i] = f.bil[i][j];
    }
    const Int d = g.q.fac[i];
    if (d != 0)
      f.carry[i] = sub(g.c, smul(g.c, d, g.lin[i]), smul(g.c, binom2(d), g.quad[i][i]));
  }
  return f;
}

CentralExtension canonical_TA(const FgAbGroup& a) {
  FunctorValue l2 = quad_value(Functor::Lambda2, a);
  Cocycle beta = cocycle_zero(a, l2.group);
  for (size_t i = 0; i < a.ngens(); ++i)
    for (size_t j = 0; j < i; ++j)
      beta.bil[i][j] = eval_pair(l2, unit_of(a, i), unit_of(a, j));
  Nil2Group total = nil2_group(a, l2.group, std::move(beta));
  return CentralExtension{std::move(total), hom_identity(l2.group), a};
}

CentralExtension twist_TA(const CentralExtension& n, const ExtClass& x) {
  SQG_DOMAIN_CHECK(x.ext.a == n.base && x.ext.b == n.total.center_part,
                   "twist class lives in the wrong Ext group");
  H2Class h{x, hom_zero(quad_value(Functor::Lambda2, n.base).group, n.total.center_part)};
  Cocycle twisted = cocycle_add(n.total.f, class_to_cocycle(h));
  CentralExtension out = n;
  out.total.f = std::move(twisted);
  return out;
}

ExtClass ta_difference(const CentralExtension& m, const CentralExtension& n) {
  SQG_DOMAIN_CHECK(m.base == n.base && m.total.center_part == n.total.center_part,
                   "extensions are not over the same data");
  H2Class h = h2_split(cocycle_sub(m.total.f, n.total.f));
  SQG_DOMAIN_CHECK(hom_is_zero(h.pairing_component),
                   "extensions have different commutator pairings");
  return h.ext_component;
}

}  // namespace sqg
