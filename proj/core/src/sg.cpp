#include "sqg/sg.hpp"

#include <algorithm>
#include <cstdint>
#include <string>
#include <utility>

namespace sqg {

namespace {

constexpr size_t kTorsionTableBound = 4096;

SgCheck bad(std::string msg) { return SgCheck{false, std::move(msg)}; }

FgAbGroup torsion_part(const FgAbGroup& g) {
  return FgAbGroup{Vec(g.fac.begin(),
                       g.fac.begin() + static_cast<std::ptrdiff_t>(g.torsion_count()))};
}

size_t torsion_table_size(const FgAbGroup& src) {
  Int n = torsion_part(src).order();
  SQG_DOMAIN_CHECK(n <= Int(kTorsionTableBound),
                   "torsion subgroup is too large to tabulate");
  return static_cast<size_t>(n);
}

Vec embed_torsion(const FgAbGroup& src, const Vec& t) {
  Vec x = zero_of(src);
  std::copy(t.begin(), t.end(), x.begin());
  return x;
}

std::string qfn_shape_error(const QuadraticFn& g) {
  Int to = torsion_part(g.src).order();
  if (to > Int(kTorsionTableBound)) return "torsion subgroup is too large to tabulate";
  const size_t t = static_cast<size_t>(to);
  const size_t fr = g.src.free_rank();
  const size_t w = g.dst.ngens();
  if (g.base.size() != t) return "section value table has the wrong size";
  if (g.slope.size() != fr || g.sq.size() != fr || g.mixed.size() != fr)
    return "free-coordinate coefficient blocks have the wrong size";
  for (const Vec& v : g.base)
    if (v.size() != w) return "section value has the wrong length";
  for (const auto& sl : g.slope) {
    if (sl.size() != t) return "slope table has the wrong size";
    for (const Vec& v : sl)
      if (v.size() != w) return "slope value has the wrong length";
  }
  for (const Vec& v : g.sq)
    if (v.size() != w) return "square coefficient has the wrong length";
  for (const auto& row : g.mixed) {
    if (row.size() != fr) return "mixed coefficient block has the wrong size";
    for (const Vec& v : row)
      if (v.size() != w) return "mixed coefficient has the wrong length";
  }
  return {};
}

}  // namespace

Vec QuadraticFn::eval(const Vec& x_in) const {
  Vec x = reduce(src, x_in);
  const size_t tc = src.torsion_count();
  const ElementIndex ti = element_index(torsion_part(src));
  const size_t t = ti.index(Vec(x.begin(), x.begin() + static_cast<std::ptrdiff_t>(tc)));
  Vec acc = base[t];
  const size_t fr = src.free_rank();
  for (size_t j = 0; j < fr; ++j) {
    const Int& xj = x[tc + j];
    if (xj == 0) continue;
    acc = add(dst, acc, smul(dst, xj, slope[j][t]));
    acc = add(dst, acc, smul(dst, binom2(xj), sq[j]));
    for (size_t j2 = j + 1; j2 < fr; ++j2) {
      if (x[tc + j2] == 0) continue;
      acc = add(dst, acc, smul(dst, xj * x[tc + j2], mixed[j][j2]));
    }
  }
  return reduce(dst, acc);
}

QuadraticFn qfn_zero(const FgAbGroup& src, const FgAbGroup& dst) {
  const size_t t = torsion_table_size(src);
  const size_t fr = src.free_rank();
  QuadraticFn f;
  f.src = src;
  f.dst = dst;
  f.base.assign(t, zero_of(dst));
  f.slope.assign(fr, std::vector<Vec>(t, zero_of(dst)));
  f.sq.assign(fr, zero_of(dst));
  f.mixed.assign(fr, std::vector<Vec>(fr, zero_of(dst)));
  return f;
}

QuadraticFn qfn_from_function(const FgAbGroup& src, const FgAbGroup& dst,
                              const std::function<Vec(const Vec&)>& f) {
  QuadraticFn out = qfn_zero(src, dst);
  const ElementIndex ti = element_index(torsion_part(src));
  const size_t tc = src.torsion_count();
  const size_t fr = src.free_rank();
  auto sample = [&](const Vec& t, std::initializer_list<std::pair<size_t, Int>> frees) {
    Vec x = embed_torsion(src, t);
    for (const auto& jv : frees) x[tc + jv.first] = jv.second;
    return reduce(dst, f(x));
  };
  std::vector<Vec> telts(ti.size);
  for (size_t t = 0; t < ti.size; ++t) {
    telts[t] = ti.element(t);
    out.base[t] = sample(telts[t], {});
  }
  for (size_t j = 0; j < fr; ++j) {
    for (size_t t = 0; t < ti.size; ++t) {
      Vec v1 = sample(telts[t], {{j, Int(1)}});
      Vec v2 = sample(telts[t], {{j, Int(2)}});
      out.slope[j][t] = sub(dst, v1, out.base[t]);
      Vec dd = sub(dst, add(dst, v2, out.base[t]), smul(dst, 2, v1));
      if (t == 0)
        out.sq[j] = dd;
      else
        SQG_LOGIC_CHECK(dd == out.sq[j], "values do not fit a quadratic shape");
    }
  }
  for (size_t j = 0; j < fr; ++j)
    for (size_t j2 = j + 1; j2 < fr; ++j2) {
      Vec v = sample(telts[0], {{j, Int(1)}, {j2, Int(1)}});
      out.mixed[j][j2] =
          sub(dst, v, add(dst, out.base[0], add(dst, out.slope[j][0], out.slope[j2][0])));
    }
  // probe points beyond the fitted grid
  const size_t kp = std::min<size_t>(ti.size, 8);
  auto probe = [&](const Vec& t, std::initializer_list<std::pair<size_t, Int>> frees) {
    Vec x = embed_torsion(src, t);
    for (const auto& jv : frees) x[tc + jv.first] = jv.second;
    SQG_LOGIC_CHECK(out.eval(x) == reduce(dst, f(x)), "values do not fit a quadratic shape");
  };
  for (size_t j = 0; j < fr; ++j)
    for (size_t t = 0; t < kp; ++t) {
      probe(telts[t], {{j, Int(3)}});
      probe(telts[t], {{j, Int(-1)}});
    }
  for (size_t j = 0; j < fr; ++j)
    for (size_t j2 = j + 1; j2 < fr; ++j2) {
      for (size_t t = 0; t < kp; ++t) {
        probe(telts[t], {{j, Int(1)}, {j2, Int(1)}});
        probe(telts[t], {{j, Int(2)}, {j2, Int(1)}});
      }
      probe(telts[0], {{j, Int(2)}, {j2, Int(2)}});
    }
  return out;
}

QuadraticFn qfn_postcompose(const AbHom& f, const QuadraticFn& g) {
  SQG_INPUT_CHECK(f.src == g.dst, "composition group mismatch");
  QuadraticFn out = g;
  out.dst = f.dst;
  for (auto& v : out.base) v = f.apply(v);
  for (auto& sl : out.slope)
    for (auto& v : sl) v = f.apply(v);
  for (auto& v : out.sq) v = f.apply(v);
  for (auto& row : out.mixed)
    for (auto& v : row) v = f.apply(v);
  return out;
}

QuadraticFn qfn_add_hom(const QuadraticFn& g, const AbHom& alpha) {
  SQG_INPUT_CHECK(alpha.src == g.src && alpha.dst == g.dst, "twist group mismatch");
  QuadraticFn out = g;
  const ElementIndex ti = element_index(torsion_part(g.src));
  const size_t tc = g.src.torsion_count();
  for (size_t t = 0; t < ti.size; ++t)
    out.base[t] = add(g.dst, out.base[t], alpha.apply(embed_torsion(g.src, ti.element(t))));
  for (size_t j = 0; j < out.slope.size(); ++j) {
    Vec au = alpha.apply(unit_of(g.src, tc + j));
    for (size_t t = 0; t < ti.size; ++t)
      out.slope[j][t] = add(g.dst, out.slope[j][t], au);
  }
  return out;
}

bool qfn_equal(const QuadraticFn& f, const QuadraticFn& g) {
  if (!(f.src == g.src) || !(f.dst == g.dst)) return false;
  if (!qfn_shape_error(f).empty() || !qfn_shape_error(g).empty()) return false;
  auto eq = [&](const Vec& a, const Vec& b) { return reduce(f.dst, a) == reduce(f.dst, b); };
  for (size_t t = 0; t < f.base.size(); ++t)
    if (!eq(f.base[t], g.base[t])) return false;
  for (size_t j = 0; j < f.slope.size(); ++j)
    for (size_t t = 0; t < f.slope[j].size(); ++t)
      if (!eq(f.slope[j][t], g.slope[j][t])) return false;
  for (size_t j = 0; j < f.sq.size(); ++j)
    if (!eq(f.sq[j], g.sq[j])) return false;
  for (size_t j = 0; j < f.mixed.size(); ++j)
    for (size_t j2 = j + 1; j2 < f.mixed.size(); ++j2)
      if (!eq(f.mixed[j][j2], g.mixed[j][j2])) return false;
  return true;
}

Vec qmap_eval(const QuadraticMap& m, const Nil2El& x) {
  Vec q = reduce(m.domain.quotient, x.q);
  Vec c = reduce(m.domain.center_part, x.c);
  if (m.structured)
    return reduce(m.codomain, add(m.codomain, m.h.apply(c), m.g.eval(q)));
  const ElementIndex qi = element_index(m.domain.quotient);
  const ElementIndex ci = element_index(m.domain.center_part);
  return reduce(m.codomain, m.table[qi.index(q) * ci.size + ci.index(c)]);
}

Vec sg_h_eval(const SquareGroup& q, const Nil2El& x) { return qmap_eval(q.hmap, x); }

Vec sg_cross_eval(const SquareGroup& q, const Nil2El& x, const Nil2El& y) {
  Vec hxy = sg_h_eval(q, nil2_mul(q.qe, x, y));
  return reduce(q.qee, sub(q.qee, hxy, add(q.qee, sg_h_eval(q, x), sg_h_eval(q, y))));
}

namespace {

std::vector<Vec> rep_sample(const FgAbGroup& g, size_t cap) {
  if (cap == 0) return {};
  if (g.is_finite() && g.order() <= Int(cap)) return all_elements(g);
  std::vector<Vec> out;
  auto push = [&](const Vec& v) {
    if (out.size() < cap) out.push_back(reduce(g, v));
  };
  push(zero_of(g));
  for (size_t i = 0; i < g.ngens(); ++i) {
    push(unit_of(g, i));
    push(smul(g, 2, unit_of(g, i)));
  }
  for (size_t i = 0; i < g.ngens(); ++i)
    for (size_t j = i + 1; j < g.ngens(); ++j)
      for (int a = 1; a <= 2; ++a)
        for (int b = 1; b <= 2; ++b)
          push(add(g, smul(g, a, unit_of(g, i)), smul(g, b, unit_of(g, j))));
  return out;
}

std::vector<Nil2El> el_sample(const Nil2Group& me, size_t cap) {
  std::vector<Vec> qs = rep_sample(me.quotient, cap);
  const FgAbGroup& c = me.center_part;
  std::vector<Vec> cs;
  if (c.is_finite() && c.order() <= 8) {
    cs = all_elements(c);
  } else {
    cs.push_back(zero_of(c));
    for (size_t k = 0; k < c.ngens(); ++k) cs.push_back(unit_of(c, k));
  }
  std::vector<Nil2El> out;
  for (const Vec& q : qs) {
    if (out.size() >= cap) return out;
    out.push_back(Nil2El{q, zero_of(c)});
  }
  for (size_t k = 1; k < cs.size(); ++k)
    for (const Vec& q : qs) {
      if (out.size() >= cap) return out;
      out.push_back(Nil2El{q, cs[k]});
    }
  return out;
}

std::vector<Nil2El> all_nil2_elements(const Nil2Group& me) {
  std::vector<Nil2El> out;
  for (const Vec& q : all_elements(me.quotient))
    for (const Vec& c : all_elements(me.center_part)) out.push_back(Nil2El{q, c});
  return out;
}

Vec form_eval(const FgAbGroup& c, const std::vector<std::vector<Vec>>& form, const Vec& x,
              const Vec& y) {
  Vec acc = zero_of(c);
  for (size_t i = 0; i < x.size(); ++i) {
    if (x[i] == 0) continue;
    for (size_t j = 0; j < y.size(); ++j) {
      if (y[j] == 0) continue;
      acc = add(c, acc, smul(c, x[i] * y[j], form[i][j]));
    }
  }
  return acc;
}

Cocycle cocycle_push(const Cocycle& f, const AbHom& h) {
  SQG_INPUT_CHECK(h.src == f.c, "pushforward coefficient mismatch");
  Cocycle out = f;
  out.c = h.dst;
  if (f.structured) {
    for (size_t i = 0; i < out.bil.size(); ++i)
      for (size_t j = 0; j < out.bil[i].size(); ++j) out.bil[i][j] = h.apply(f.bil[i][j]);
    for (size_t i = 0; i < out.carry.size(); ++i) out.carry[i] = h.apply(f.carry[i]);
  } else {
    for (auto& v : out.table) v = h.apply(v);
  }
  return out;
}

AbHom qmap_center_hom(const QuadraticMap& m) {
  if (m.structured) return m.h;
  std::vector<Vec> cols;
  for (size_t k = 0; k < m.domain.center_part.ngens(); ++k)
    cols.push_back(qmap_eval(
        m, Nil2El{zero_of(m.domain.quotient), unit_of(m.domain.center_part, k)}));
  return hom_from_cols(m.domain.center_part, m.codomain, cols);
}

std::vector<std::vector<Vec>> cross_form_of(const SquareGroup& q) {
  if (q.hmap.structured) return q.hmap.cross;
  const FgAbGroup& qu = q.qe.quotient;
  std::vector<std::vector<Vec>> cr(qu.ngens(), std::vector<Vec>(qu.ngens()));
  for (size_t i = 0; i < qu.ngens(); ++i)
    for (size_t j = 0; j < qu.ngens(); ++j) {
      Nil2El si = nil2_el(q.qe, unit_of(qu, i), zero_of(q.qe.center_part));
      Nil2El sj = nil2_el(q.qe, unit_of(qu, j), zero_of(q.qe.center_part));
      cr[i][j] = sg_cross_eval(q, si, sj);
    }
  return cr;
}

QuadraticMap structured_qmap(const QuadraticMap& m) {
  if (m.structured) return m;
  AbHom h = qmap_center_hom(m);
  QuadraticFn g = qfn_from_function(m.domain.quotient, m.codomain, [&](const Vec& x) {
    return qmap_eval(m, Nil2El{x, zero_of(m.domain.center_part)});
  });
  const FgAbGroup& qu = m.domain.quotient;
  std::vector<std::vector<Vec>> cross(qu.ngens(), std::vector<Vec>(qu.ngens()));
  for (size_t i = 0; i < qu.ngens(); ++i)
    for (size_t j = 0; j < qu.ngens(); ++j) {
      Nil2El si = nil2_el(m.domain, unit_of(qu, i), zero_of(m.domain.center_part));
      Nil2El sj = nil2_el(m.domain, unit_of(qu, j), zero_of(m.domain.center_part));
      Vec hij = qmap_eval(m, nil2_mul(m.domain, si, sj));
      cross[i][j] = reduce(
          m.codomain,
          sub(m.codomain, hij, add(m.codomain, qmap_eval(m, si), qmap_eval(m, sj))));
    }
  return QuadraticMap{m.domain, m.codomain, true, std::move(h), std::move(g),
                      std::move(cross), {}};
}

PreSquareGroup underlying_psg(const SquareGroup& q, const AbHom& h) {
  PreSquareGroup m;
  m.me = q.qe;
  m.mee = q.qee;
  m.sigma = hom_sub(compose(h, q.p), hom_identity(q.qee));
  m.p = q.p;
  m.bracket = cross_form_of(q);
  return m;
}

}  // namespace

SgCheck sg_validate(const SquareGroup& q, const Int& exhaustive_bound) {
  if (!nil2_validate(q.qe)) return bad("e-part is not a valid central extension");
  const FgAbGroup& qu = q.qe.quotient;
  const FgAbGroup& ctr = q.qe.center_part;
  const FgAbGroup& ee = q.qee;

  if (!(q.p.src == ee) || !(q.p.dst == ctr)) return bad("P has the wrong source or target");
  if (!hom_well_defined(q.p)) return bad("P is not well defined");
  if (!hom_cokernel(q.p).grp.is_trivial()) return bad("P is not onto the center part");

  const QuadraticMap& m = q.hmap;
  if (!(m.codomain == ee)) return bad("H has the wrong target");
  if (!(m.domain.quotient == qu) || !(m.domain.center_part == ctr) ||
      !cocycle_equal(m.domain.f, q.qe.f))
    return bad("H is not defined on the e-part");

  if (m.structured) {
    if (!(m.h.src == ctr) || !(m.h.dst == ee)) return bad("h has the wrong source or target");
    if (!hom_well_defined(m.h)) return bad("h is not well defined");
    if (!(m.g.src == qu) || !(m.g.dst == ee))
      return bad("section values have the wrong source or target");
    std::string err = qfn_shape_error(m.g);
    if (!err.empty()) return bad(err);
    if (m.cross.size() != qu.ngens()) return bad("cross form has the wrong size");
    for (const auto& row : m.cross) {
      if (row.size() != qu.ngens()) return bad("cross form has the wrong size");
      for (const Vec& v : row)
        if (v.size() != ee.ngens()) return bad("cross value has the wrong length");
    }
    for (size_t i = 0; i < qu.ngens(); ++i)
      for (size_t j = 0; j < qu.ngens(); ++j)
        if (!is_zero(ee, smul(ee, qu.fac[i], m.cross[i][j])) ||
            !is_zero(ee, smul(ee, qu.fac[j], m.cross[i][j])))
          return bad("cross form does not descend to the quotient");
  } else {
    if (!qu.is_finite() || !ctr.is_finite()) return bad("value tables need a finite e-part");
    if (qu.order() * ctr.order() > Int(kTorsionTableBound))
      return bad("e-part is too large to tabulate");
    const size_t qs = static_cast<size_t>(qu.order());
    const size_t cs = static_cast<size_t>(ctr.order());
    if (m.table.size() != qs * cs) return bad("value table has the wrong size");
    for (const Vec& v : m.table)
      if (v.size() != ee.ngens()) return bad("value table entry has the wrong length");
  }

  if (!is_zero(ee, qmap_eval(m, nil2_id(q.qe)))) return bad("H does not vanish at the identity");

  AbHom h = qmap_center_hom(m);
  if (!hom_well_defined(h)) return bad("H is not additive on the center part");

  if (!hom_equal(compose(q.p, compose(h, q.p)), hom_smul(2, q.p)))
    return bad("PHP does not equal 2P");

  if (m.structured) {
    for (size_t i = 0; i < qu.ngens(); ++i)
      for (size_t j = 0; j < qu.ngens(); ++j) {
        Nil2El si = nil2_el(q.qe, unit_of(qu, i), zero_of(ctr));
        Nil2El sj = nil2_el(q.qe, unit_of(qu, j), zero_of(ctr));
        if (!(reduce(ee, m.cross[i][j]) == sg_cross_eval(q, si, sj)))
          return bad("stored cross form disagrees with the cross effect");
      }
  }

  if (exhaustive_bound > 0) {
    const size_t cap = exhaustive_bound > Int(kTorsionTableBound)
                           ? kTorsionTableBound
                           : static_cast<size_t>(exhaustive_bound);
    std::vector<Nil2El> elems;
    if (m.structured) {
      elems = el_sample(q.qe, cap);
    } else {
      elems = all_nil2_elements(q.qe);
      if (elems.size() > cap) elems.resize(cap);
    }

    if (!m.structured) {
      std::vector<Vec> cel = all_elements(ctr);
      if (cel.size() > cap) cel.resize(cap);
      for (const Vec& c1 : cel)
        for (const Vec& c2 : cel) {
          Vec lhs = qmap_eval(m, Nil2El{zero_of(qu), add(ctr, c1, c2)});
          Vec rhs = add(ee, qmap_eval(m, Nil2El{zero_of(qu), c1}),
                        qmap_eval(m, Nil2El{zero_of(qu), c2}));
          if (!(lhs == rhs)) return bad("H is not additive on the center part");
        }
      for (const Nil2El& x : elems)
        for (const Nil2El& y : elems) {
          Nil2El xy = nil2_mul(q.qe, x, y);
          Vec cxy_x = sg_cross_eval(q, x, y);
          for (const Nil2El& z : elems) {
            Vec lhs = sg_cross_eval(q, xy, z);
            Vec rhs = add(ee, sg_cross_eval(q, x, z), sg_cross_eval(q, y, z));
            if (!(lhs == rhs)) return bad("cross effect is not bilinear");
            lhs = sg_cross_eval(q, z, xy);
            rhs = add(ee, sg_cross_eval(q, z, x), sg_cross_eval(q, z, y));
            if (!(lhs == rhs)) return bad("cross effect is not bilinear");
          }
          (void)cxy_x;
        }
    } else {
      std::vector<Vec> s = rep_sample(qu, cap);
      for (const Vec& x : s)
        for (const Vec& y : s) {
          Vec lhs = m.g.eval(add(qu, x, y));
          Vec rhs = add(ee, add(ee, m.g.eval(x), m.g.eval(y)),
                        sub(ee, form_eval(ee, m.cross, x, y), h.apply(q.qe.f.eval(x, y))));
          if (!(lhs == reduce(ee, rhs))) return bad("cross effect is not bilinear");
        }
    }

    for (size_t a = 0; a < ee.ngens(); ++a) {
      Nil2El pa = Nil2El{zero_of(qu), q.p.apply(unit_of(ee, a))};
      for (const Nil2El& x : elems)
        if (!is_zero(ee, sg_cross_eval(q, pa, x)) || !is_zero(ee, sg_cross_eval(q, x, pa)))
          return bad("cross effect does not vanish on the image of P");
    }

    for (const Nil2El& x : elems)
      for (const Nil2El& y : elems) {
        Vec cx = sg_cross_eval(q, x, y);
        Nil2El lhs = nil2_el(q.qe, zero_of(qu), q.p.apply(cx));
        Nil2El rhs = nil2_commutator(q.qe, x, y);
        if (!nil2_el_equal(q.qe, lhs, rhs))
          return bad("P of the cross effect differs from the commutator");
        Vec hc = qmap_eval(m, rhs);
        if (!(hc == reduce(ee, sub(ee, cx, sg_cross_eval(q, y, x)))))
          return bad("H on commutators disagrees with the antisymmetrized cross effect");
      }
  }

  PreSquareGroup cand = underlying_psg(q, h);
  PsgCheck pc = psg_validate(cand, exhaustive_bound);
  if (!pc.ok) return bad("underlying presquare data: " + pc.violation);
  if (!psg_invariants(cand).is_psg0) return bad("sigma does not invert the kernel of P");
  return SgCheck{};
}

PreSquareGroup wp(const SquareGroup& q) {
  SgCheck c = sg_validate(q, 0);
  SQG_DOMAIN_CHECK(c.ok, c.violation);
  return underlying_psg(q, qmap_center_hom(q.hmap));
}

SquareGroup sg_twist(const SquareGroup& q, const AbHom& alpha) {
  SQG_DOMAIN_CHECK(alpha.src == q.qe.quotient && alpha.dst == q.qee,
                   "twist must map pi0 into the ee-part");
  SQG_DOMAIN_CHECK(hom_well_defined(alpha), "twist is not well defined");
  SquareGroup out = q;
  if (out.hmap.structured) {
    out.hmap.g = qfn_add_hom(out.hmap.g, alpha);
  } else {
    const ElementIndex qi = element_index(q.qe.quotient);
    const ElementIndex ci = element_index(q.qe.center_part);
    for (size_t a = 0; a < qi.size; ++a) {
      Vec av = alpha.apply(qi.element(a));
      for (size_t b = 0; b < ci.size; ++b) {
        Vec& slot = out.hmap.table[a * ci.size + b];
        slot = add(q.qee, slot, av);
      }
    }
  }
  return out;
}

AbHom alpha_defect(const SquareGroup& q, const SquareGroup& qprime) {
  SQG_DOMAIN_CHECK(q.qe.quotient == qprime.qe.quotient &&
                       q.qe.center_part == qprime.qe.center_part &&
                       cocycle_equal(q.qe.f, qprime.qe.f),
                   "square groups have different e-parts");
  SQG_DOMAIN_CHECK(q.qee == qprime.qee, "square groups have different ee-parts");
  SQG_DOMAIN_CHECK(hom_equal(q.p, qprime.p), "square groups have different P maps");
  QuadraticMap a = structured_qmap(q.hmap);
  QuadraticMap b = structured_qmap(qprime.hmap);
  SQG_DOMAIN_CHECK(hom_equal(a.h, b.h), "square groups differ on the center part");
  const FgAbGroup& qu = q.qe.quotient;
  const FgAbGroup& ee = q.qee;
  for (size_t i = 0; i < qu.ngens(); ++i)
    for (size_t j = 0; j < qu.ngens(); ++j)
      SQG_DOMAIN_CHECK(reduce(ee, a.cross[i][j]) == reduce(ee, b.cross[i][j]),
                       "square groups have different cross effects");
  std::vector<Vec> cols;
  for (size_t i = 0; i < qu.ngens(); ++i)
    cols.push_back(sub(ee, b.g.eval(unit_of(qu, i)), a.g.eval(unit_of(qu, i))));
  AbHom alpha = hom_from_cols(qu, ee, cols);
  SQG_DOMAIN_CHECK(hom_well_defined(alpha), "quadratic maps do not differ by a twist");
  SQG_DOMAIN_CHECK(qfn_equal(qfn_add_hom(a.g, alpha), b.g),
                   "quadratic maps do not differ by a twist");
  return alpha;
}

namespace {

struct LiftCore {
  AbHom h;
  Cocycle bracket_cocycle;
  Obstruction ob;
};

std::optional<LiftCore> lift_core(const PreSquareGroup& m) {
  PsgCheck pc = psg_validate(m, 0);
  SQG_DOMAIN_CHECK(pc.ok, pc.violation);
  if (!psg_invariants(m).is_psg0) return std::nullopt;
  const FgAbGroup& ctr = m.me.center_part;
  std::vector<Vec> cols;
  for (size_t k = 0; k < ctr.ngens(); ++k) {
    auto ak = hom_solve(m.p, unit_of(ctr, k));
    SQG_LOGIC_CHECK(ak.has_value(), "P is not onto the declared center");
    cols.push_back(add(m.mee, *ak, m.sigma.apply(*ak)));
  }
  LiftCore out;
  out.h = hom_from_cols(ctr, m.mee, cols);
  SQG_LOGIC_CHECK(hom_well_defined(out.h), "canonical h is not well defined");
  SQG_LOGIC_CHECK(hom_equal(compose(out.h, m.p), hom_add(hom_identity(m.mee), m.sigma)),
                  "canonical h does not satisfy hP = Id + sigma");
  SQG_LOGIC_CHECK(hom_equal(compose(m.p, compose(out.h, m.p)), hom_smul(2, m.p)),
                  "canonical h does not satisfy PhP = 2P");
  SQG_LOGIC_CHECK(hom_equal(compose(out.h, compose(m.p, out.h)), hom_smul(2, out.h)),
                  "canonical h does not satisfy hPh = 2h");
  H2Class me_cls = h2_split(m.me.f);
  out.bracket_cocycle = cocycle_bilinear(m.me.quotient, m.mee, m.bracket);
  H2Class ee_cls = h2_split(out.bracket_cocycle);
  const ExtGroup& ext = ee_cls.ext_component.ext;
  Vec pushed = ext_push(me_cls.ext_component.ext, ext, out.h, me_cls.ext_component.coords);
  H2Class diff{ExtClass{ext, sub(ext.group, ee_cls.ext_component.coords, pushed)},
               hom_sub(ee_cls.pairing_component, compose(out.h, me_cls.pairing_component))};
  bool zero = h2_is_zero(diff);
  out.ob = Obstruction{std::move(diff), zero};
  return out;
}

}  // namespace

Obstruction lift_obstruction(const PreSquareGroup& m) {
  auto core = lift_core(m);
  SQG_DOMAIN_CHECK(core.has_value(), "sigma does not invert the kernel of P");
  return core->ob;
}

LiftResult lift(const PreSquareGroup& m) {
  auto core = lift_core(m);
  if (!core) return LiftResult{LiftStatus::NotPsg0, std::nullopt, std::nullopt};
  if (!core->ob.zero) return LiftResult{LiftStatus::Obstructed, std::nullopt, core->ob};
  Cocycle target = cocycle_sub(cocycle_push(m.me.f, core->h), core->bracket_cocycle);
  auto sec = solve_coboundary(target);
  SQG_LOGIC_CHECK(sec.has_value(), "vanishing obstruction left the section equation unsolvable");
  QuadraticFn g =
      qfn_from_function(m.me.quotient, m.mee, [&](const Vec& x) { return sec->eval(x); });
  SquareGroup out{m.me, m.mee, QuadraticMap{m.me, m.mee, true, core->h, std::move(g), m.bracket, {}},
                  m.p};
  SgCheck v = sg_validate(out, 8);
  SQG_LOGIC_CHECK(v.ok, "lifted square group is invalid: " + v.violation);
  return LiftResult{LiftStatus::Lifted, std::move(out), std::nullopt};
}

OmegaLift lift_omega(const FgAbGroup& a) {
  OmegaLift out;
  out.theta = theta(a);
  if (!out.theta.zero()) {
    out.ok = false;
    return out;
  }
  CentralExtension n = canonical_TA(a);
  PreSquareGroup m = omega(n, OmegaVariant::Plain);
  auto core = lift_core(m);
  SQG_LOGIC_CHECK(core.has_value(), "universal form fails the kernel condition");
  SQG_LOGIC_CHECK(hom_is_zero(core->ob.value.pairing_component),
                  "universal form obstruction has a nonzero pairing part");
  if (!core->ob.zero) {
    FunctorValue l2 = quad_value(Functor::Lambda2, a);
    ExtGroup exl = ext_group(a, l2.group);
    const ExtGroup& exm = core->ob.value.ext_component.ext;
    std::vector<Vec> cols;
    for (size_t u = 0; u < exl.group.ngens(); ++u)
      cols.push_back(ext_push(exl, exm, core->h, unit_of(exl.group, u)));
    AbHom push = hom_from_cols(exl.group, exm.group, cols);
    SQG_LOGIC_CHECK(hom_well_defined(push), "classification pushforward is not additive");
    auto x = hom_solve(push, core->ob.value.ext_component.coords);
    SQG_LOGIC_CHECK(x.has_value(), "vanishing symmetric class left the obstruction uncorrectable");
    n = twist_TA(n, ExtClass{exl, *x});
  }
  LiftResult res = lift(omega(n, OmegaVariant::Plain));
  SQG_LOGIC_CHECK(res.status == LiftStatus::Lifted, "corrected universal form does not lift");
  out.ok = true;
  out.n = std::move(n);
  out.q = std::move(res.q);
  return out;
}

AbHom delta(const SquareGroup& q) {
  SgCheck c = sg_validate(q, 0);
  SQG_DOMAIN_CHECK(c.ok, c.violation);
  AbHom h = qmap_center_hom(q.hmap);
  PsgInvariants inv = psg_invariants(underlying_psg(q, h));
  const FgAbGroup& qu = q.qe.quotient;
  const FgAbGroup& ee = q.qee;
  auto defect = [&](const Vec& x) {
    Nil2El s = nil2_el(q.qe, x, zero_of(q.qe.center_part));
    Vec hs = sg_h_eval(q, s);
    Vec hph = h.apply(q.p.apply(hs));
    Vec hsq = sg_h_eval(q, nil2_mul(q.qe, s, s));
    return reduce(ee, add(ee, hph, sub(ee, hsq, smul(ee, 4, hs))));
  };
  std::vector<Vec> cols;
  for (size_t i = 0; i < qu.ngens(); ++i) {
    Vec d = defect(unit_of(qu, i));
    SQG_LOGIC_CHECK(is_zero(q.qe.center_part, q.p.apply(d)),
                    "degree defect escapes the kernel of P");
    auto pc = inv.pi1.coords_of(d);
    SQG_LOGIC_CHECK(pc.has_value(), "degree defect escapes the kernel of P");
    cols.push_back(*pc);
  }
  AbHom dm = hom_from_cols(qu, inv.pi1.grp, cols);
  SQG_LOGIC_CHECK(hom_well_defined(dm), "degree map is not additive");
  for (const Vec& x : rep_sample(qu, 16))
    SQG_LOGIC_CHECK(reduce(ee, inv.pi1.include(dm.apply(x))) == defect(x),
                    "degree map is not additive");
  return dm;
}

SquareGroup sg_znil() {
  FgAbGroup z = cyclic(0);
  FgAbGroup t = trivial_group();
  Nil2Group me = nil2_group(z, t, cocycle_zero(z, t));
  QuadraticFn g = qfn_zero(z, z);
  g.sq[0] = Vec{Int(1)};
  std::vector<std::vector<Vec>> cross{{Vec{Int(1)}}};
  SquareGroup out{me, z, QuadraticMap{me, z, true, hom_zero(t, z), std::move(g), std::move(cross), {}},
                  hom_zero(z, t)};
  SQG_LOGIC_CHECK(sg_validate(out, 8).ok, "built-in realizer is invalid");
  return out;
}

SquareGroup sg_two_power_cyclic(int n) {
  SQG_DOMAIN_CHECK(n >= 1 && n <= 11, "exponent out of range");
  Int two_n = Int(1) << static_cast<unsigned>(n);
  FgAbGroup qu = cyclic(two_n);
  FgAbGroup c2 = cyclic(2);
  FgAbGroup ee = cyclic(two_n * 2);
  Cocycle f = cocycle_zero(qu, c2);
  f.carry[0] = Vec{Int(1)};
  Nil2Group me = nil2_group(qu, c2, std::move(f));
  AbHom p = hom_from_cols(ee, c2, {Vec{Int(1)}});
  AbHom h = hom_from_cols(c2, ee, {Vec{two_n}});
  QuadraticFn g = qfn_zero(qu, ee);
  for (size_t t = 0; t < static_cast<size_t>(two_n); ++t) {
    Int tt(t);
    g.base[t] = Vec{tt * tt - tt};
  }
  std::vector<std::vector<Vec>> cross{{Vec{Int(2)}}};
  SquareGroup out{me, ee,
                  QuadraticMap{me, ee, true, std::move(h), std::move(g), std::move(cross), {}},
                  std::move(p)};
  SQG_LOGIC_CHECK(sg_validate(out, 8).ok, "built-in realizer is invalid");
  return out;
}

SquareGroup sg_half_invertible(const FgAbGroup& a) {
  SQG_DOMAIN_CHECK(a.is_finite() && odd_part(a.order()) == a.order(),
                   "group must have odd order");
  FgAbGroup t = trivial_group();
  Nil2Group me = nil2_group(a, t, cocycle_zero(a, t));
  QuadraticFn g = qfn_zero(a, a);
  const ElementIndex ti = element_index(a);
  for (size_t e = 0; e < ti.size; ++e) {
    Vec x = ti.element(e);
    Vec v(a.ngens());
    for (size_t i = 0; i < a.ngens(); ++i) v[i] = ((a.fac[i] - 1) / 2) * x[i];
    g.base[e] = reduce(a, v);
  }
  std::vector<std::vector<Vec>> cross(a.ngens(), std::vector<Vec>(a.ngens(), zero_of(a)));
  SquareGroup out{me, a,
                  QuadraticMap{me, a, true, hom_zero(t, a), std::move(g), std::move(cross), {}},
                  hom_zero(a, t)};
  SQG_LOGIC_CHECK(sg_validate(out, 8).ok, "built-in realizer is invalid");
  return out;
}

SquareGroup sg_stable_universal(const FgAbGroup& a) {
  std::vector<size_t> slots;
  std::vector<size_t> slot_of(a.ngens(), SIZE_MAX);
  for (size_t i = 0; i < a.ngens(); ++i)
    if (a.fac[i] == 0 || a.fac[i] % 2 == 0) {
      slot_of[i] = slots.size();
      slots.push_back(i);
    }
  const size_t ns = slots.size();
  FgAbGroup b{Vec(ns, Int(4))};
  FgAbGroup c{Vec(ns, Int(2))};
  Cocycle f = cocycle_zero(a, c);
  for (size_t i = 0; i < a.ngens(); ++i)
    if (a.fac[i] != 0 && a.fac[i] % 4 == 2) f.carry[i] = unit_of(c, slot_of[i]);
  Nil2Group me = nil2_group(a, c, std::move(f));
  std::vector<Vec> pcols, hcols;
  for (size_t k = 0; k < ns; ++k) {
    pcols.push_back(unit_of(c, k));
    hcols.push_back(smul(b, 2, unit_of(b, k)));
  }
  AbHom p = hom_from_cols(b, c, pcols);
  AbHom h = hom_from_cols(c, b, hcols);
  QuadraticFn g = qfn_zero(a, b);
  const FgAbGroup tg = torsion_part(a);
  const ElementIndex ti = element_index(tg);
  for (size_t e = 0; e < ti.size; ++e) {
    Vec x = ti.element(e);
    Vec v = zero_of(b);
    for (size_t i = 0; i < tg.ngens(); ++i)
      if (slot_of[i] != SIZE_MAX)
        v = add(b, v, smul(b, binom2(x[i]) * 2, unit_of(b, slot_of[i])));
    g.base[e] = v;
  }
  const size_t tc = a.torsion_count();
  for (size_t j = 0; j < a.free_rank(); ++j)
    g.sq[j] = smul(b, 2, unit_of(b, slot_of[tc + j]));
  std::vector<std::vector<Vec>> cross(a.ngens(), std::vector<Vec>(a.ngens(), zero_of(b)));
  for (size_t i = 0; i < a.ngens(); ++i)
    if (slot_of[i] != SIZE_MAX) cross[i][i] = smul(b, 2, unit_of(b, slot_of[i]));
  SquareGroup out{me, b,
                  QuadraticMap{me, b, true, std::move(h), std::move(g), std::move(cross), {}},
                  std::move(p)};
  SQG_LOGIC_CHECK(sg_validate(out, 8).ok, "built-in realizer is invalid");
  return out;
}

namespace {

AbHom combined_h(PsgCombine kind, const SquareGroup& m, const SquareGroup& n,
                 const PreSquareGroup& mv) {
  AbHom hm = qmap_center_hom(m.hmap);
  AbHom hn = qmap_center_hom(n.hmap);
  const FgAbGroup& cm = m.qe.center_part;
  const FgAbGroup& cn = n.qe.center_part;
  AbHom out;
  if (kind == PsgCombine::Product) {
    DirectSum dc = direct_sum({cm, cn});
    DirectSum de = direct_sum({m.qee, n.qee});
    out = hom_add(compose(de.inj[0], compose(hm, dc.proj[0])),
                  compose(de.inj[1], compose(hn, dc.proj[1])));
  } else {
    TensorGroup tmn = tensor(m.qe.quotient, n.qe.quotient);
    TensorGroup tnm = tensor(n.qe.quotient, m.qe.quotient);
    DirectSum dc = direct_sum({cm, cn, tmn.group});
    DirectSum de = direct_sum({m.qee, n.qee, tmn.group, tnm.group});
    AbHom swap_mn = hom_neg(tensor_swap(tmn, tnm));
    out = hom_add(hom_add(compose(de.inj[0], compose(hm, dc.proj[0])),
                          compose(de.inj[1], compose(hn, dc.proj[1]))),
                  hom_add(compose(de.inj[2], dc.proj[2]),
                          compose(de.inj[3], compose(swap_mn, dc.proj[2]))));
  }
  SQG_LOGIC_CHECK(out.src == mv.me.center_part && out.dst == mv.mee,
                  "combined center data is out of position");
  return out;
}

}  // namespace

SquareGroup sg_combine(PsgCombine kind, const SquareGroup& m, const SquareGroup& n) {
  PreSquareGroup mv = psg_combine(kind, wp(m), wp(n));
  LiftResult res = lift(mv);
  SQG_LOGIC_CHECK(res.status == LiftStatus::Lifted, "combined presquare group does not lift");
  AbHom hc = combined_h(kind, m, n, mv);
  SQG_LOGIC_CHECK(hom_equal(res.q->hmap.h, hc),
                  "lifted center map disagrees with the block formula");
  SQG_LOGIC_CHECK(hom_equal(compose(hc, mv.p), hom_add(hom_identity(mv.mee), mv.sigma)),
                  "block center map fails hP = Id + sigma");
  return *std::move(res.q);
}

SquareGroup sg_underline(const SquareGroup& q) {
  SgCheck c = sg_validate(q, 0);
  SQG_DOMAIN_CHECK(c.ok, c.violation);
  AbHom h = qmap_center_hom(q.hmap);
  const FgAbGroup& ee = q.qee;
  QuotientMap co = hom_cokernel(hom_sub(compose(h, q.p), hom_smul(2, hom_identity(ee))));
  AbHom proj = quotient_projection(co);
  AbHom pbar = compose(q.p, quotient_section(co));
  SQG_LOGIC_CHECK(hom_well_defined(pbar), "P does not descend to the stable quotient");
  SQG_LOGIC_CHECK(hom_equal(compose(pbar, proj), q.p), "descended P disagrees with P");
  AbHom hbar = compose(proj, h);
  SQG_LOGIC_CHECK(hom_equal(compose(hbar, pbar), hom_smul(2, hom_identity(co.grp))),
                  "stable quotient does not satisfy hP = 2 Id");
  QuadraticMap nm;
  if (q.hmap.structured) {
    QuadraticFn gbar = qfn_postcompose(proj, q.hmap.g);
    std::vector<std::vector<Vec>> cross(q.hmap.cross.size());
    for (size_t i = 0; i < q.hmap.cross.size(); ++i)
      for (const Vec& v : q.hmap.cross[i]) cross[i].push_back(proj.apply(v));
    nm = QuadraticMap{q.qe, co.grp, true, hbar, std::move(gbar), std::move(cross), {}};
  } else {
    std::vector<Vec> table = q.hmap.table;
    for (Vec& v : table) v = proj.apply(v);
    nm = QuadraticMap{q.qe, co.grp, false, {}, {}, {}, std::move(table)};
  }
  SquareGroup out{q.qe, co.grp, std::move(nm), std::move(pbar)};
  SgCheck v = sg_validate(out, 8);
  SQG_LOGIC_CHECK(v.ok, "stable quotient is invalid: " + v.violation);
  return out;
}

namespace {

std::pair<SquareGroup, AbHom> pushforward_core(const SquareGroup& q, const AbHom& f,
                                               const AbHom& involution) {
  SgCheck c = sg_validate(q, 0);
  SQG_DOMAIN_CHECK(c.ok, c.violation);
  SQG_DOMAIN_CHECK(hom_equal(involution, hom_neg(hom_identity(f.dst))),
                   "pushforward involution must be inversion");
  QuadraticMap sm = structured_qmap(q.hmap);
  PreSquareGroup m = underlying_psg(q, sm.h);
  PsgPushforward pp = psg_pushforward_map(m, f, involution);
  AbHom h2 = compose(pp.along, sm.h);
  QuadraticFn g2 = qfn_postcompose(pp.along, sm.g);
  SQG_LOGIC_CHECK(hom_equal(compose(h2, pp.m.p), hom_add(hom_identity(pp.m.mee), pp.m.sigma)),
                  "pushed center map fails hP = Id + sigma");
  SquareGroup out{pp.m.me, pp.m.mee,
                  QuadraticMap{pp.m.me, pp.m.mee, true, std::move(h2), std::move(g2),
                               pp.m.bracket, {}},
                  pp.m.p};
  SgCheck v = sg_validate(out, 8);
  SQG_LOGIC_CHECK(v.ok, "pushforward is invalid: " + v.violation);
  return {std::move(out), std::move(pp.target_inclusion)};
}

SquareGroup unit_square_group() {
  FgAbGroup t = trivial_group();
  Nil2Group me = nil2_group(t, t, cocycle_zero(t, t));
  return SquareGroup{me, t, QuadraticMap{me, t, true, hom_zero(t, t), qfn_zero(t, t), {}, {}},
                     hom_zero(t, t)};
}

// prime-power and free atoms of the invariant factors; 0 stands for Z
std::vector<Int> atom_orders(const FgAbGroup& a) {
  std::vector<Int> out;
  for (const Int& d : a.fac) {
    if (d == 0) {
      out.push_back(Int(0));
      continue;
    }
    Int odd = odd_part(d);
    if (odd != d) out.push_back(d / odd);
    if (odd > 1) out.push_back(odd);
  }
  return out;
}

struct NextMatch {
  PsgInvariants inv;
  AbHom psi2;
};

// Identifies pi1 of a pushforward result with the declared target group along
// the tracked embedding.
NextMatch match_next_group(const SquareGroup& res, const AbHom& emb, const FgAbGroup& b) {
  NextMatch out;
  out.inv = psg_invariants(underlying_psg(res, res.hmap.h));
  std::vector<Vec> cols;
  for (size_t z = 0; z < out.inv.pi1.grp.ngens(); ++z) {
    auto u = hom_solve(emb, reduce(res.qee, out.inv.pi1.include(unit_of(out.inv.pi1.grp, z))));
    SQG_LOGIC_CHECK(u.has_value(), "next group does not match the pushforward target");
    cols.push_back(*u);
  }
  out.psi2 = hom_from_cols(out.inv.pi1.grp, b, cols);
  SQG_LOGIC_CHECK(hom_well_defined(out.psi2), "next-group comparison is not additive");
  (void)hom_inverse(out.psi2);
  return out;
}

}  // namespace

SquareGroup sg_pushforward(const SquareGroup& q, const AbHom& f, const AbHom& involution) {
  return pushforward_core(q, f, involution).first;
}

SgRealization realize_sg(const KTriple& target, RealizeMode mode) {
  SQG_DOMAIN_CHECK(target.k.dst == target.pi_n1, "k must land in the declared next group");
  SQG_DOMAIN_CHECK(
      target.involution.src == target.pi_n1 && target.involution.dst == target.pi_n1,
      "involution must act on the next group");
  SQG_DOMAIN_CHECK(hom_well_defined(target.involution) && hom_well_defined(target.k),
                   "target maps must be well defined");
  SQG_DOMAIN_CHECK(hom_equal(compose(target.involution, target.involution),
                             hom_identity(target.pi_n1)),
                   "involution must square to the identity");
  const FgAbGroup& a = target.pi_n;
  SgRealization out;
  if (mode == RealizeMode::Flat23) {
    SQG_DOMAIN_CHECK(target.n == 2, "flat realization starts in degree two");
    FunctorValue gm = quad_value(Functor::Gamma, a);
    SQG_DOMAIN_CHECK(target.k.src == gm.group, "k must start on the whitehead functor value");
    SQG_DOMAIN_CHECK(hom_equal(compose(target.involution, target.k), hom_neg(target.k)),
                     "k must lie in the minus part");
    SQG_DOMAIN_CHECK(hom_is_zero(compose(target.k, nat_map(NatMapName::Iota, a))),
                     "k is not flat");
    SQG_DOMAIN_CHECK(hom_equal(target.involution, hom_neg(hom_identity(target.pi_n1))),
                     "flat realization needs the inversion involution");
    std::vector<SquareGroup> parts;
    for (const Int& d : atom_orders(a)) {
      if (d == 0) {
        parts.push_back(sg_znil());
        continue;
      }
      if (odd_part(d) == 1) {
        parts.push_back(sg_two_power_cyclic(v2(d)));
        continue;
      }
      OmegaLift ol = lift_omega(cyclic(d));
      if (!ol.ok) {
        out.ok = false;
        out.failing_summand = format_group(cyclic(d));
        out.theta_cert = std::move(ol.theta);
        return out;
      }
      parts.push_back(*std::move(ol.q));
    }
    SquareGroup all = unit_square_group();
    bool first = true;
    for (SquareGroup& part : parts) {
      if (first) {
        all = std::move(part);
        first = false;
      } else {
        all = sg_combine(PsgCombine::Coproduct, all, part);
      }
    }
    SQG_LOGIC_CHECK(all.qe.quotient == a, "recombined atoms do not give the target group");
    PsgInvariants inv = psg_invariants(wp(all));
    AbHom tau_prime = nat_map(NatMapName::TauPrime, a);
    std::vector<Vec> psi_cols;
    for (size_t z = 0; z < inv.pi1.grp.ngens(); ++z) {
      auto w = hom_solve(inv.k, unit_of(inv.pi1.grp, z));
      SQG_LOGIC_CHECK(w.has_value(), "bracket invariant misses part of the kernel");
      psi_cols.push_back(tau_prime.apply(*w));
    }
    AbHom psi = hom_from_cols(inv.pi1.grp, tau_prime.dst, psi_cols);
    SQG_LOGIC_CHECK(hom_well_defined(psi), "symmetric-quotient comparison is not additive");
    SQG_LOGIC_CHECK(hom_equal(compose(psi, inv.k), tau_prime),
                    "comparison does not carry the bracket invariant to the symmetrization");
    (void)hom_inverse(psi);
    FunctorValue ps = quad_value(Functor::Psi, a);
    std::vector<Vec> kcols;
    for (size_t u = 0; u < ps.group.ngens(); ++u) {
      auto w = hom_solve(tau_prime, unit_of(ps.group, u));
      SQG_LOGIC_CHECK(w.has_value(), "symmetrization is not surjective");
      kcols.push_back(target.k.apply(*w));
    }
    AbHom kprime = hom_from_cols(ps.group, target.pi_n1, kcols);
    SQG_LOGIC_CHECK(hom_well_defined(kprime), "k does not factor through the symmetrization");
    SQG_LOGIC_CHECK(hom_equal(compose(kprime, tau_prime), target.k),
                    "factored k disagrees with k");
    std::pair<SquareGroup, AbHom> pr =
        pushforward_core(all, compose(kprime, psi), target.involution);
    NextMatch nx = match_next_group(pr.first, pr.second, target.pi_n1);
    SQG_LOGIC_CHECK(hom_equal(compose(nx.psi2, nx.inv.k), target.k),
                    "realized invariant differs from the target");
    out.ok = true;
    out.q = std::move(pr.first);
    return out;
  }

  SQG_DOMAIN_CHECK(target.n >= 3, "stable realization starts in degree three");
  TensorGroup t2 = tensor(cyclic(2), a);
  SQG_DOMAIN_CHECK(target.k.src == t2.group, "k must start on the mod-two tensor group");
  SQG_DOMAIN_CHECK(hom_equal(target.involution, hom_identity(target.pi_n1)),
                   "stable involution must be the identity");
  for (const Int& d : target.pi_n1.fac)
    SQG_DOMAIN_CHECK(d == 2, "stable target must be an elementary 2-group");
  SquareGroup su = sg_stable_universal(a);
  PsgInvariants inv = psg_invariants(wp(su));
  std::vector<size_t> slots;
  for (size_t i = 0; i < a.ngens(); ++i)
    if (a.fac[i] == 0 || a.fac[i] % 2 == 0) slots.push_back(i);
  std::vector<Vec> icols;
  for (size_t z = 0; z < inv.pi1.grp.ngens(); ++z) {
    Vec v = reduce(su.qee, inv.pi1.include(unit_of(inv.pi1.grp, z)));
    Vec col = zero_of(t2.group);
    for (size_t k = 0; k < slots.size(); ++k) {
      SQG_LOGIC_CHECK(v[k] % 2 == 0, "kernel of the universal form is not doubly divisible");
      col = add(t2.group, col, smul(t2.group, v[k] / 2, t2.gen(0, slots[k])));
    }
    icols.push_back(col);
  }
  AbHom psi = hom_from_cols(inv.pi1.grp, t2.group, icols);
  SQG_LOGIC_CHECK(hom_well_defined(psi), "kernel comparison is not additive");
  (void)hom_inverse(psi);
  std::pair<SquareGroup, AbHom> pr =
      pushforward_core(su, compose(target.k, psi), target.involution);
  NextMatch nx = match_next_group(pr.first, pr.second, target.pi_n1);
  std::vector<Vec> kimg(a.ngens());
  for (size_t i = 0; i < a.ngens(); ++i) {
    Vec cr = reduce(pr.first.qee, pr.first.hmap.cross[i][i]);
    auto pc = nx.inv.pi1.coords_of(cr);
    SQG_LOGIC_CHECK(pc.has_value(), "diagonal bracket misses the kernel");
    kimg[t2.sidx(0, i)] = nx.psi2.apply(*pc);
  }
  AbHom kst = hom_from_struct(t2.group, t2.proj, t2.lift, target.pi_n1, kimg);
  SQG_LOGIC_CHECK(hom_equal(kst, target.k), "realized stable invariant differs from the target");
  out.ok = true;
  out.q = std::move(pr.first);
  return out;
}

namespace {

// Product of two square groups with the degree map forced block diagonal.
SquareGroup delta_product(const SquareGroup& m, const SquareGroup& n) {
  PreSquareGroup pm = wp(m);
  PreSquareGroup pn = wp(n);
  PreSquareGroup mv = psg_combine(PsgCombine::Product, pm, pn);
  LiftResult res = lift(mv);
  SQG_LOGIC_CHECK(res.status == LiftStatus::Lifted, "product presquare group does not lift");
  AbHom hc = combined_h(PsgCombine::Product, m, n, mv);
  SQG_LOGIC_CHECK(hom_equal(res.q->hmap.h, hc),
                  "lifted center map disagrees with the block formula");
  PsgInvariants im = psg_invariants(pm);
  PsgInvariants in_ = psg_invariants(pn);
  PsgInvariants iv = psg_invariants(mv);
  DirectSum dq = direct_sum({pm.me.quotient, pn.me.quotient});
  DirectSum de = direct_sum({pm.mee, pn.mee});
  AbHom dm = compose(subgroup_inclusion(im.pi1), delta(m));
  AbHom dn = compose(subgroup_inclusion(in_.pi1), delta(n));
  AbHom dtarget = hom_add(compose(de.inj[0], compose(dm, dq.proj[0])),
                          compose(de.inj[1], compose(dn, dq.proj[1])));
  AbHom dcur = compose(subgroup_inclusion(iv.pi1), delta(*res.q));
  HomGroup hg = hom_group(mv.me.quotient, mv.mee);
  auto rhs = hg.from_hom(hom_sub(dtarget, dcur));
  SQG_LOGIC_CHECK(rhs.has_value(), "degree correction is not a homomorphism");
  std::vector<Vec> tcols;
  for (size_t u = 0; u < hg.group.ngens(); ++u) {
    AbHom au = hg.to_hom(unit_of(hg.group, u));
    auto w = hg.from_hom(hom_sub(compose(mv.sigma, au), au));
    SQG_LOGIC_CHECK(w.has_value(), "twisted correction is not a homomorphism");
    tcols.push_back(*w);
  }
  AbHom tmap = hom_from_cols(hg.group, hg.group, tcols);
  SQG_LOGIC_CHECK(hom_well_defined(tmap), "correction operator is not additive");
  auto x = hom_solve(tmap, *rhs);
  SQG_LOGIC_CHECK(x.has_value(), "product degree correction is unsolvable");
  SquareGroup out = sg_twist(*res.q, hg.to_hom(*x));
  AbHom dfinal = compose(subgroup_inclusion(iv.pi1), delta(out));
  SQG_LOGIC_CHECK(hom_equal(dfinal, dtarget), "corrected product degree map is off target");
  return out;
}

}  // namespace

SgRealization realize_delta(const AbHom& f) {
  SQG_DOMAIN_CHECK(hom_well_defined(f), "map is not well defined");
  const FgAbGroup& a = f.src;
  std::vector<SquareGroup> parts;
  for (const Int& d : atom_orders(a)) {
    if (d == 0)
      parts.push_back(sg_znil());
    else if (odd_part(d) == 1)
      parts.push_back(sg_two_power_cyclic(v2(d)));
    else
      parts.push_back(sg_half_invertible(cyclic(d)));
  }
  SquareGroup all = unit_square_group();
  bool first = true;
  for (SquareGroup& part : parts) {
    if (first) {
      all = std::move(part);
      first = false;
    } else {
      all = delta_product(all, part);
    }
  }
  SQG_LOGIC_CHECK(all.qe.quotient == a, "recombined atoms do not give the source group");
  AbHom dall = delta(all);
  AbHom dinv = hom_inverse(dall);
  std::pair<SquareGroup, AbHom> pr =
      pushforward_core(all, compose(f, dinv), hom_neg(hom_identity(f.dst)));
  NextMatch nx = match_next_group(pr.first, pr.second, f.dst);
  AbHom dres = delta(pr.first);
  SQG_LOGIC_CHECK(hom_equal(compose(nx.psi2, dres), f),
                  "realized degree map differs from the target");
  SgRealization out;
  out.ok = true;
  out.q = std::move(pr.first);
  return out;
}

}  // namespace sqg
