#include <random>

#include "doctest.h"
#include "sqg/nil2.hpp"

using namespace sqg;

namespace {

FgAbGroup G(const std::string& text) { return parse_group(text); }

std::mt19937 rng(20260815);

Vec random_element(const FgAbGroup& g) {
  Vec v(g.ngens());
  for (size_t i = 0; i < g.ngens(); ++i) {
    if (g.fac[i] == 0) {
      v[i] = static_cast<int>(rng() % 11) - 5;
    } else {
      v[i] = static_cast<long>(rng() % static_cast<unsigned long>(g.fac[i].convert_to<unsigned long>()));
    }
  }
  return reduce(g, v);
}

bool cocycles_equal(const Cocycle& f, const Cocycle& g) {
  if (!(f.q == g.q) || !(f.c == g.c)) return false;
  if (f.structured && g.structured) {
    for (size_t i = 0; i < f.q.ngens(); ++i) {
      if (reduce(f.c, f.carry[i]) != reduce(f.c, g.carry[i])) return false;
      for (size_t j = 0; j < f.q.ngens(); ++j)
        if (reduce(f.c, f.bil[i][j]) != reduce(f.c, g.bil[i][j])) return false;
    }
    return true;
  }
  Cocycle ft = cocycle_to_table(f);
  Cocycle gt = cocycle_to_table(g);
  return ft.table == gt.table;
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

OneCochain random_table_cochain(const FgAbGroup& q, const FgAbGroup& c) {
  ElementIndex ei = element_index(q);
  OneCochain g;
  g.q = q;
  g.c = c;
  g.structured = false;
  g.table.assign(ei.size, zero_of(c));
  for (size_t i = 1; i < ei.size; ++i) g.table[i] = random_element(c);
  return g;
}

ExtClass ext_neg(const ExtClass& x) {
  return ExtClass{x.ext, neg(x.ext.group, x.coords)};
}

}  // namespace

TEST_CASE("cocycle builders validate and evaluate") {
  FgAbGroup z2 = G("Z/2"), z3 = G("Z/3");

  Cocycle mul2 = cocycle_bilinear(z2, z2, {{Vec{1}}});
  CHECK(cocycle_valid(mul2));
  CHECK(mul2.eval(Vec{1}, Vec{1}) == Vec{1});
  CHECK(mul2.eval(Vec{0}, Vec{1}) == Vec{0});
  CHECK(mul2.eval(Vec{3}, Vec{5}) == Vec{1});

  Cocycle tab = cocycle_to_table(mul2);
  CHECK(cocycle_valid(tab));
  for (const Vec& x : all_elements(z2))
    for (const Vec& y : all_elements(z2)) CHECK(tab.eval(x, y) == mul2.eval(x, y));
  CHECK(cocycles_equal(cocycle_from_table(z2, z2, tab.table), tab));

  Cocycle bad_order = cocycle_bilinear(z2, z3, {{Vec{1}}});
  CHECK_FALSE(cocycle_valid(bad_order));

  Cocycle free_carry = cocycle_zero(G("Z"), z2);
  free_carry.carry[0] = Vec{1};
  CHECK_FALSE(cocycle_valid(free_carry));

  Cocycle unnormalized = cocycle_from_table(
      z2, z2, {Vec{0}, Vec{1}, Vec{0}, Vec{0}});
  CHECK_FALSE(cocycle_valid(unnormalized));

  std::vector<Vec> t9(9, Vec{0});
  t9[1 * 3 + 2] = Vec{1};
  CHECK_FALSE(cocycle_valid(cocycle_from_table(z3, z3, t9)));

  CHECK_THROWS_AS(cocycle_to_table(cocycle_zero(G("Z"), z2)), DomainError);
  CHECK_THROWS_AS(cocycle_from_table(z2, z2, {Vec{0}}), InputError);
  CHECK_THROWS_AS(cocycle_add(mul2, cocycle_zero(z3, z3)), DomainError);
}

TEST_CASE("multiplication cocycle on Z/2 builds the cyclic group of order 4") {
  FgAbGroup z2 = G("Z/2");
  Cocycle f = cocycle_bilinear(z2, z2, {{Vec{1}}});
  Nil2Group n = nil2_group(z2, z2, f);
  CHECK(nil2_validate(n));

  Nil2El a = nil2_el(n, Vec{1}, Vec{0});
  CHECK(nil2_order(n, a) == 4);
  CHECK(nil2_el_equal(n, nil2_pow(n, a, 2), nil2_el(n, Vec{0}, Vec{1})));
  CHECK(nil2_el_equal(n, nil2_pow(n, a, 4), nil2_id(n)));
  CHECK(nil2_is_central(n, a));

  H2Class h = h2_split(f);
  CHECK(hom_is_zero(h.pairing_component));
  CHECK_FALSE(h.ext_component.zero());
  CHECK_FALSE(h2_is_zero(h));
  CHECK_FALSE(solve_coboundary(f).has_value());
}

TEST_CASE("Z/2 has exactly two classes over Z/2") {
  FgAbGroup z2 = G("Z/2");
  std::vector<Cocycle> valid;
  for (int bits = 0; bits < 16; ++bits) {
    std::vector<Vec> table;
    for (int k = 0; k < 4; ++k) table.push_back(Vec{(bits >> k) & 1});
    Cocycle f = cocycle_from_table(z2, z2, table);
    if (cocycle_valid(f)) valid.push_back(f);
  }
  REQUIRE(valid.size() == 2);
  H2Class h0 = h2_split(valid[0]);
  H2Class h1 = h2_split(valid[1]);
  CHECK_FALSE(h2_equal(h0, h1));
  CHECK(h2_is_zero(h0) != h2_is_zero(h1));
  CHECK(enumerate_classes(z2, z2).size() == 2);
}

TEST_CASE("canonical extension has identity pairing and zero restriction") {
  for (const char* name :
       {"Z/2", "Z/2 + Z/2", "Z/4 + Z/2", "Z/2 + Z/3 + Z/4", "Z + Z/2", "Z + Z"}) {
    CAPTURE(name);
    FgAbGroup a = G(name);
    CentralExtension n = canonical_TA(a);
    FgAbGroup l2 = quad_value(Functor::Lambda2, a).group;
    CHECK(n.total.center_part == l2);
    CHECK(nil2_validate(n.total));
    CHECK(cocycle_valid(n.total.f));

    H2Class h = h2_split(n.total.f);
    CHECK(hom_equal(h.pairing_component, hom_identity(l2)));
    CHECK(h.ext_component.zero());
  }
}

TEST_CASE("commutators in the canonical extension recover the wedge") {
  FgAbGroup a = G("Z/2 + Z/2");
  CentralExtension n = canonical_TA(a);
  FgAbGroup l2 = n.total.center_part;
  REQUIRE(l2.order() == 2);

  Nil2El e0 = nil2_el(n.total, Vec{1, 0}, zero_of(l2));
  Nil2El e1 = nil2_el(n.total, Vec{0, 1}, zero_of(l2));
  Nil2El c = nil2_commutator(n.total, e0, e1);
  CHECK(is_zero(a, c.q));
  CHECK(c.c == Vec{1});
  CHECK(nil2_el_equal(n.total, nil2_commutator(n.total, e0, e0), nil2_id(n.total)));
  CHECK_FALSE(nil2_is_central(n.total, e0));
  CHECK(nil2_is_central(n.total, nil2_el(n.total, Vec{0, 0}, Vec{1})));
}

TEST_CASE("canonical extension of Z^2 is the discrete Heisenberg group") {
  FgAbGroup z2free = G("Z + Z");
  CentralExtension n = canonical_TA(z2free);
  REQUIRE(format_group(n.total.center_part) == "Z");

  Nil2El x = nil2_el(n.total, Vec{1, 0}, Vec{0});
  Nil2El y = nil2_el(n.total, Vec{0, 1}, Vec{0});
  Nil2El c = nil2_commutator(n.total, x, y);
  CHECK(is_zero(z2free, c.q));
  CHECK(c.c[0] != 0);
  CHECK(nil2_order(n.total, x) == 0);
  CHECK(nil2_order(n.total, c) == 0);
  CHECK(nil2_is_central(n.total, c));
  CHECK_FALSE(nil2_is_central(n.total, x));

  for (int trial = 0; trial < 20; ++trial) {
    Nil2El p = nil2_el(n.total, random_element(z2free), random_element(n.total.center_part));
    Nil2El q = nil2_el(n.total, random_element(z2free), random_element(n.total.center_part));
    Nil2El r = nil2_el(n.total, random_element(z2free), random_element(n.total.center_part));
    CHECK(nil2_el_equal(n.total, nil2_mul(n.total, nil2_mul(n.total, p, q), r),
                        nil2_mul(n.total, p, nil2_mul(n.total, q, r))));
    CHECK(nil2_el_equal(n.total, nil2_mul(n.total, p, nil2_inv(n.total, p)), nil2_id(n.total)));
    Nil2El comm = nil2_commutator(n.total, p, q);
    Vec direct = sub(n.total.center_part, n.total.f.eval(p.q, q.q), n.total.f.eval(q.q, p.q));
    CHECK(nil2_el_equal(n.total, comm, Nil2El{zero_of(z2free), direct}));
    CHECK(nil2_el_equal(n.total, nil2_pow(n.total, p, 5),
                        nil2_mul(n.total, nil2_pow(n.total, p, 2), nil2_pow(n.total, p, 3))));
    CHECK(nil2_el_equal(n.total, nil2_pow(n.total, p, -2),
                        nil2_inv(n.total, nil2_pow(n.total, p, 2))));
  }
}

TEST_CASE("group law respects element orders on a finite twisted example") {
  FgAbGroup q = G("Z/2 + Z/4"), c = G("Z/4");
  for (const H2Class& h : enumerate_classes(q, c)) {
    Cocycle f = class_to_cocycle(h);
    Nil2Group n = nil2_group(q, c, f);
    REQUIRE(nil2_validate(n));
    for (int trial = 0; trial < 4; ++trial) {
      Nil2El a = nil2_el(n, random_element(q), random_element(c));
      Nil2El b = nil2_el(n, random_element(q), random_element(c));
      Nil2El ab = nil2_mul(n, a, b);
      CHECK(nil2_el_equal(n, nil2_mul(n, ab, nil2_inv(n, b)), a));
      Int o = nil2_order(n, a);
      REQUIRE(o != 0);
      CHECK(nil2_el_equal(n, nil2_pow(n, a, o), nil2_id(n)));
      CHECK((n.quotient.order() * n.center_part.order()) % o == 0);
    }
  }
}

TEST_CASE("class representatives round trip through the splitting") {
  for (const char* qname :
       {"Z/2", "Z/4", "Z/2 + Z/2", "Z/8", "Z/2 + Z/4", "Z/16", "Z/2 + Z/2 + Z/2"}) {
    for (const char* cname : {"Z/2", "Z/3", "Z/4"}) {
      CAPTURE(qname);
      CAPTURE(cname);
      FgAbGroup q = G(qname), c = G(cname);
      for (const H2Class& h : enumerate_classes(q, c)) {
        Cocycle f = class_to_cocycle(h);
        REQUIRE(cocycle_valid(f));
        CHECK(h2_equal(h2_split(f), h));
        CHECK(h2_equal(h2_split(cocycle_to_table(f)), h));
      }
    }
  }
}

TEST_CASE("coboundaries solve exactly when the class vanishes") {
  for (const char* qname : {"Z/2", "Z/4", "Z/2 + Z/2", "Z/8", "Z/2 + Z/4"}) {
    for (const char* cname : {"Z/2", "Z/3", "Z/4", "Z/2 + Z/2"}) {
      CAPTURE(qname);
      CAPTURE(cname);
      FgAbGroup q = G(qname), c = G(cname);
      for (const H2Class& h : enumerate_classes(q, c)) {
        Cocycle f = class_to_cocycle(h);
        std::optional<OneCochain> g = solve_coboundary(f);
        CHECK(g.has_value() == h2_is_zero(h));
        if (g) CHECK(cocycles_equal(coboundary(*g), f));

        Cocycle ft = cocycle_to_table(f);
        std::optional<OneCochain> gt = solve_coboundary(ft);
        CHECK(gt.has_value() == h2_is_zero(h));
        if (gt) CHECK(cocycles_equal(coboundary(*gt), ft));

        Cocycle twisted = cocycle_add(f, coboundary(random_table_cochain(q, c)));
        std::optional<OneCochain> gw = solve_coboundary(twisted);
        CHECK(gw.has_value() == h2_is_zero(h));
        if (gw) CHECK(cocycles_equal(coboundary(*gw), twisted));
        CHECK(h2_equal(h2_split(twisted), h));
      }
    }
  }
}

TEST_CASE("structured solving works over an infinite base") {
  FgAbGroup q = G("Z + Z/2"), c = G("Z/2");
  ExtGroup e = ext_group(q, c);
  REQUIRE(e.group.order() == 2);

  Cocycle f0 = class_to_cocycle(H2Class{ExtClass{e, zero_of(e.group)},
                                        hom_zero(quad_value(Functor::Lambda2, q).group, c)});
  std::optional<OneCochain> g = solve_coboundary(f0);
  REQUIRE(g.has_value());
  CHECK(cocycles_equal(coboundary(*g), f0));

  Cocycle f1 = class_to_cocycle(H2Class{ExtClass{e, Vec{1}},
                                        hom_zero(quad_value(Functor::Lambda2, q).group, c)});
  CHECK_FALSE(solve_coboundary(f1).has_value());
  CHECK_FALSE(h2_split(f1).ext_component.zero());
}

TEST_CASE("twisting shifts the difference class") {
  for (const char* name : {"Z/4", "Z/2 + Z/4", "Z/2 + Z/6"}) {
    CAPTURE(name);
    FgAbGroup a = G(name);
    CentralExtension n = canonical_TA(a);
    ExtGroup e = ext_group(a, n.total.center_part);
    for (const Vec& coords : all_elements(e.group)) {
      ExtClass x{e, coords};
      CentralExtension m = twist_TA(n, x);
      CHECK(nil2_validate(m.total));

      ExtClass d = ta_difference(m, n);
      CHECK(reduce(d.ext.group, d.coords) == reduce(e.group, coords));
      CHECK(ta_difference(n, m).coords == reduce(e.group, neg(e.group, coords)));
      CHECK(ta_difference(twist_TA(m, ext_neg(x)), n).zero());

      H2Class hm = h2_split(m.total.f);
      CHECK(hom_equal(hm.pairing_component, hom_identity(n.total.center_part)));
      CHECK(reduce(e.group, hm.ext_component.coords) == reduce(e.group, coords));
    }
  }
}

TEST_CASE("mismatched data is rejected") {
  FgAbGroup z2 = G("Z/2"), z4 = G("Z/4");
  Cocycle f = cocycle_zero(z2, z2);
  CHECK_THROWS_AS(nil2_group(z4, z2, f), InputError);
  CHECK_THROWS_AS(nil2_group(z2, z4, f), InputError);

  Nil2Group n = nil2_group(z2, z2, f);
  n.f.bil[0][0] = Vec{1, 0};
  CHECK_FALSE(nil2_validate(n));

  CHECK_THROWS_AS(h2_split(cocycle_bilinear(z2, G("Z/3"), {{Vec{1}}})), DomainError);

  CentralExtension c2 = canonical_TA(G("Z/2 + Z/2"));
  ExtGroup wrong = ext_group(z4, c2.total.center_part);
  CHECK_THROWS_AS(twist_TA(c2, ExtClass{wrong, zero_of(wrong.group)}), DomainError);
  CHECK_THROWS_AS(ta_difference(c2, canonical_TA(G("Z/2 + Z/4"))), DomainError);
}
