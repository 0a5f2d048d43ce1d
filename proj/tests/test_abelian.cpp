#include "doctest.h"
#include "sqg/abelian.hpp"

#include <random>

using namespace sqg;

namespace {

Mat random_mat(std::mt19937_64& rng, size_t rows, size_t cols, int span) {
  std::uniform_int_distribution<int> d(-span, span);
  Mat m(rows, cols);
  for (auto& e : m.a) e = d(rng);
  return m;
}

bool divisibility_chain(const Mat& s) {
  size_t n = std::min(s.rows, s.cols);
  for (size_t i = 0; i < n; ++i) {
    for (size_t j = 0; j < s.cols; ++j)
      if (j != i && s.at(i, j) != 0) return false;
    for (size_t j = 0; j < s.rows; ++j)
      if (j != i && s.at(j, i) != 0) return false;
    if (s.at(i, i) < 0) return false;
    if (i + 1 < n) {
      if (s.at(i, i) == 0 && s.at(i + 1, i + 1) != 0) return false;
      if (s.at(i, i) != 0 && s.at(i + 1, i + 1) % s.at(i, i) != 0) return false;
    }
  }
  return true;
}

}  // namespace

TEST_CASE("smith normal form invariants") {
  std::mt19937_64 rng(12345);
  std::vector<Mat> cases;
  cases.push_back(Mat::zero(3, 3));
  cases.push_back(Mat::identity(4));
  {
    Mat m(2, 2);
    m.at(0, 0) = 2;
    m.at(0, 1) = 4;
    m.at(1, 0) = 4;
    m.at(1, 1) = 2;
    cases.push_back(m);
  }
  cases.push_back(Mat::zero(0, 0));
  cases.push_back(Mat::zero(3, 0));
  cases.push_back(Mat::zero(0, 3));
  for (int i = 0; i < 40; ++i) {
    size_t r = 1 + static_cast<size_t>(rng() % 6);
    size_t c = 1 + static_cast<size_t>(rng() % 6);
    cases.push_back(random_mat(rng, r, c, 9));
  }
  for (const Mat& m : cases) {
    SmithResult sm = smith(m);
    CHECK(mat_mul(mat_mul(sm.u, m), sm.v) == sm.s);
    CHECK(divisibility_chain(sm.s));
    CHECK(mat_mul(sm.u, sm.uinv) == Mat::identity(m.rows));
    CHECK(mat_mul(sm.uinv, sm.u) == Mat::identity(m.rows));
    CHECK(mat_mul(sm.v, sm.vinv) == Mat::identity(m.cols));
    CHECK(mat_mul(sm.vinv, sm.v) == Mat::identity(m.cols));
  }
}

TEST_CASE("kernel and column lattices") {
  std::mt19937_64 rng(777);
  for (int i = 0; i < 25; ++i) {
    size_t r = 1 + static_cast<size_t>(rng() % 5);
    size_t c = 1 + static_cast<size_t>(rng() % 5);
    Mat m = random_mat(rng, r, c, 6);
    Mat k = kernel_lattice(m);
    CHECK(mat_mul(m, k).is_zero());
    CHECK(k.cols == m.cols - smith(m).rank);
    // every column of m lies in the column lattice
    Mat b = column_lattice(m);
    for (size_t j = 0; j < m.cols; ++j)
      CHECK(solve_integer(b, get_col(m, j)).has_value());
    // and conversely
    for (size_t j = 0; j < b.cols; ++j)
      CHECK(solve_integer(m, get_col(b, j)).has_value());
  }
}

TEST_CASE("integer solve") {
  Mat m(2, 2);
  m.at(0, 0) = 2;
  m.at(1, 1) = 3;
  CHECK(solve_integer(m, Vec{4, 9}).has_value());
  CHECK(!solve_integer(m, Vec{3, 9}).has_value());
  std::mt19937_64 rng(999);
  for (int i = 0; i < 25; ++i) {
    size_t r = 1 + static_cast<size_t>(rng() % 5);
    size_t c = 1 + static_cast<size_t>(rng() % 5);
    Mat a = random_mat(rng, r, c, 5);
    Vec x(c);
    for (auto& e : x) e = static_cast<int>(rng() % 7) - 3;
    Vec b = mat_apply(a, x);
    auto sol = solve_integer(a, b);
    REQUIRE(sol.has_value());
    CHECK(mat_apply(a, *sol) == b);
  }
}

TEST_CASE("group canonicalization") {
  CHECK(parse_group("Z/4Z + Z/6Z") == parse_group("Z/2Z + Z/12Z"));
  CHECK(format_group(parse_group("Z/4 + Z/6")) == "Z/2Z + Z/12Z");
  CHECK(format_group(parse_group("Z^2 + Z/3")) == "Z/3Z + Z + Z");
  CHECK(format_group(parse_group("0")) == "0");
  CHECK(format_group(parse_group("Z/1Z")) == "0");
  CHECK(parse_group("Z/2Z^3").fac == Vec{2, 2, 2});
  CHECK(parse_group("Z").free_rank() == 1);
  CHECK(parse_group("Z/12Z").order() == 12);
  CHECK_THROWS_AS(parse_group("Q"), InputError);
  CHECK_THROWS_AS(parse_group("Z/"), InputError);
  CHECK_THROWS_AS(parse_group("Z/0Z"), InputError);
  CHECK_THROWS_AS(parse_group("Z + "), InputError);
  CHECK_THROWS_AS(parse_group("Z junk"), InputError);
}

TEST_CASE("group relations give projection and section") {
  Mat rels(2, 2);
  rels.at(0, 0) = 4;
  rels.at(1, 1) = 6;
  GroupFromRelations q = group_from_relations(2, rels);
  CHECK(q.group == parse_group("Z/2Z + Z/12Z"));
  CHECK(mat_mul(q.proj, q.lift) == Mat::identity(2));
  // relations map to zero
  Mat pr = mat_mul(q.proj, rels);
  for (size_t j = 0; j < pr.cols; ++j) CHECK(is_zero(q.group, get_col(pr, j)));
  // a generator and its lift agree after projection
  for (size_t i = 0; i < q.group.ngens(); ++i) {
    Vec e = unit_of(q.group, i);
    CHECK(reduce(q.group, mat_apply(q.proj, mat_apply(q.lift, e))) == e);
  }
}

TEST_CASE("element arithmetic and orders") {
  FgAbGroup g = parse_group("Z/12Z + Z");
  Vec x{8, 0};
  CHECK(element_order(g, x) == 3);
  CHECK(element_order(g, Vec{0, 1}) == 0);
  CHECK(element_order(g, zero_of(g)) == 1);
  CHECK(is_zero(g, smul(g, 3, x)));
  FgAbGroup h = parse_group("Z/2Z + Z/4Z");
  CHECK(all_elements(h).size() == 8);
  CHECK_THROWS_AS(all_elements(g), DomainError);
}

TEST_CASE("hom analysis on a cyclic map") {
  FgAbGroup a = parse_group("Z/12Z");
  FgAbGroup b = parse_group("Z/18Z");
  AbHom f = hom_from_cols(a, b, {Vec{3}});
  REQUIRE(hom_well_defined(f));
  HomAnalysis an = hom_analysis(f);
  CHECK(an.kernel.grp == parse_group("Z/2Z"));
  CHECK(an.image.grp == parse_group("Z/6Z"));
  CHECK(an.coker.grp == parse_group("Z/3Z"));
  // kernel generators map to zero, image generators are hit
  for (size_t j = 0; j < an.kernel.grp.ngens(); ++j)
    CHECK(is_zero(b, f.apply(get_col(an.kernel.gens, j))));
  for (size_t j = 0; j < an.image.grp.ngens(); ++j)
    CHECK(hom_solve(f, get_col(an.image.gens, j)).has_value());
  auto x = hom_solve(f, Vec{6});
  REQUIRE(x.has_value());
  CHECK(f.apply(*x) == Vec{6});
  CHECK(!hom_solve(f, Vec{1}).has_value());
}

TEST_CASE("hom analysis with free parts") {
  FgAbGroup z = parse_group("Z");
  AbHom f = hom_from_cols(z, parse_group("Z/5Z"), {Vec{1}});
  HomAnalysis an = hom_analysis(f);
  CHECK(an.kernel.grp == parse_group("Z"));
  CHECK(abs(an.kernel.gens.at(0, 0)) == 5);
  CHECK(an.image.grp == parse_group("Z/5Z"));
  CHECK(an.coker.grp.is_trivial());

  AbHom g = hom_from_cols(parse_group("Z + Z"), z, {Vec{2}, Vec{4}});
  HomAnalysis an2 = hom_analysis(g);
  CHECK(an2.kernel.grp == parse_group("Z"));
  CHECK(an2.image.grp == parse_group("Z"));
  CHECK(an2.coker.grp == parse_group("Z/2Z"));
}

TEST_CASE("order law for finite homs") {
  std::mt19937_64 rng(4242);
  std::vector<FgAbGroup> pool = {parse_group("Z/4Z"), parse_group("Z/2Z + Z/8Z"),
                                 parse_group("Z/3Z + Z/9Z"), parse_group("Z/6Z")};
  for (int i = 0; i < 20; ++i) {
    const FgAbGroup& a = pool[rng() % pool.size()];
    const FgAbGroup& b = pool[rng() % pool.size()];
    // build a random well-defined map: generator j goes to a multiple of
    // (order of b-component / gcd) in each coordinate
    Mat m(b.ngens(), a.ngens());
    for (size_t j = 0; j < a.ngens(); ++j)
      for (size_t r = 0; r < b.ngens(); ++r) {
        Int step = b.fac[r] / gcd_int(a.fac[j], b.fac[r]);
        m.at(r, j) = step * static_cast<int>(rng() % 5);
      }
    AbHom f{a, b, m};
    REQUIRE(hom_well_defined(f));
    HomAnalysis an = hom_analysis(f);
    CHECK(an.kernel.grp.order() * an.image.grp.order() == a.order());
    CHECK(an.image.grp.order() * an.coker.grp.order() == b.order());
  }
}

TEST_CASE("subgroup coordinates") {
  FgAbGroup g = parse_group("Z/4Z + Z/8Z");
  Subgroup s = subgroup_from_gens(g, {Vec{2, 0}, Vec{0, 4}});
  CHECK(s.grp == parse_group("Z/2Z + Z/2Z"));
  auto c = s.coords_of(Vec{2, 4});
  REQUIRE(c.has_value());
  CHECK(s.include(*c) == Vec{2, 4});
  CHECK(!s.coords_of(Vec{1, 0}).has_value());
}

TEST_CASE("direct sum structure maps") {
  FgAbGroup a = parse_group("Z/4Z");
  FgAbGroup b = parse_group("Z/6Z + Z");
  DirectSum ds = direct_sum({a, b});
  CHECK(ds.group == parse_group("Z/2Z + Z/12Z + Z"));
  CHECK(hom_equal(compose(ds.proj[0], ds.inj[0]), hom_identity(a)));
  CHECK(hom_equal(compose(ds.proj[1], ds.inj[1]), hom_identity(b)));
  CHECK(hom_is_zero(compose(ds.proj[0], ds.inj[1])));
  CHECK(hom_is_zero(compose(ds.proj[1], ds.inj[0])));
  AbHom idsum = hom_add(compose(ds.inj[0], ds.proj[0]), compose(ds.inj[1], ds.proj[1]));
  CHECK(hom_equal(idsum, hom_identity(ds.group)));
}

TEST_CASE("tensor group and pairing") {
  FgAbGroup a = parse_group("Z/4Z");
  FgAbGroup b = parse_group("Z/6Z");
  TensorGroup t = tensor(a, b);
  CHECK(t.group == parse_group("Z/2Z"));
  CHECK(tensor(parse_group("Z"), b).group == b);
  CHECK(tensor(parse_group("Z + Z/2Z"), parse_group("Z + Z/4Z")).group ==
        parse_group("Z/2Z + Z/2Z + Z/4Z + Z"));

  // bilinearity on samples
  std::mt19937_64 rng(31337);
  FgAbGroup c = parse_group("Z/2Z + Z/8Z");
  FgAbGroup d = parse_group("Z/4Z + Z/4Z");
  TensorGroup cd = tensor(c, d);
  for (int i = 0; i < 16; ++i) {
    Vec x{Int(rng() % 2), Int(rng() % 8)};
    Vec x2{Int(rng() % 2), Int(rng() % 8)};
    Vec y{Int(rng() % 4), Int(rng() % 4)};
    Vec lhs = cd.pair(add(c, x, x2), y);
    Vec rhs = add(cd.group, cd.pair(x, y), cd.pair(x2, y));
    CHECK(lhs == rhs);
  }

  TensorGroup dc = tensor(d, c);
  AbHom sw = tensor_swap(cd, dc);
  AbHom sw2 = tensor_swap(dc, cd);
  CHECK(hom_equal(compose(sw2, sw), hom_identity(cd.group)));
  for (int i = 0; i < 8; ++i) {
    Vec x{Int(rng() % 2), Int(rng() % 8)};
    Vec y{Int(rng() % 4), Int(rng() % 4)};
    CHECK(sw.apply(cd.pair(x, y)) == dc.pair(y, x));
  }
}

TEST_CASE("tensor of homs") {
  FgAbGroup a = parse_group("Z/4Z");
  FgAbGroup b = parse_group("Z/8Z");
  TensorGroup s = tensor(a, a);
  TensorGroup t = tensor(b, b);
  AbHom f = hom_from_cols(a, b, {Vec{2}});
  AbHom ff = tensor_hom(s, t, f, f);
  CHECK(hom_well_defined(ff));
  for (Int x = 0; x < 4; ++x)
    for (Int y = 0; y < 4; ++y)
      CHECK(ff.apply(s.pair(Vec{x}, Vec{y})) == t.pair(f.apply(Vec{x}), f.apply(Vec{y})));
}

TEST_CASE("hom group evaluation") {
  FgAbGroup a = parse_group("Z/4Z + Z/6Z");
  FgAbGroup b = parse_group("Z/8Z");
  HomGroup h = hom_group(a, b);
  CHECK(h.group == parse_group("Z/2Z + Z/4Z"));
  CHECK(hom_group(parse_group("Z"), b).group == b);
  CHECK(hom_group(parse_group("Z/4Z"), parse_group("Z")).group.is_trivial());

  // every element evaluates to a well-defined hom, and from_hom inverts
  for (const Vec& x : all_elements(h.group)) {
    AbHom f = h.to_hom(x);
    CHECK(hom_well_defined(f));
    auto back = h.from_hom(f);
    REQUIRE(back.has_value());
    CHECK(*back == x);
  }
}

TEST_CASE("ext group classification") {
  FgAbGroup a = parse_group("Z/4Z");
  CHECK(ext_group(a, parse_group("Z/6Z")).group == parse_group("Z/2Z"));
  CHECK(ext_group(parse_group("Z"), parse_group("Z/6Z")).group.is_trivial());
  CHECK(ext_group(a, parse_group("Z")).group == parse_group("Z/4Z"));

  FgAbGroup b = parse_group("Z/2Z + Z/8Z");
  ExtGroup e = ext_group(parse_group("Z/4Z + Z/3Z"), b);
  // classification round trip on every element
  for (const Vec& x : all_elements(e.group)) {
    CHECK(e.from_classification(e.to_classification(x)) == x);
  }

  // pushforward along reduction Z/8Z -> Z/4Z
  FgAbGroup b2 = parse_group("Z/4Z");
  ExtGroup e1 = ext_group(a, parse_group("Z/8Z"));
  ExtGroup e2 = ext_group(a, b2);
  AbHom red = hom_from_cols(parse_group("Z/8Z"), b2, {Vec{1}});
  Vec gen = unit_of(e1.group, 0);
  Vec pushed = ext_push(e1, e2, red, gen);
  CHECK(e2.group == parse_group("Z/4Z"));
  CHECK(pushed == Vec{1});
}

TEST_CASE("hom direct sum blocks") {
  AbHom f = hom_from_cols(parse_group("Z/4Z"), parse_group("Z/8Z"), {Vec{2}});
  AbHom g = hom_from_cols(parse_group("Z"), parse_group("Z/3Z"), {Vec{1}});
  AbHom s = hom_direct_sum(f, g);
  CHECK(hom_well_defined(s));
  CHECK(s.src == parse_group("Z/4Z + Z"));
  CHECK(s.dst == parse_group("Z/24Z"));
}
