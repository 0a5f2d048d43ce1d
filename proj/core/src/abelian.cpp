#include "sqg/abelian.hpp"

#include <algorithm>
#include <cctype>
#include <numeric>
#include <sstream>

namespace sqg {

Mat Mat::identity(size_t n) {
  Mat m(n, n);
  for (size_t i = 0; i < n; ++i) m.at(i, i) = 1;
  return m;
}

bool Mat::is_zero() const {
  return std::all_of(a.begin(), a.end(), [](const Int& x) { return x == 0; });
}

Mat mat_mul(const Mat& x, const Mat& y) {
  SQG_LOGIC_CHECK(x.cols == y.rows, "mat_mul shape mismatch");
  Mat r(x.rows, y.cols);
  for (size_t i = 0; i < x.rows; ++i)
    for (size_t k = 0; k < x.cols; ++k) {
      const Int& xik = x.at(i, k);
      if (xik == 0) continue;
      for (size_t j = 0; j < y.cols; ++j) r.at(i, j) += xik * y.at(k, j);
    }
  return r;
}

Mat mat_add(const Mat& x, const Mat& y) {
  SQG_LOGIC_CHECK(x.rows == y.rows && x.cols == y.cols, "mat_add shape mismatch");
  Mat r = x;
  for (size_t i = 0; i < r.a.size(); ++i) r.a[i] += y.a[i];
  return r;
}

Mat mat_sub(const Mat& x, const Mat& y) {
  SQG_LOGIC_CHECK(x.rows == y.rows && x.cols == y.cols, "mat_sub shape mismatch");
  Mat r = x;
  for (size_t i = 0; i < r.a.size(); ++i) r.a[i] -= y.a[i];
  return r;
}

Mat mat_neg(const Mat& x) {
  Mat r = x;
  for (auto& e : r.a) e = -e;
  return r;
}

Mat mat_smul(const Int& k, const Mat& x) {
  Mat r = x;
  for (auto& e : r.a) e *= k;
  return r;
}

Mat transpose(const Mat& x) {
  Mat r(x.cols, x.rows);
  for (size_t i = 0; i < x.rows; ++i)
    for (size_t j = 0; j < x.cols; ++j) r.at(j, i) = x.at(i, j);
  return r;
}

Mat hstack(const Mat& x, const Mat& y) {
  SQG_LOGIC_CHECK(x.rows == y.rows, "hstack shape mismatch");
  Mat r(x.rows, x.cols + y.cols);
  for (size_t i = 0; i < x.rows; ++i) {
    for (size_t j = 0; j < x.cols; ++j) r.at(i, j) = x.at(i, j);
    for (size_t j = 0; j < y.cols; ++j) r.at(i, x.cols + j) = y.at(i, j);
  }
  return r;
}

Mat vstack(const Mat& x, const Mat& y) {
  SQG_LOGIC_CHECK(x.cols == y.cols, "vstack shape mismatch");
  Mat r(x.rows + y.rows, x.cols);
  for (size_t i = 0; i < x.rows; ++i)
    for (size_t j = 0; j < x.cols; ++j) r.at(i, j) = x.at(i, j);
  for (size_t i = 0; i < y.rows; ++i)
    for (size_t j = 0; j < y.cols; ++j) r.at(x.rows + i, j) = y.at(i, j);
  return r;
}

Mat diag_mat(const Vec& d) {
  Mat r(d.size(), d.size());
  for (size_t i = 0; i < d.size(); ++i) r.at(i, i) = d[i];
  return r;
}

Mat col_select(const Mat& x, const std::vector<size_t>& idx) {
  Mat r(x.rows, idx.size());
  for (size_t j = 0; j < idx.size(); ++j)
    for (size_t i = 0; i < x.rows; ++i) r.at(i, j) = x.at(i, idx[j]);
  return r;
}

Mat row_select(const Mat& x, const std::vector<size_t>& idx) {
  Mat r(idx.size(), x.cols);
  for (size_t i = 0; i < idx.size(); ++i)
    for (size_t j = 0; j < x.cols; ++j) r.at(i, j) = x.at(idx[i], j);
  return r;
}

Vec mat_apply(const Mat& x, const Vec& v) {
  SQG_LOGIC_CHECK(x.cols == v.size(), "mat_apply shape mismatch");
  Vec r(x.rows);
  for (size_t i = 0; i < x.rows; ++i)
    for (size_t j = 0; j < x.cols; ++j)
      if (v[j] != 0) r[i] += x.at(i, j) * v[j];
  return r;
}

Vec get_col(const Mat& x, size_t j) {
  Vec r(x.rows);
  for (size_t i = 0; i < x.rows; ++i) r[i] = x.at(i, j);
  return r;
}

void set_col(Mat& x, size_t j, const Vec& v) {
  SQG_LOGIC_CHECK(v.size() == x.rows, "set_col shape mismatch");
  for (size_t i = 0; i < x.rows; ++i) x.at(i, j) = v[i];
}

Mat from_cols(size_t rows, const std::vector<Vec>& cols) {
  Mat r(rows, cols.size());
  for (size_t j = 0; j < cols.size(); ++j) set_col(r, j, cols[j]);
  return r;
}

Int gcd_int(const Int& x, const Int& y) { return boost::multiprecision::gcd(x, y); }

Int mod_floor(const Int& x, const Int& m) {
  SQG_LOGIC_CHECK(m > 0, "mod_floor needs positive modulus");
  Int r = x % m;
  if (r < 0) r += m;
  return r;
}

Int binom2(const Int& n) { return n * (n - 1) / 2; }

namespace {

// Elementary operations applied consistently to s, the transforms and their
// tracked inverses.
struct SmithWork {
  Mat s, u, v, uinv, vinv;

  void row_add(size_t i, size_t j, const Int& k) {  // row i += k * row j
    for (size_t c = 0; c < s.cols; ++c) s.at(i, c) += k * s.at(j, c);
    for (size_t c = 0; c < u.cols; ++c) u.at(i, c) += k * u.at(j, c);
    for (size_t r = 0; r < uinv.rows; ++r) uinv.at(r, j) -= k * uinv.at(r, i);
  }
  void row_swap(size_t i, size_t j) {
    if (i == j) return;
    for (size_t c = 0; c < s.cols; ++c) std::swap(s.at(i, c), s.at(j, c));
    for (size_t c = 0; c < u.cols; ++c) std::swap(u.at(i, c), u.at(j, c));
    for (size_t r = 0; r < uinv.rows; ++r) std::swap(uinv.at(r, i), uinv.at(r, j));
  }
  void row_neg(size_t i) {
    for (size_t c = 0; c < s.cols; ++c) s.at(i, c) = -s.at(i, c);
    for (size_t c = 0; c < u.cols; ++c) u.at(i, c) = -u.at(i, c);
    for (size_t r = 0; r < uinv.rows; ++r) uinv.at(r, i) = -uinv.at(r, i);
  }
  void col_add(size_t i, size_t j, const Int& k) {  // col i += k * col j
    for (size_t r = 0; r < s.rows; ++r) s.at(r, i) += k * s.at(r, j);
    for (size_t r = 0; r < v.rows; ++r) v.at(r, i) += k * v.at(r, j);
    for (size_t c = 0; c < vinv.cols; ++c) vinv.at(j, c) -= k * vinv.at(i, c);
  }
  void col_swap(size_t i, size_t j) {
    if (i == j) return;
    for (size_t r = 0; r < s.rows; ++r) std::swap(s.at(r, i), s.at(r, j));
    for (size_t r = 0; r < v.rows; ++r) std::swap(v.at(r, i), v.at(r, j));
    for (size_t c = 0; c < vinv.cols; ++c) std::swap(vinv.at(i, c), vinv.at(j, c));
  }
  void col_neg(size_t i) {
    for (size_t r = 0; r < s.rows; ++r) s.at(r, i) = -s.at(r, i);
    for (size_t r = 0; r < v.rows; ++r) v.at(r, i) = -v.at(r, i);
    for (size_t c = 0; c < vinv.cols; ++c) vinv.at(i, c) = -vinv.at(i, c);
  }
};

}  // namespace

SmithResult smith(const Mat& m) {
  SmithWork w;
  w.s = m;
  w.u = Mat::identity(m.rows);
  w.uinv = Mat::identity(m.rows);
  w.v = Mat::identity(m.cols);
  w.vinv = Mat::identity(m.cols);
  Mat& s = w.s;

  const size_t n = std::min(m.rows, m.cols);
  size_t t = 0;
  for (; t < n; ++t) {
    // Pick the absolutely smallest nonzero entry of the trailing block as
    // pivot; single gcd-reduction steps keep entry growth in check.
    bool any = false;
    for (size_t i = t; i < s.rows && !any; ++i)
      for (size_t j = t; j < s.cols && !any; ++j)
        if (s.at(i, j) != 0) any = true;
    if (!any) break;

    for (;;) {
      size_t pi = t, pj = t;
      bool found = false;
      for (size_t i = t; i < s.rows; ++i)
        for (size_t j = t; j < s.cols; ++j) {
          if (s.at(i, j) == 0) continue;
          if (!found || abs(s.at(i, j)) < abs(s.at(pi, pj))) {
            pi = i;
            pj = j;
            found = true;
          }
        }
      w.row_swap(t, pi);
      w.col_swap(t, pj);
      const Int p = s.at(t, t);

      bool reduced = false;
      for (size_t i = t + 1; i < s.rows && !reduced; ++i)
        if (s.at(i, t) % p != 0) {
          w.row_add(i, t, -(s.at(i, t) / p));
          reduced = true;
        }
      for (size_t j = t + 1; j < s.cols && !reduced; ++j)
        if (s.at(t, j) % p != 0) {
          w.col_add(j, t, -(s.at(t, j) / p));
          reduced = true;
        }
      if (reduced) continue;

      // Everything on the pivot's row and column is a multiple: clear exactly.
      for (size_t i = t + 1; i < s.rows; ++i)
        if (s.at(i, t) != 0) w.row_add(i, t, -(s.at(i, t) / p));
      for (size_t j = t + 1; j < s.cols; ++j)
        if (s.at(t, j) != 0) w.col_add(j, t, -(s.at(t, j) / p));

      // Enforce that the pivot divides the rest of the trailing block.
      bool divides = true;
      for (size_t i = t + 1; i < s.rows && divides; ++i)
        for (size_t j = t + 1; j < s.cols && divides; ++j)
          if (s.at(i, j) % p != 0) {
            w.row_add(t, i, 1);
            divides = false;
          }
      if (divides) break;
    }
    if (s.at(t, t) < 0) w.row_neg(t);
  }

  SmithResult r;
  r.s = std::move(w.s);
  r.u = std::move(w.u);
  r.v = std::move(w.v);
  r.uinv = std::move(w.uinv);
  r.vinv = std::move(w.vinv);
  r.rank = 0;
  for (size_t i = 0; i < n; ++i)
    if (r.s.at(i, i) != 0) ++r.rank;
  return r;
}

Mat kernel_lattice(const Mat& m) {
  SmithResult sm = smith(m);
  std::vector<size_t> idx;
  for (size_t j = sm.rank; j < m.cols; ++j) idx.push_back(j);
  return col_select(sm.v, idx);
}

Mat column_lattice(const Mat& m) {
  SmithResult sm = smith(m);
  Mat b(m.rows, sm.rank);
  for (size_t j = 0; j < sm.rank; ++j)
    for (size_t i = 0; i < m.rows; ++i) b.at(i, j) = sm.uinv.at(i, j) * sm.s.at(j, j);
  return b;
}

std::optional<Vec> solve_integer(const Mat& m, const Vec& b) {
  SQG_LOGIC_CHECK(b.size() == m.rows, "solve_integer shape mismatch");
  SmithResult sm = smith(m);
  Vec c = mat_apply(sm.u, b);
  Vec s(m.cols, Int(0));
  const size_t n = std::min(m.rows, m.cols);
  for (size_t i = 0; i < m.rows; ++i) {
    Int d = i < n ? sm.s.at(i, i) : Int(0);
    if (d == 0) {
      if (c[i] != 0) return std::nullopt;
    } else {
      if (c[i] % d != 0) return std::nullopt;
      if (i < m.cols) s[i] = c[i] / d;
    }
  }
  return mat_apply(sm.v, s);
}

std::optional<Mat> solve_integer_mat(const Mat& m, const Mat& b) {
  Mat x(m.cols, b.cols);
  for (size_t j = 0; j < b.cols; ++j) {
    auto col = solve_integer(m, get_col(b, j));
    if (!col) return std::nullopt;
    set_col(x, j, *col);
  }
  return x;
}

std::string format_vec(const Vec& v) {
  std::ostringstream os;
  os << "(";
  for (size_t i = 0; i < v.size(); ++i) {
    if (i) os << ",";
    os << v[i];
  }
  os << ")";
  return os.str();
}

std::string format_mat(const Mat& m) {
  // Written as a list of columns: column j is the image of source generator j.
  std::ostringstream os;
  os << "[";
  for (size_t j = 0; j < m.cols; ++j) {
    if (j) os << ",";
    os << "[";
    for (size_t i = 0; i < m.rows; ++i) {
      if (i) os << ",";
      os << m.at(i, j);
    }
    os << "]";
  }
  os << "]";
  return os.str();
}

size_t FgAbGroup::free_rank() const {
  return static_cast<size_t>(std::count(fac.begin(), fac.end(), Int(0)));
}

Int FgAbGroup::order() const {
  if (!is_finite()) return 0;
  Int n = 1;
  for (const auto& d : fac) n *= d;
  return n;
}

FgAbGroup cyclic(const Int& n) {
  SQG_INPUT_CHECK(n >= 0, "cyclic group modulus must be nonnegative");
  FgAbGroup g;
  if (n != 1) g.fac.push_back(n);
  return g;
}

FgAbGroup trivial_group() { return FgAbGroup{}; }

Vec reduce(const FgAbGroup& g, Vec x) {
  SQG_LOGIC_CHECK(x.size() == g.ngens(), "element has wrong length");
  for (size_t i = 0; i < x.size(); ++i)
    if (g.fac[i] != 0) x[i] = mod_floor(x[i], g.fac[i]);
  return x;
}

Vec zero_of(const FgAbGroup& g) { return Vec(g.ngens(), Int(0)); }

Vec unit_of(const FgAbGroup& g, size_t i) {
  Vec x = zero_of(g);
  SQG_LOGIC_CHECK(i < g.ngens(), "generator index out of range");
  x[i] = 1;
  return reduce(g, x);
}

Vec add(const FgAbGroup& g, const Vec& x, const Vec& y) {
  Vec r = x;
  for (size_t i = 0; i < r.size(); ++i) r[i] += y[i];
  return reduce(g, r);
}

Vec sub(const FgAbGroup& g, const Vec& x, const Vec& y) {
  Vec r = x;
  for (size_t i = 0; i < r.size(); ++i) r[i] -= y[i];
  return reduce(g, r);
}

Vec neg(const FgAbGroup& g, const Vec& x) {
  Vec r = x;
  for (auto& e : r) e = -e;
  return reduce(g, r);
}

Vec smul(const FgAbGroup& g, const Int& k, const Vec& x) {
  Vec r = x;
  for (auto& e : r) e *= k;
  return reduce(g, r);
}

bool is_zero(const FgAbGroup& g, const Vec& x) {
  Vec r = reduce(g, x);
  return std::all_of(r.begin(), r.end(), [](const Int& e) { return e == 0; });
}

Int element_order(const FgAbGroup& g, const Vec& x) {
  Vec r = reduce(g, x);
  Int ord = 1;
  for (size_t i = 0; i < r.size(); ++i) {
    if (r[i] == 0) continue;
    if (g.fac[i] == 0) return 0;
    Int o = g.fac[i] / gcd_int(g.fac[i], r[i]);
    ord = ord / gcd_int(ord, o) * o;
  }
  return ord;
}

bool next_element(const FgAbGroup& g, Vec& x) {
  SQG_DOMAIN_CHECK(g.is_finite(), "cannot enumerate an infinite group");
  for (size_t i = 0; i < g.ngens(); ++i) {
    x[i] += 1;
    if (x[i] < g.fac[i]) return true;
    x[i] = 0;
  }
  return false;
}

std::vector<Vec> all_elements(const FgAbGroup& g) {
  SQG_DOMAIN_CHECK(g.is_finite(), "cannot enumerate an infinite group");
  std::vector<Vec> out;
  Vec x = zero_of(g);
  do {
    out.push_back(x);
  } while (next_element(g, x));
  return out;
}

Vec AbHom::apply(const Vec& x) const {
  SQG_LOGIC_CHECK(x.size() == src.ngens(), "hom applied to wrong-length element");
  return reduce(dst, mat_apply(m, x));
}

AbHom hom_identity(const FgAbGroup& g) { return AbHom{g, g, Mat::identity(g.ngens())}; }

AbHom hom_zero(const FgAbGroup& src, const FgAbGroup& dst) {
  return AbHom{src, dst, Mat::zero(dst.ngens(), src.ngens())};
}

AbHom hom_from_cols(const FgAbGroup& src, const FgAbGroup& dst, const std::vector<Vec>& cols) {
  SQG_LOGIC_CHECK(cols.size() == src.ngens(), "hom_from_cols arity mismatch");
  return AbHom{src, dst, from_cols(dst.ngens(), cols)};
}

AbHom compose(const AbHom& f, const AbHom& g) {
  SQG_DOMAIN_CHECK(f.src == g.dst, "compose: middle groups differ");
  return AbHom{g.src, f.dst, mat_mul(f.m, g.m)};
}

AbHom hom_add(const AbHom& f, const AbHom& g) {
  SQG_DOMAIN_CHECK(f.src == g.src && f.dst == g.dst, "hom_add: shape mismatch");
  return AbHom{f.src, f.dst, mat_add(f.m, g.m)};
}

AbHom hom_sub(const AbHom& f, const AbHom& g) {
  SQG_DOMAIN_CHECK(f.src == g.src && f.dst == g.dst, "hom_sub: shape mismatch");
  return AbHom{f.src, f.dst, mat_sub(f.m, g.m)};
}

AbHom hom_neg(const AbHom& f) { return AbHom{f.src, f.dst, mat_neg(f.m)}; }

AbHom hom_smul(const Int& k, const AbHom& f) { return AbHom{f.src, f.dst, mat_smul(k, f.m)}; }

bool hom_well_defined(const AbHom& f) {
  if (f.m.rows != f.dst.ngens() || f.m.cols != f.src.ngens()) return false;
  for (size_t j = 0; j < f.src.ngens(); ++j) {
    if (f.src.fac[j] == 0) continue;
    if (!is_zero(f.dst, smul(f.dst, f.src.fac[j], reduce(f.dst, get_col(f.m, j)))))
      return false;
  }
  return true;
}

bool hom_equal(const AbHom& f, const AbHom& g) {
  if (!(f.src == g.src) || !(f.dst == g.dst)) return false;
  for (size_t j = 0; j < f.src.ngens(); ++j)
    if (reduce(f.dst, get_col(f.m, j)) != reduce(f.dst, get_col(g.m, j))) return false;
  return true;
}

bool hom_is_zero(const AbHom& f) { return hom_equal(f, hom_zero(f.src, f.dst)); }

GroupFromRelations group_from_relations(size_t m, const Mat& rels) {
  SQG_LOGIC_CHECK(rels.rows == m, "relation matrix has wrong height");
  SmithResult sm = smith(rels);
  const size_t n = std::min(m, rels.cols);
  std::vector<size_t> kept;
  Vec fac;
  for (size_t i = 0; i < m; ++i) {
    Int d = i < n ? sm.s.at(i, i) : Int(0);
    if (d == 1) continue;
    kept.push_back(i);
    fac.push_back(d);
  }
  GroupFromRelations r;
  r.group.fac = std::move(fac);
  r.proj = row_select(sm.u, kept);
  r.lift = col_select(sm.uinv, kept);
  return r;
}

Vec Subgroup::include(const Vec& sub_coords) const {
  return reduce(ambient, mat_apply(gens, sub_coords));
}

std::optional<Vec> Subgroup::coords_of(const Vec& ambient_coords) const {
  AbHom inc{grp, ambient, gens};
  auto x = hom_solve(inc, reduce(ambient, ambient_coords));
  return x;
}

Vec QuotientMap::project(const Vec& ambient_coords) const {
  return reduce(grp, mat_apply(proj, ambient_coords));
}

Vec QuotientMap::lift_of(const Vec& q_coords) const { return mat_apply(lift, q_coords); }

namespace {

// Nonzero columns of the diagonal relation matrix of g.
Mat torsion_relations(const FgAbGroup& g) {
  std::vector<Vec> cols;
  for (size_t i = 0; i < g.ngens(); ++i)
    if (g.fac[i] != 0) {
      Vec c(g.ngens(), Int(0));
      c[i] = g.fac[i];
      cols.push_back(c);
    }
  return from_cols(g.ngens(), cols);
}

// The group span(sup)/span(sub) for lattices sub <= sup inside Z^m, with
// generators expressed in ambient coordinates.
Subgroup lattice_subquotient(const FgAbGroup& ambient, const Mat& sup, const Mat& sub) {
  auto c = solve_integer_mat(sup, sub);
  SQG_LOGIC_CHECK(c.has_value(), "lattice_subquotient: sub not inside sup");
  GroupFromRelations q = group_from_relations(sup.cols, *c);
  Mat gens = mat_mul(sup, q.lift);
  for (size_t j = 0; j < gens.cols; ++j) set_col(gens, j, reduce(ambient, get_col(gens, j)));
  return Subgroup{ambient, q.group, gens};
}

}  // namespace

Subgroup hom_kernel(const AbHom& f) {
  const size_t n = f.src.ngens();
  Mat a = hstack(f.m, torsion_relations(f.dst));
  Mat ker = kernel_lattice(a);
  std::vector<size_t> top(n);
  for (size_t i = 0; i < n; ++i) top[i] = i;
  Mat lx = row_select(ker, top);
  Mat sup = column_lattice(lx);
  return lattice_subquotient(f.src, sup, torsion_relations(f.src));
}

Subgroup hom_image(const AbHom& f) {
  Mat a = hstack(f.m, torsion_relations(f.dst));
  Mat sup = column_lattice(a);
  return lattice_subquotient(f.dst, sup, torsion_relations(f.dst));
}

QuotientMap hom_cokernel(const AbHom& f) {
  Mat a = hstack(f.m, torsion_relations(f.dst));
  GroupFromRelations q = group_from_relations(f.dst.ngens(), a);
  return QuotientMap{f.dst, q.group, q.proj, q.lift};
}

HomAnalysis hom_analysis(const AbHom& f) {
  SQG_DOMAIN_CHECK(hom_well_defined(f), "hom_analysis: map is not well defined");
  return HomAnalysis{hom_kernel(f), hom_image(f), hom_cokernel(f)};
}

std::optional<Vec> hom_solve(const AbHom& f, const Vec& y) {
  Mat a = hstack(f.m, torsion_relations(f.dst));
  auto w = solve_integer(a, reduce(f.dst, y));
  if (!w) return std::nullopt;
  Vec x(w->begin(), w->begin() + static_cast<long>(f.src.ngens()));
  return reduce(f.src, x);
}

AbHom subgroup_inclusion(const Subgroup& s) { return AbHom{s.grp, s.ambient, s.gens}; }

AbHom quotient_projection(const QuotientMap& q) { return AbHom{q.ambient, q.grp, q.proj}; }

AbHom quotient_section(const QuotientMap& q) { return AbHom{q.grp, q.ambient, q.lift}; }

AbHom hom_from_struct(const FgAbGroup& src, const Mat& proj, const Mat& lift,
                      const FgAbGroup& dst, const std::vector<Vec>& img) {
  Mat m(dst.ngens(), src.ngens());
  for (size_t t = 0; t < src.ngens(); ++t) {
    Vec c = get_col(lift, t);
    Vec acc = zero_of(dst);
    for (size_t s = 0; s < c.size(); ++s)
      if (c[s] != 0) acc = add(dst, acc, smul(dst, c[s], img[s]));
    set_col(m, t, acc);
  }
  AbHom h{src, dst, std::move(m)};
  SQG_LOGIC_CHECK(hom_well_defined(h), "structural images do not define a map");
  for (size_t s = 0; s < img.size(); ++s)
    SQG_LOGIC_CHECK(h.apply(get_col(proj, s)) == reduce(dst, img[s]),
                    "structural images are inconsistent");
  return h;
}

AbHom hom_inverse(const AbHom& h) {
  std::vector<Vec> cols;
  for (size_t i = 0; i < h.dst.ngens(); ++i) {
    std::optional<Vec> pre = hom_solve(h, unit_of(h.dst, i));
    SQG_LOGIC_CHECK(pre.has_value(), "map is not surjective");
    cols.push_back(*pre);
  }
  AbHom inv = hom_from_cols(h.dst, h.src, cols);
  SQG_LOGIC_CHECK(hom_well_defined(inv), "inverse is not well defined");
  SQG_LOGIC_CHECK(hom_equal(compose(inv, h), hom_identity(h.src)), "map is not injective");
  return inv;
}

Subgroup subgroup_from_gens(const FgAbGroup& ambient, const std::vector<Vec>& gens) {
  Mat g = from_cols(ambient.ngens(), gens);
  Mat a = hstack(g, torsion_relations(ambient));
  Mat sup = column_lattice(a);
  return lattice_subquotient(ambient, sup, torsion_relations(ambient));
}

bool is_isomorphic(const FgAbGroup& a, const FgAbGroup& b) { return a == b; }

DirectSum direct_sum(const std::vector<FgAbGroup>& parts) {
  size_t m = 0;
  for (const auto& p : parts) m += p.ngens();
  Vec d;
  for (const auto& p : parts) d.insert(d.end(), p.fac.begin(), p.fac.end());
  GroupFromRelations q = group_from_relations(m, diag_mat(d));

  DirectSum r;
  r.group = q.group;
  size_t off = 0;
  for (const auto& p : parts) {
    Mat inj(q.group.ngens(), p.ngens());
    for (size_t j = 0; j < p.ngens(); ++j)
      set_col(inj, j, reduce(q.group, get_col(q.proj, off + j)));
    Mat prj(p.ngens(), q.group.ngens());
    for (size_t j = 0; j < q.group.ngens(); ++j) {
      Vec l = get_col(q.lift, j);
      Vec block(l.begin() + static_cast<long>(off),
                l.begin() + static_cast<long>(off + p.ngens()));
      set_col(prj, j, reduce(p, block));
    }
    r.inj.push_back(AbHom{p, q.group, inj});
    r.proj.push_back(AbHom{q.group, p, prj});
    off += p.ngens();
  }
  return r;
}

namespace {

// Orders of the structural generators e_i (x) e_j.
Int tensor_order(const Int& d, const Int& e) {
  if (d == 0 && e == 0) return 0;
  if (d == 0) return e;
  if (e == 0) return d;
  return gcd_int(d, e);
}

}  // namespace

TensorGroup tensor(const FgAbGroup& a, const FgAbGroup& b) {
  TensorGroup t;
  t.a = a;
  t.b = b;
  const size_t s = a.ngens() * b.ngens();
  Vec orders(s);
  for (size_t i = 0; i < a.ngens(); ++i)
    for (size_t j = 0; j < b.ngens(); ++j)
      orders[i * b.ngens() + j] = tensor_order(a.fac[i], b.fac[j]);
  GroupFromRelations q = group_from_relations(s, diag_mat(orders));
  t.group = q.group;
  t.proj = q.proj;
  t.lift = q.lift;
  return t;
}

Vec TensorGroup::pair(const Vec& x, const Vec& y) const {
  SQG_LOGIC_CHECK(x.size() == a.ngens() && y.size() == b.ngens(), "tensor pair shape");
  Vec c(a.ngens() * b.ngens());
  for (size_t i = 0; i < a.ngens(); ++i)
    for (size_t j = 0; j < b.ngens(); ++j) c[sidx(i, j)] = x[i] * y[j];
  return reduce(group, mat_apply(proj, c));
}

Vec TensorGroup::gen(size_t i, size_t j) const {
  return reduce(group, get_col(proj, sidx(i, j)));
}

AbHom tensor_swap(const TensorGroup& ab, const TensorGroup& ba) {
  SQG_DOMAIN_CHECK(ab.a == ba.b && ab.b == ba.a, "tensor_swap operand mismatch");
  Mat m(ba.group.ngens(), ab.group.ngens());
  for (size_t g = 0; g < ab.group.ngens(); ++g) {
    Vec c = get_col(ab.lift, g);
    Vec sw(c.size());
    for (size_t i = 0; i < ab.a.ngens(); ++i)
      for (size_t j = 0; j < ab.b.ngens(); ++j) sw[ba.sidx(j, i)] = c[ab.sidx(i, j)];
    set_col(m, g, reduce(ba.group, mat_apply(ba.proj, sw)));
  }
  return AbHom{ab.group, ba.group, m};
}

AbHom tensor_hom(const TensorGroup& sab, const TensorGroup& tab, const AbHom& f,
                 const AbHom& g) {
  SQG_DOMAIN_CHECK(f.src == sab.a && g.src == sab.b && f.dst == tab.a && g.dst == tab.b,
                   "tensor_hom operand mismatch");
  Mat m(tab.group.ngens(), sab.group.ngens());
  for (size_t t = 0; t < sab.group.ngens(); ++t) {
    Vec c = get_col(sab.lift, t);
    Vec img = zero_of(tab.group);
    for (size_t i = 0; i < sab.a.ngens(); ++i)
      for (size_t j = 0; j < sab.b.ngens(); ++j) {
        const Int& k = c[sab.sidx(i, j)];
        if (k == 0) continue;
        Vec p = tab.pair(f.apply(unit_of(sab.a, i)), g.apply(unit_of(sab.b, j)));
        img = add(tab.group, img, smul(tab.group, k, p));
      }
    set_col(m, t, img);
  }
  return AbHom{sab.group, tab.group, m};
}

HomGroup hom_group(const FgAbGroup& a, const FgAbGroup& b) {
  HomGroup h;
  h.a = a;
  h.b = b;
  const size_t s = a.ngens() * b.ngens();
  Vec orders(s);
  h.mult.assign(s, Int(0));
  for (size_t i = 0; i < a.ngens(); ++i)
    for (size_t j = 0; j < b.ngens(); ++j) {
      const Int& d = a.fac[i];
      const Int& e = b.fac[j];
      size_t k = i * b.ngens() + j;
      if (d == 0 && e == 0) {
        orders[k] = 0;
        h.mult[k] = 1;
      } else if (d == 0) {
        orders[k] = e;
        h.mult[k] = 1;
      } else if (e == 0) {
        orders[k] = 1;  // no nonzero maps Z/d -> Z
        h.mult[k] = 0;
      } else {
        Int g = gcd_int(d, e);
        orders[k] = g;
        h.mult[k] = e / g;
      }
    }
  GroupFromRelations q = group_from_relations(s, diag_mat(orders));
  h.group = q.group;
  h.proj = q.proj;
  h.lift = q.lift;
  return h;
}

AbHom HomGroup::to_hom(const Vec& coords) const {
  Vec c = mat_apply(lift, coords);
  Mat m(b.ngens(), a.ngens());
  for (size_t i = 0; i < a.ngens(); ++i)
    for (size_t j = 0; j < b.ngens(); ++j) m.at(j, i) += c[sidx(i, j)] * mult[sidx(i, j)];
  for (size_t i = 0; i < a.ngens(); ++i) set_col(m, i, reduce(b, get_col(m, i)));
  return AbHom{a, b, m};
}

std::optional<Vec> HomGroup::from_hom(const AbHom& f) const {
  if (!(f.src == a) || !(f.dst == b) || !hom_well_defined(f)) return std::nullopt;
  Vec c(a.ngens() * b.ngens(), Int(0));
  for (size_t i = 0; i < a.ngens(); ++i)
    for (size_t j = 0; j < b.ngens(); ++j) {
      const Int& d = a.fac[i];
      const Int& e = b.fac[j];
      Int entry = f.m.at(j, i);
      size_t k = sidx(i, j);
      if (d == 0 && e == 0) {
        c[k] = entry;
      } else if (d == 0) {
        c[k] = mod_floor(entry, e);
      } else if (e == 0) {
        if (entry != 0) return std::nullopt;
      } else {
        Int g = gcd_int(d, e);
        Int mlt = e / g;
        Int em = mod_floor(entry, e);
        if (em % mlt != 0) return std::nullopt;
        c[k] = em / mlt;
      }
    }
  return reduce(group, mat_apply(proj, c));
}

ExtGroup ext_group(const FgAbGroup& a, const FgAbGroup& b) {
  ExtGroup x;
  x.a = a;
  x.b = b;
  const size_t s = a.ngens() * b.ngens();
  Vec orders(s);
  for (size_t i = 0; i < a.ngens(); ++i)
    for (size_t j = 0; j < b.ngens(); ++j) {
      const Int& d = a.fac[i];
      const Int& e = b.fac[j];
      size_t k = i * b.ngens() + j;
      if (d == 0)
        orders[k] = 1;  // no extensions of Z
      else if (e == 0)
        orders[k] = d;
      else
        orders[k] = gcd_int(d, e);
    }
  GroupFromRelations q = group_from_relations(s, diag_mat(orders));
  x.group = q.group;
  x.proj = q.proj;
  x.lift = q.lift;
  return x;
}

Vec ExtGroup::from_classification(const std::vector<Vec>& t) const {
  SQG_LOGIC_CHECK(t.size() == a.ngens(), "ext classification arity mismatch");
  Vec c(a.ngens() * b.ngens(), Int(0));
  for (size_t i = 0; i < a.ngens(); ++i) {
    if (a.fac[i] == 0) continue;
    SQG_LOGIC_CHECK(t[i].size() == b.ngens(), "ext classification entry shape");
    for (size_t j = 0; j < b.ngens(); ++j) {
      Int ord = b.fac[j] == 0 ? a.fac[i] : gcd_int(a.fac[i], b.fac[j]);
      c[sidx(i, j)] = mod_floor(t[i][j], ord);
    }
  }
  return reduce(group, mat_apply(proj, c));
}

std::vector<Vec> ExtGroup::to_classification(const Vec& coords) const {
  Vec c = mat_apply(lift, coords);
  std::vector<Vec> t(a.ngens(), zero_of(b));
  for (size_t i = 0; i < a.ngens(); ++i) {
    if (a.fac[i] == 0) continue;
    Vec e(b.ngens());
    for (size_t j = 0; j < b.ngens(); ++j) e[j] = c[sidx(i, j)];
    t[i] = reduce(b, e);
  }
  return t;
}

Vec ext_push(const ExtGroup& s, const ExtGroup& t, const AbHom& f, const Vec& coords) {
  SQG_DOMAIN_CHECK(s.a == t.a && f.src == s.b && f.dst == t.b, "ext_push operand mismatch");
  std::vector<Vec> cls = s.to_classification(coords);
  std::vector<Vec> pushed(cls.size(), zero_of(t.b));
  for (size_t i = 0; i < cls.size(); ++i)
    if (s.a.fac[i] != 0) pushed[i] = f.apply(cls[i]);
  return t.from_classification(pushed);
}

namespace {

void skip_ws(const std::string& s, size_t& p) {
  while (p < s.size() && std::isspace(static_cast<unsigned char>(s[p]))) ++p;
}

Int parse_uint(const std::string& s, size_t& p) {
  SQG_INPUT_CHECK(p < s.size() && std::isdigit(static_cast<unsigned char>(s[p])),
                  "expected a number in group literal: " + s);
  size_t q = p;
  while (q < s.size() && std::isdigit(static_cast<unsigned char>(s[q]))) ++q;
  Int n(s.substr(p, q - p));
  p = q;
  return n;
}

}  // namespace

FgAbGroup parse_group(const std::string& text) {
  Vec d;
  size_t p = 0;
  skip_ws(text, p);
  SQG_INPUT_CHECK(p < text.size(), "empty group literal");
  bool done = false;
  while (!done) {
    skip_ws(text, p);
    if (p < text.size() && (text[p] == '0' || text[p] == '1')) {
      ++p;  // trivial summand
    } else {
      SQG_INPUT_CHECK(p < text.size() && text[p] == 'Z',
                      "expected Z or Z/nZ in group literal: " + text);
      ++p;
      Int n = 0;
      if (p < text.size() && text[p] == '/') {
        ++p;
        n = parse_uint(text, p);
        SQG_INPUT_CHECK(n >= 1, "modulus must be >= 1 in group literal: " + text);
        if (p < text.size() && text[p] == 'Z') ++p;
      }
      Int e = 1;
      if (p < text.size() && text[p] == '^') {
        ++p;
        e = parse_uint(text, p);
      }
      for (Int i = 0; i < e; ++i)
        if (n != 1) d.push_back(n);
    }
    skip_ws(text, p);
    if (p < text.size() && text[p] == '+') {
      ++p;
    } else {
      done = true;
    }
  }
  skip_ws(text, p);
  SQG_INPUT_CHECK(p == text.size(), "trailing junk in group literal: " + text);
  return group_from_relations(d.size(), diag_mat(d)).group;
}

std::string format_group(const FgAbGroup& g) {
  if (g.is_trivial()) return "0";
  std::ostringstream os;
  for (size_t i = 0; i < g.ngens(); ++i) {
    if (i) os << " + ";
    if (g.fac[i] == 0)
      os << "Z";
    else
      os << "Z/" << g.fac[i] << "Z";
  }
  return os.str();
}

AbHom hom_direct_sum(const AbHom& f, const AbHom& g) {
  DirectSum s = direct_sum({f.src, g.src});
  DirectSum t = direct_sum({f.dst, g.dst});
  AbHom a = compose(t.inj[0], compose(f, s.proj[0]));
  AbHom b = compose(t.inj[1], compose(g, s.proj[1]));
  return hom_add(a, b);
}

}  // namespace sqg
