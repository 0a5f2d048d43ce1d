#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace sqg {

using Int = boost::multiprecision::cpp_int;
using Vec = std::vector<Int>;

struct DomainError : std::runtime_error {
  explicit DomainError(const std::string& msg) : std::runtime_error(msg) {}
};

struct InputError : std::runtime_error {
  explicit InputError(const std::string& msg) : std::runtime_error(msg) {}
};

#define SQG_DOMAIN_CHECK(cond, msg) \
  do { if (!(cond)) throw ::sqg::DomainError(msg); } while (0)
#define SQG_INPUT_CHECK(cond, msg) \
  do { if (!(cond)) throw ::sqg::InputError(msg); } while (0)
#define SQG_LOGIC_CHECK(cond, msg) \
  do { if (!(cond)) throw std::logic_error(msg); } while (0)

// Dense matrix of arbitrary-precision integers, row major.
struct Mat {
  size_t rows = 0, cols = 0;
  std::vector<Int> a;

  Mat() = default;
  Mat(size_t r, size_t c) : rows(r), cols(c), a(r * c) {}

  Int& at(size_t r, size_t c) { return a[r * cols + c]; }
  const Int& at(size_t r, size_t c) const { return a[r * cols + c]; }

  static Mat identity(size_t n);
  static Mat zero(size_t r, size_t c) { return Mat(r, c); }

  bool is_zero() const;
  bool operator==(const Mat&) const = default;
};

Mat mat_mul(const Mat& x, const Mat& y);
Mat mat_add(const Mat& x, const Mat& y);
Mat mat_sub(const Mat& x, const Mat& y);
Mat mat_neg(const Mat& x);
Mat mat_smul(const Int& k, const Mat& x);
Mat transpose(const Mat& x);
Mat hstack(const Mat& x, const Mat& y);
Mat vstack(const Mat& x, const Mat& y);
Mat diag_mat(const Vec& d);
Mat col_select(const Mat& x, const std::vector<size_t>& idx);
Mat row_select(const Mat& x, const std::vector<size_t>& idx);
Vec mat_apply(const Mat& x, const Vec& v);
Vec get_col(const Mat& x, size_t j);
void set_col(Mat& x, size_t j, const Vec& v);
Mat from_cols(size_t rows, const std::vector<Vec>& cols);

// Smith normal form u*m*v = s with s diagonal, nonnegative,
// s[0] | s[1] | ... ; u, v unimodular with tracked inverses.
struct SmithResult {
  Mat s, u, v, uinv, vinv;
  size_t rank = 0;  // number of nonzero diagonal entries
  Int diag(size_t i) const { return i < std::min(s.rows, s.cols) ? s.at(i, i) : Int(0); }
};

SmithResult smith(const Mat& m);

// Basis of the integer solution lattice {x : m x = 0}, as matrix columns.
Mat kernel_lattice(const Mat& m);

// Basis of the column lattice of m (full column rank).
Mat column_lattice(const Mat& m);

// One integer solution of m x = b, if any.
std::optional<Vec> solve_integer(const Mat& m, const Vec& b);
std::optional<Mat> solve_integer_mat(const Mat& m, const Mat& b);  // columnwise

Int gcd_int(const Int& x, const Int& y);
Int mod_floor(const Int& x, const Int& m);  // representative in [0, m)
Int binom2(const Int& n);                   // n*(n-1)/2

std::string format_vec(const Vec& v);
std::string format_mat(const Mat& m);

}  // namespace sqg
