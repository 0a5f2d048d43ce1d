#pragma once

#include "sqg/psg.hpp"

#include <functional>
#include <optional>

namespace sqg {

// Quadratic function src -> dst, evaluated on canonical representatives. On
// t + sum_j x_j u_j (t in the torsion subgroup, u_j the free generators) the
// value is
//   base[t] + sum_j x_j slope[j][t] + sum_j binom2(x_j) sq[j]
//          + sum_{j<j'} x_j x_{j'} mixed[j][j'].
// base and slope are tabulated over the torsion subgroup in lexicographic
// order; no descent is imposed, so this covers arbitrary section values.
struct QuadraticFn {
  FgAbGroup src, dst;
  std::vector<Vec> base;                // per torsion element
  std::vector<std::vector<Vec>> slope;  // [free j][torsion element]
  std::vector<Vec> sq;                  // [free j]
  std::vector<std::vector<Vec>> mixed;  // [free j][free j'], used for j < j'

  Vec eval(const Vec& x) const;
};

QuadraticFn qfn_zero(const FgAbGroup& src, const FgAbGroup& dst);
// Samples f on the torsion subgroup and a small free-coordinate grid; extra
// probe points verify the values fit the quadratic shape.
QuadraticFn qfn_from_function(const FgAbGroup& src, const FgAbGroup& dst,
                              const std::function<Vec(const Vec&)>& f);
QuadraticFn qfn_postcompose(const AbHom& f, const QuadraticFn& g);
QuadraticFn qfn_add_hom(const QuadraticFn& g, const AbHom& alpha);
bool qfn_equal(const QuadraticFn& f, const QuadraticFn& g);

// Quadratic map H : Qe -> Qee, either a dense value table over a finite Qe or
// the structured triple (h on the center part, section values g on quotient
// representatives, cross form), combined as H((q, c)) = h(c) + g(q).
struct QuadraticMap {
  Nil2Group domain;
  FgAbGroup codomain;
  bool structured = true;
  AbHom h;                              // center_part -> codomain
  QuadraticFn g;                        // quotient -> codomain
  std::vector<std::vector<Vec>> cross;  // cross effect on quotient generators
  std::vector<Vec> table;               // |quotient| * |center| entries, q-major
};

Vec qmap_eval(const QuadraticMap& m, const Nil2El& x);

struct SquareGroup {
  Nil2Group qe;
  FgAbGroup qee;
  QuadraticMap hmap;
  AbHom p;  // qee -> qe.center_part coordinates; image is the whole center
};

Vec sg_h_eval(const SquareGroup& q, const Nil2El& x);
Vec sg_cross_eval(const SquareGroup& q, const Nil2El& x, const Nil2El& y);

struct SgCheck {
  bool ok = true;
  std::string violation;
};

// Identity sweeps are exhaustive over groups of order at most the bound and
// fall back to a deterministic sample grid otherwise; bound 0 keeps only the
// shape and generator-level checks.
SgCheck sg_validate(const SquareGroup& q, const Int& exhaustive_bound = 64);

// Underlying presquare group (sigma = HP - Id, bracket = cross effect); the
// result always satisfies the kernel condition on sigma P.
PreSquareGroup wp(const SquareGroup& q);

SquareGroup sg_twist(const SquareGroup& q, const AbHom& alpha);
// The unique alpha with H' = H + alpha composed with the quotient map, for
// two square groups sharing the same underlying presquare data.
AbHom alpha_defect(const SquareGroup& q, const SquareGroup& qprime);

struct Obstruction {
  H2Class value;  // over (pi0, mee)
  bool zero = false;
};

// The lifting obstruction [Mee] - h_*[Me] of a presquare group satisfying the
// kernel condition.
Obstruction lift_obstruction(const PreSquareGroup& m);

enum class LiftStatus { Lifted, NotPsg0, Obstructed };
struct LiftResult {
  LiftStatus status = LiftStatus::NotPsg0;
  std::optional<SquareGroup> q;
  std::optional<Obstruction> obstruction;
};

// Quadratic structure on M when one exists: builds the canonical h, computes
// the obstruction, and on vanishing recovers section values by solving the
// coboundary equation.
LiftResult lift(const PreSquareGroup& m);

struct OmegaLift {
  bool ok = false;
  ExtClass theta;  // certificate when not ok
  std::optional<CentralExtension> n;
  std::optional<SquareGroup> q;
};

// Quadratic structure on the universal form over a twist of the canonical
// extension of A, guided by the symmetric extension class of A.
OmegaLift lift_omega(const FgAbGroup& a);

// The degree map pi0 -> pi1, Delta(x) = HPH(x) + H(x + x) - 4 H(x).
AbHom delta(const SquareGroup& q);

SquareGroup sg_znil();
SquareGroup sg_two_power_cyclic(int n);
SquareGroup sg_half_invertible(const FgAbGroup& a);   // odd order
SquareGroup sg_stable_universal(const FgAbGroup& a);  // any finitely generated

SquareGroup sg_combine(PsgCombine kind, const SquareGroup& m, const SquareGroup& n);

// Reflection into the stable subcategory: divides qee by the image of
// HP - 2 Id.
SquareGroup sg_underline(const SquareGroup& q);

// Pushout of qee along f : pi1 -> a; the involution on a must be inversion
// (on elementary 2-groups the identity qualifies).
SquareGroup sg_pushforward(const SquareGroup& q, const AbHom& f,
                           const AbHom& involution);

struct SgRealization {
  bool ok = false;
  std::optional<SquareGroup> q;
  std::string failing_summand;
  std::optional<ExtClass> theta_cert;
};

// Realizes a k-invariant triple: flat degree-two data through cyclic
// summand realizers and a coproduct fold, stable data through the universal
// stable square group, both finished by a pushforward.
SgRealization realize_sg(const KTriple& target, RealizeMode mode);

// Realizes f as the degree map of a square group.
SgRealization realize_delta(const AbHom& f);

}  // namespace sqg
