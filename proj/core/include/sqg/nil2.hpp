#pragma once

#include "sqg/quadfun.hpp"

namespace sqg {

// Normalized 2-cochain q x q -> c. Structured form is bilinear coefficients
// plus one carry coefficient per torsion factor (always a cocycle once well
// defined); table form is a dense row-major table over the element
// enumeration of a finite q and can hold arbitrary cochains.
struct Cocycle {
  FgAbGroup q, c;
  bool structured = true;
  std::vector<std::vector<Vec>> bil;  // bil[i][j] in c
  std::vector<Vec> carry;             // per q generator, zero on free ones
  std::vector<Vec> table;             // q-order^2 entries, row-major

  Vec eval(const Vec& x, const Vec& y) const;
};

Cocycle cocycle_zero(const FgAbGroup& q, const FgAbGroup& c);
Cocycle cocycle_bilinear(const FgAbGroup& q, const FgAbGroup& c,
                         const std::vector<std::vector<Vec>>& bil);
Cocycle cocycle_from_table(const FgAbGroup& q, const FgAbGroup& c,
                           const std::vector<Vec>& table, const Int& max_order = 64);
Cocycle cocycle_to_table(const Cocycle& f, const Int& max_order = 64);
Cocycle cocycle_add(const Cocycle& f, const Cocycle& g);
Cocycle cocycle_neg(const Cocycle& f);
Cocycle cocycle_sub(const Cocycle& f, const Cocycle& g);

// Normalization, the cocycle identity (exhaustive on tables), and well
// definedness of the structured coefficients.
bool cocycle_valid(const Cocycle& f);

// Pointwise equality; mixed-mode comparisons go through tables.
bool cocycle_equal(const Cocycle& f, const Cocycle& g);

// Central extension data: elements are pairs (q, c) composed through f.
struct Nil2Group {
  FgAbGroup quotient;     // Q
  FgAbGroup center_part;  // C, central by construction
  Cocycle f;
};

struct Nil2El {
  Vec q, c;
};

Nil2Group nil2_group(const FgAbGroup& quotient, const FgAbGroup& center, Cocycle f);
bool nil2_validate(const Nil2Group& g);

Nil2El nil2_el(const Nil2Group& g, Vec q, Vec c);
Nil2El nil2_id(const Nil2Group& g);
Nil2El nil2_mul(const Nil2Group& g, const Nil2El& a, const Nil2El& b);
Nil2El nil2_inv(const Nil2Group& g, const Nil2El& a);
Nil2El nil2_pow(const Nil2Group& g, const Nil2El& a, const Int& n);
Nil2El nil2_commutator(const Nil2Group& g, const Nil2El& a, const Nil2El& b);
Int nil2_order(const Nil2Group& g, const Nil2El& a);  // 0 when infinite
bool nil2_is_central(const Nil2Group& g, const Nil2El& a);
bool nil2_el_equal(const Nil2Group& g, const Nil2El& a, const Nil2El& b);

// Degree-2 cohomology class through the split sequence
// 0 -> Ext(Q, C) -> H^2(Q, C) -> Hom(Lambda2 Q, C) -> 0.
struct H2Class {
  ExtClass ext_component;
  AbHom pairing_component;  // Lambda2(Q) -> C
};

H2Class h2_split(const Cocycle& f);
Cocycle class_to_cocycle(const H2Class& h);  // structured representative
bool h2_is_zero(const H2Class& h);
bool h2_equal(const H2Class& a, const H2Class& b);

// 1-cochain q -> c, either a value table or quadratic-with-linear
// coefficient data evaluated on reduced coordinates.
struct OneCochain {
  FgAbGroup q, c;
  bool structured = true;
  std::vector<std::vector<Vec>> quad;  // diagonal weights binom2(x_i), cross x_i x_j
  std::vector<Vec> lin;
  std::vector<Vec> table;

  Vec eval(const Vec& x) const;
};

std::optional<OneCochain> solve_coboundary(const Cocycle& f);
Cocycle coboundary(const OneCochain& g);  // (dg)(x,y) = g(x) + g(y) - g(x+y)

struct CentralExtension {
  Nil2Group total;
  AbHom kernel_inclusion;  // declared kernel -> center_part coordinates
  FgAbGroup base;
};

// The lower-triangular representative beta(e_i, e_j) = e_i ^ e_j for i > j;
// its commutator pairing is the identity on Lambda2(A).
CentralExtension canonical_TA(const FgAbGroup& a);
CentralExtension twist_TA(const CentralExtension& n, const ExtClass& x);
// Class of the cocycle difference in Ext(A, Lambda2 A); the pairings must agree.
ExtClass ta_difference(const CentralExtension& m, const CentralExtension& n);

}  // namespace sqg
