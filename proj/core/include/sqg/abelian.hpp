#pragma once

#include "sqg/linalg.hpp"

namespace sqg {

// Finitely generated abelian group in invariant factor form: the list holds
// the finite factors (each >= 2, each dividing the next) followed by one 0
// per free rank.
struct FgAbGroup {
  Vec fac;

  size_t ngens() const { return fac.size(); }
  size_t free_rank() const;
  size_t torsion_count() const { return ngens() - free_rank(); }
  bool is_finite() const { return free_rank() == 0; }
  bool is_trivial() const { return fac.empty(); }
  Int order() const;  // 0 when infinite
  bool operator==(const FgAbGroup&) const = default;
};

FgAbGroup parse_group(const std::string& text);
std::string format_group(const FgAbGroup& g);

FgAbGroup cyclic(const Int& n);  // n = 0 gives Z
FgAbGroup trivial_group();

// Element helpers; elements are coordinate vectors w.r.t. the group's gens.
Vec reduce(const FgAbGroup& g, Vec x);
Vec zero_of(const FgAbGroup& g);
Vec unit_of(const FgAbGroup& g, size_t i);
Vec add(const FgAbGroup& g, const Vec& x, const Vec& y);
Vec sub(const FgAbGroup& g, const Vec& x, const Vec& y);
Vec neg(const FgAbGroup& g, const Vec& x);
Vec smul(const FgAbGroup& g, const Int& k, const Vec& x);
bool is_zero(const FgAbGroup& g, const Vec& x);
Int element_order(const FgAbGroup& g, const Vec& x);  // 0 when infinite

// Iterate all elements of a finite group in lexicographic coordinate order.
// Returns false (and does not advance) when g is infinite and x wraps.
bool next_element(const FgAbGroup& g, Vec& x);
std::vector<Vec> all_elements(const FgAbGroup& g);  // finite groups only

// Homomorphism: column j of m is the image of source generator j.
struct AbHom {
  FgAbGroup src, dst;
  Mat m;

  Vec apply(const Vec& x) const;
};

AbHom hom_identity(const FgAbGroup& g);
AbHom hom_zero(const FgAbGroup& src, const FgAbGroup& dst);
AbHom hom_from_cols(const FgAbGroup& src, const FgAbGroup& dst, const std::vector<Vec>& cols);
AbHom compose(const AbHom& f, const AbHom& g);  // f after g
AbHom hom_add(const AbHom& f, const AbHom& g);
AbHom hom_sub(const AbHom& f, const AbHom& g);
AbHom hom_neg(const AbHom& f);
AbHom hom_smul(const Int& k, const AbHom& f);
AbHom hom_direct_sum(const AbHom& f, const AbHom& g);  // block map on canonical sums
bool hom_well_defined(const AbHom& f);
bool hom_equal(const AbHom& f, const AbHom& g);
bool hom_is_zero(const AbHom& f);

// Canonical form of Z^m / (column span of rels), with the projection onto
// canonical coordinates and a section of it.
struct GroupFromRelations {
  FgAbGroup group;
  Mat proj;  // group.ngens() x m
  Mat lift;  // m x group.ngens(), proj*lift = id
};
GroupFromRelations group_from_relations(size_t m, const Mat& rels);

// Subgroup of an ambient group, generators as ambient coordinate columns.
struct Subgroup {
  FgAbGroup ambient;
  FgAbGroup grp;
  Mat gens;  // ambient.ngens() x grp.ngens()

  Vec include(const Vec& sub_coords) const;
  std::optional<Vec> coords_of(const Vec& ambient_coords) const;
};

// Quotient of an ambient group with a chosen section.
struct QuotientMap {
  FgAbGroup ambient;
  FgAbGroup grp;
  Mat proj;  // grp.ngens() x ambient.ngens()
  Mat lift;  // ambient.ngens() x grp.ngens()

  Vec project(const Vec& ambient_coords) const;
  Vec lift_of(const Vec& q_coords) const;
};

struct HomAnalysis {
  Subgroup kernel;    // subgroup of src
  Subgroup image;     // subgroup of dst
  QuotientMap coker;  // quotient of dst
};

HomAnalysis hom_analysis(const AbHom& f);
Subgroup hom_kernel(const AbHom& f);
Subgroup hom_image(const AbHom& f);
QuotientMap hom_cokernel(const AbHom& f);
std::optional<Vec> hom_solve(const AbHom& f, const Vec& y);

// Structural maps packaged as homomorphisms.
AbHom subgroup_inclusion(const Subgroup& s);
AbHom quotient_projection(const QuotientMap& q);
AbHom quotient_section(const QuotientMap& q);  // one-sided: proj after lift = id

// Inverse of an isomorphism (throws std::logic_error when f is not one).
AbHom hom_inverse(const AbHom& f);

// Hom out of a presented group, from images of its structural generators;
// proj/lift translate between structural and canonical coordinates.
AbHom hom_from_struct(const FgAbGroup& src, const Mat& proj, const Mat& lift,
                      const FgAbGroup& dst, const std::vector<Vec>& img);

Subgroup subgroup_from_gens(const FgAbGroup& ambient, const std::vector<Vec>& gens);

bool is_isomorphic(const FgAbGroup& a, const FgAbGroup& b);

// Direct sum with canonical result and tracked injections/projections.
struct DirectSum {
  FgAbGroup group;
  std::vector<AbHom> inj;   // summand -> group
  std::vector<AbHom> proj;  // group -> summand
};
DirectSum direct_sum(const std::vector<FgAbGroup>& parts);

// Tensor product with structural pairing data.
struct TensorGroup {
  FgAbGroup a, b;
  FgAbGroup group;
  Mat proj, lift;  // between structural gens (i,j) lex and canonical coords

  size_t sidx(size_t i, size_t j) const { return i * b.ngens() + j; }
  Vec pair(const Vec& x, const Vec& y) const;
  Vec gen(size_t i, size_t j) const;  // image of structural generator
};
TensorGroup tensor(const FgAbGroup& a, const FgAbGroup& b);

// Swap braiding a (x) b -> b (x) a.
AbHom tensor_swap(const TensorGroup& ab, const TensorGroup& ba);

// Induced map f (x) g on tensor groups.
AbHom tensor_hom(const TensorGroup& sab, const TensorGroup& tab, const AbHom& f, const AbHom& g);

// Hom group with evaluation data.
struct HomGroup {
  FgAbGroup a, b;
  FgAbGroup group;
  Mat proj, lift;
  Vec mult;  // structural gen (i,j): a-gen i maps to mult * b-gen j

  size_t sidx(size_t i, size_t j) const { return i * b.ngens() + j; }
  AbHom to_hom(const Vec& coords) const;
  std::optional<Vec> from_hom(const AbHom& f) const;
};
HomGroup hom_group(const FgAbGroup& a, const FgAbGroup& b);

// Ext group with the cyclic classification data: the class of an extension
// of Z/d_i by B corresponds to an element of B / d_i B.
struct ExtGroup {
  FgAbGroup a, b;
  FgAbGroup group;
  Mat proj, lift;

  size_t sidx(size_t i, size_t j) const { return i * b.ngens() + j; }
  // t[i] in B, taken mod d_i B, for each torsion factor i of a (free factors
  // of a contribute nothing and their entries are ignored).
  Vec from_classification(const std::vector<Vec>& t) const;
  std::vector<Vec> to_classification(const Vec& coords) const;
};
ExtGroup ext_group(const FgAbGroup& a, const FgAbGroup& b);

// Pushforward Ext(a, f): Ext(a, b) -> Ext(a, b') along f : b -> b'.
Vec ext_push(const ExtGroup& s, const ExtGroup& t, const AbHom& f, const Vec& coords);

}  // namespace sqg
