#pragma once

#include "sqg/abelian.hpp"

#include <string>

namespace sqg {

enum class Functor { P, Gamma, Psi, Sym2, Lambda2, LambdaTilde2, Tensor2, PhiN, Phi };

// Parses "P", "Gamma", ..., "Phi", "Phi_3"; phi_n receives the index for Phi_n.
Functor parse_functor(const std::string& name, Int& phi_n);
std::string functor_name(Functor f, const Int& phi_n = 0);

// Structural generators of a functor value over the invariant-factor
// generators e_0..e_{k-1} of the input group.
enum class GenKind {
  Diag,   // gamma(e_i), e_i (x) e_i, e_i.e_i, ...
  Cross,  // (e_i|e_j), e_i (x) e_j, e_i.e_j, e_i ^ e_j, ...
  PU,     // p(e_i)
  PV,     // (e_i|e_i)_p
  PhiGen  // 2^n-layer class at factor i
};
struct StructGen {
  GenKind kind;
  size_t i = 0, j = 0;
  Int n = 0;  // layer for PhiGen
};

struct FunctorValue {
  Functor name = Functor::P;
  Int phi_n = 0;  // set for PhiN
  FgAbGroup input;
  FgAbGroup group;
  Mat proj, lift;  // structural generators <-> canonical coordinates
  std::vector<StructGen> sgens;

  // Oracle-backed values carry evaluation tables instead of formulas.
  bool from_oracle = false;
  std::vector<Vec> oracle_quad;  // indexed by element index of input
  std::vector<Vec> oracle_pair;  // indexed by nonzero-pair index (Sym2/Lambda2)
};

FunctorValue quad_value(Functor name, const FgAbGroup& a);
FunctorValue quad_value_phi(const Int& n, const FgAbGroup& a);

// p(a), gamma(a), a (x) a, a.a, phi_n(a), ... as canonical coordinates.
Vec eval_quad(const FunctorValue& fv, const Vec& a);
// (a|b), a (x) b, a.b, a ^ b, ... as canonical coordinates.
Vec eval_pair(const FunctorValue& fv, const Vec& a, const Vec& b);
// Canonical coordinates of one structural generator.
Vec struct_gen_value(const FunctorValue& fv, size_t s);

// Assembles the hom sending each structural generator of fv to the given
// canonical dst coordinates.
AbHom hom_on_struct_gens(const FunctorValue& fv, const FgAbGroup& dst,
                         const std::vector<Vec>& img);

enum class NatMapName { J, Q, Tau, TauPrime, Iota, Nu, FPM, GammaMod2, PsiMod2 };
NatMapName parse_nat_map(const std::string& name);
std::string nat_map_name(NatMapName which);

// The named natural transformation evaluated at A, as a map between the
// canonical groups of the corresponding functor values (or A itself / Z/2(x)A
// where applicable).
AbHom nat_map(NatMapName which, const FgAbGroup& a);

// F(h) between canonical functor values.
AbHom induced_map(Functor name, const AbHom& h);
AbHom induced_map_phi(const Int& n, const AbHom& h);

struct CrossEffectReport {
  bool ok = false;
  FgAbGroup sum;    // F(A) + F(B) + cross terms, canonical
  FgAbGroup whole;  // F(A+B)
  AbHom witness;    // sum -> whole on generators
};
CrossEffectReport cross_effect_check(Functor name, const FgAbGroup& a, const FgAbGroup& b);

struct ExtClass {
  ExtGroup ext;
  Vec coords;
  bool zero() const { return is_zero(ext.group, coords); }
};

// Class of the extension 0 -> Sym2(A) -> P(A) -> A -> 0 in Ext(A, Sym2(A));
// with reduced=true, pushed forward along Sym2(A) -> Sym2(A/2A).
ExtClass theta(const FgAbGroup& a, bool reduced = false);

// Independent presentation/group-ring computations of P, Gamma, Sym2, Lambda2.
FunctorValue oracle_value(Functor name, const FgAbGroup& a, const Int& max_order = 64);

int v2(const Int& n);
Int odd_part(const Int& n);

// Mixed-radix indexing of a finite group's elements, lexicographic.
struct ElementIndex {
  FgAbGroup g;
  std::vector<size_t> stride;
  size_t size = 1;

  size_t index(const Vec& x) const;
  Vec element(size_t idx) const;
};
ElementIndex element_index(const FgAbGroup& g);

}  // namespace sqg
