#pragma once

#include "sqg/nil2.hpp"

namespace sqg {

// Presquare group. The e-part is stored as a central extension whose
// quotient is pi0 and whose center part is exactly Im P, so P is onto the
// declared center coordinates and the bracket lives on pi0 generators.
struct PreSquareGroup {
  Nil2Group me;
  FgAbGroup mee;
  AbHom sigma;  // involution on mee
  AbHom p;      // mee -> me.center_part coordinates
  std::vector<std::vector<Vec>> bracket;  // values in mee, on pi0 generators

  Vec bracket_eval(const Vec& x, const Vec& y) const;  // x, y in pi0 coordinates
};

struct PsgCheck {
  bool ok = true;
  std::string violation;
};

// Structural checks always run; the group-law axioms are additionally
// verified element by element when |Me| and |Mee| are within the bound
// (bound 0 skips the element sweep).
PsgCheck psg_validate(const PreSquareGroup& m, const Int& exhaustive_bound = 64);

struct PsgInvariants {
  FgAbGroup pi0;
  Subgroup pi1;          // kernel of P inside mee
  AbHom pi1_involution;  // on pi1.grp
  FgAbGroup pi1_minus;   // a in pi1 with a + sigma(a) = 0
  AbHom k;               // Gamma(pi0) -> pi1.grp
  bool is_psg0 = false;
  bool is_psgs = false;
  bool is_flat = false;
};

PsgInvariants psg_invariants(const PreSquareGroup& m);

// Homology data of the stable complex ... -> Mee -(Id-s)-> Mee -P-> Me.
struct QComplex {
  FgAbGroup pi1_bar;
  Subgroup pi1_bar_sub;       // inside mee/(Id-sigma)
  AbHom k_bar;                // Z/2 (x) pi0 -> pi1_bar
  PreSquareGroup underline_m; // sigma = Id on mee/(Id-sigma)
  AbHom epsilon;              // pi1 -> pi1_bar
  FgAbGroup h_even, h_odd;    // homology at the repeating tail
};

QComplex q_complex_homology(const PreSquareGroup& m);

enum class PsgCombine { Product, Coproduct };
PreSquareGroup psg_combine(PsgCombine kind, const PreSquareGroup& m, const PreSquareGroup& n);

// Pushout of mee along f : pi1 -> a where a carries the given involution.
// along is the canonical mee -> result.mee map and target_inclusion embeds a
// into result.mee; the latter restricts to an isomorphism a = ker(result P).
struct PsgPushforward {
  PreSquareGroup m;
  AbHom along;
  AbHom target_inclusion;
};
PsgPushforward psg_pushforward_map(const PreSquareGroup& m, const AbHom& f,
                                   const AbHom& involution);
PreSquareGroup psg_pushforward(const PreSquareGroup& m, const AbHom& f,
                               const AbHom& involution);

enum class OmegaVariant { Plain, Bar };
// The universal-coefficient presquare group over a central extension with
// identity commutator pairing; bar applies the stable reflection.
PreSquareGroup omega(const CentralExtension& n, OmegaVariant variant);

struct KTriple {
  int n = 2;          // 2: k from Gamma(pi_n); >= 3: k from Z/2 (x) pi_n
  FgAbGroup pi_n;
  FgAbGroup pi_n1;
  AbHom involution;   // on pi_n1
  AbHom k;
};

enum class RealizeMode { Flat23, Stable };
PreSquareGroup realize_psg(const KTriple& target, RealizeMode mode);

// Braided categorical group in reduced form: boundary lands in the center
// of ce and the brace descends to pi0 generators of ce.
struct Bcg {
  Nil2Group ce;
  FgAbGroup cee;
  AbHom boundary;  // cee -> ce.center_part coordinates
  std::vector<std::vector<Vec>> brace;  // values in cee, on ce.quotient generators
  bool symmetric = false;

  Vec brace_eval(const Vec& x, const Vec& y) const;
};

PsgCheck bcg_validate(const Bcg& b, const Int& exhaustive_bound = 64);

struct UpsilonLambda {
  Bcg bcg;
  Bcg scg;
  bool valid = false;
};

UpsilonLambda upsilon_lambda(const PreSquareGroup& m);

// e-part of the n-fold coproduct ([0] gives the trivial group, [1] gives Me).
Nil2Group odot_eval(const Int& n, const PreSquareGroup& m, const Int& max_n = 8);

struct MooreComplex {
  FgAbGroup mee;
  AbHom p;
  Nil2Group me;
};

MooreComplex moore_s1(const PreSquareGroup& m);

}  // namespace sqg
