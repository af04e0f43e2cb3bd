#pragma once

// Extension steps, Galois actions, Herbrand functions and close-pair
// certificates.

#include <boost/multiprecision/cpp_int.hpp>
#include <optional>
#include <string>
#include <vector>

#include "ctt/truncated_arith.hpp"

namespace ctt {

using Rat = boost::multiprecision::cpp_rational;

std::string rat_str(const Rat& r);

// --- automorphisms ----------------------------------------------------------

/// Ring automorphism of level `level`, given by the images of the layer
/// generators (images[k] lives at level k; entries at or below the fixed
/// level are the generators themselves).
struct Automorphism {
  int level = 0;
  std::vector<Vec> images;
};

Automorphism identity_aut(const Tower& t, int level);
Vec apply_aut(const Tower& t, const Automorphism& s, int k, const Vec& x);
inline Vec apply_aut(const Tower& t, const Automorphism& s, const Vec& x) { return apply_aut(t, s, s.level, x); }
Automorphism compose(const Tower& t, const Automorphism& s, const Automorphism& u);  // s o u
bool same_aut(const Automorphism& a, const Automorphism& b);
/// Checks that every defining polynomial is killed by the image generator.
bool is_ring_endomorphism(const Tower& t, const Automorphism& s);

/// All automorphisms of level `top` over level `fixed`.  Throws if the
/// extension is not Galois or if a step is outside the supported cases
/// (unramified, degree two Eisenstein, tame binomial x^e - u pi).
std::vector<Automorphism> galois_group(const Tower& t, int fixed, int top);
/// Composition table: table[i][j] = index of G[i] o G[j].
std::vector<std::vector<int>> composition_table(const Tower& t, const std::vector<Automorphism>& G);

/// Frobenius generator of an unramified layer (identity below).
Automorphism frobenius(const Tower& t, int level);
/// True iff s induces the identity on the residue field.
bool is_inertia(const Tower& t, const Automorphism& s);

// --- steps ------------------------------------------------------------------

enum class StepKind { unramified, eisenstein };

struct ExtensionStep {
  StepKind kind = StepKind::unramified;
  int degree = 1;
  int level = 0;  // level of the layer in its tower
  std::optional<std::vector<Automorphism>> galois_action;
};

/// Degree f2 unramified extension.  Without a polynomial the first irreducible
/// one is used.  f2 == 1 returns the tower itself.
TowerPtr extend_unramified(const TowerPtr& t, int f2, const std::optional<std::vector<Digit>>& poly = std::nullopt);
TowerPtr extend_eisenstein(const TowerPtr& t, const std::vector<Vec>& poly);
/// Step data of the layer at `level` (galois action filled when supported).
ExtensionStep step_at(const TowerPtr& t, int level);
std::vector<ExtensionStep> steps(const TowerPtr& t);

// --- Herbrand functions ------------------------------------------------------

/// Continuous piecewise-linear function on [0, inf) through (0, 0).
struct PiecewiseLinear {
  std::vector<Rat> xs;      // breakpoints after 0, increasing
  std::vector<Rat> slopes;  // slopes on [0,x1], [x1,x2], ..., [x_last, inf)

  Rat operator()(const Rat& x) const;
  PiecewiseLinear inverse() const;
  /// this o inner
  PiecewiseLinear compose(const PiecewiseLinear& inner) const;
  static PiecewiseLinear linear(const Rat& slope);
  std::string str() const;
};

struct HerbrandData {
  std::vector<std::pair<Rat, Rat>> breaks;  // (lower break, index jump g_b / g_{b+})
  int e = 1;
  PiecewiseLinear phi, psi;
  int64_t different_val = 0;
  std::vector<Rat> upper_breaks() const;
};

/// Herbrand data of level `top` over level `fixed` from i(s) = val(s(x) - x).
HerbrandData ramification_breaks(const TowerPtr& t, int fixed, int top);
inline HerbrandData ramification_breaks(const TowerPtr& t) { return ramification_breaks(t, t->top() - 1, t->top()); }
/// Data of E2/F from E1/F (outer) and E2/E1 (inner).
HerbrandData compose_herbrand(const HerbrandData& outer, const HerbrandData& inner);
HerbrandData identity_herbrand();
/// Valuation of P'(pi) for the Eisenstein layer at `level`.
int64_t different_from_derivative(const TowerPtr& t, int level);

bool at_most_l_ramified(const HerbrandData& h, int64_t l);
/// psi(l); throws if the extension is not at most l-ramified.
int64_t l_one(const HerbrandData& h, int64_t l);
bool lleq(const Rat& r, int64_t l, const HerbrandData& h);

// --- close pairs --------------------------------------------------------------

struct ClosePairCertificate {
  TowerPtr F, F2;
  int level = 0;
  Vec pi_image;  // image of the F uniformizer in F2 (mod pi2^level)
  std::string note;
};

/// Digit-wise identification of O_F/p^l with O_F2/p^l.  Throws on residue
/// field mismatch, on the prime relation failing, or when the given
/// uniformizer image is not compatible.
ClosePairCertificate certify_close(const TowerPtr& F, const TowerPtr& F2, int l,
                                   const std::optional<Vec>& pi_image = std::nullopt);

/// x in F -> its image in F2, as a class at level s (<= cert level).
uint64_t transport_class(const ClosePairCertificate& c, const Vec& x, int s);
Vec transport(const ClosePairCertificate& c, const Vec& x, int s);
/// The reverse certificate F2 -> F.
ClosePairCertificate invert(const ClosePairCertificate& c);

struct StepSpec {
  StepKind kind = StepKind::unramified;
  int degree = 1;
  std::optional<std::vector<Digit>> residue_poly;  // unramified
  std::vector<Vec> poly;                           // eisenstein, at F's top level
};

struct TransferredExtension {
  TowerPtr E, E2;
  ClosePairCertificate cert;  // at level l(1)
  HerbrandData herbrand;      // E/F
  HerbrandData herbrand2;     // E2/F2
  int64_t l1 = 0;
};

TransferredExtension transfer_extension(const ClosePairCertificate& c, const StepSpec& step);

}  // namespace ctt
