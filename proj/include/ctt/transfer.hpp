#pragma once

// Tori over a close pair (F, F'), standard correspondents and the standard /
// congruent isomorphisms of point quotients, plus element-wise verifiers.

#include <optional>
#include <string>
#include <vector>

#include "ctt/tori.hpp"

namespace ctt {

/// (F, T) <->_l (F', T'): one certificate on the base, one on the splitting
/// fields, and the lattice shared by both sides.  spec2.gamma is indexed like
/// spec.gamma (matched automorphisms), so both specs carry the same lattice.
struct ClosePairDatum {
  ClosePairCertificate cert;   // F -> F' at level l
  ClosePairCertificate cert_L; // L -> L' at level l1 (= cert when L = F)
  TorusSpec spec, spec2;
  HerbrandData herbrand;       // L/F
  int64_t l1 = 0;
  std::vector<int> match;      // index into galois_group order of L'/F' (diagnostic)
  int match_level = 0;         // unit level used to identify automorphisms

  int level() const { return cert.level; }
};

/// Builds the F'-side torus.  L must be F or a single step above F.  With
/// `target`, that spec is used as the F'-side presentation instead of the
/// transferred one (its L' must agree with the transported step).
ClosePairDatum close_pair(const ClosePairCertificate& cert, const TorusSpec& spec,
                          const std::optional<TorusSpec>& target = std::nullopt);

/// The same pair seen from F'.
ClosePairDatum reversed(const ClosePairDatum& d);

/// r << l for the splitting step.
bool admissible(const ClosePairDatum& d, const Rat& r);

/// Block-diagonal Deligne isomorphism on Hom(X*, L^x/(1+p^level)) tuples.
GroupHom split_level_iso(const ClosePairDatum& d, const TorusPoints& P, const TorusPoints& P2);

/// t, t2 tuples over L and L': chi(t) and chi(t2) match under the unit
/// isomorphism for every basis character.
bool is_standard_correspondent(const ClosePairDatum& d, const TorusPoints& P, const TorusPoints& P2, const IVec& t,
                               const IVec& t2);

enum class IsoKind { standard, congruent };

struct TransferIso {
  IsoKind kind = IsoKind::standard;
  Rat r;
  TorusPoints P, P2;
  GroupHom tuples;  // the split-level map, restricted to points when ok
  bool ok = false;
  std::string witness;  // failure: a coset that has no partner
  // congruent only
  int stage_degree = 1;
  std::string stage_note;

  IVec apply(const IVec& t) const { return tuples.apply(t); }
};

/// Throws when r is not admissible; a missing isomorphism is reported in ok/witness.
TransferIso build_standard_iso(const ClosePairDatum& d, const Rat& r, size_t max_order = 10000);
/// stage_degree <= 0 picks default_stage_degree.
TransferIso build_congruent_iso(const ClosePairDatum& d, int m, int stage_degree = 0, size_t max_order = 10000);

/// Number of elements in the target window that are standard correspondents of t.
size_t count_correspondents(const TransferIso& iso, const ClosePairDatum& d, const IVec& t, int window,
                            size_t max_count);

struct Report {
  std::string name;
  bool pass = true;
  size_t checked = 0;
  std::string witness;
  std::string detail;
};

/// f : X*(T2) -> X*(T1), the torus map T1 -> T2 (both split over the same L).
Report verify_functoriality(const ClosePairDatum& d1, const ClosePairDatum& d2, const Mat& f, const Rat& r,
                            int window = 2, size_t max_count = 10000);
/// Split-level unit isomorphism against every matched automorphism.
Report verify_equivariance(const ClosePairDatum& d, const Rat& r, int window = 2);
Report verify_kottwitz(const ClosePairDatum& d, const TransferIso& iso, int window = 2, size_t max_count = 10000);
Report verify_level_reduction(const ClosePairDatum& d, const Rat& r, const Rat& s, int window = 2,
                              size_t max_count = 10000);
/// Every enumerated element has exactly one correspondent in the target window.
Report verify_uniqueness(const ClosePairDatum& d, const TransferIso& iso, int window = 1, size_t max_count = 10000);
/// iso is the identity on tuples (self pairs).
Report verify_identity(const TransferIso& iso);
std::string iso_kind_name(IsoKind k);

}  // namespace ctt
