#pragma once

// Unit groups F^x / (1 + p^l) as finitely generated abelian groups, and the
// maps between them induced by close-pair certificates, inclusions of fields,
// Galois automorphisms and reduction of the level.

#include <string>

#include "ctt/abelian.hpp"
#include "ctt/extensions.hpp"

namespace ctt {

/// F^x/(1+p^level) = Z x (O/p^level)^x.  Ambient coordinates are
/// (valuation, coordinates of the unit part on the generators found by the
/// black-box search).
struct UnitQuotient {
  TowerPtr tower;
  int level = 1;
  BlackBoxGroup units;
  FgAbelianGroup group;

  uint64_t unit_order() const;
  IVec element(int64_t valuation, uint64_t unit_class) const;
  int64_t valuation_of(const IVec& x) const { return static_cast<int64_t>(x.at(0)); }
  uint64_t unit_class(const IVec& x) const;
  /// Multiplication of unit classes in O/p^level.
  uint64_t mul_class(uint64_t a, uint64_t b) const;
  /// "(v, [d0 d1 ...])" with the digit indices of the unit part.
  std::string str(const IVec& x) const;
};

/// Throws if the level exceeds the working precision or the unit group is
/// larger than max_order.
UnitQuotient unit_quotient(const TowerPtr& t, int level, size_t max_order = 10000);

/// (val(x), class of x pi^-val(x)); x lives at the top of the tower.
IVec project(const UnitQuotient& U, const Vec& x);

/// The isomorphism U -> U2 that is digit-wise on units and sends the F
/// uniformizer to its certified image.  Both quotients must sit on the
/// certificate's towers at the same level, at most the certificate level.
GroupHom deligne_unit_iso(const ClosePairCertificate& c, const UnitQuotient& U, const UnitQuotient& U2);

/// Map induced by F^x inside L^x, L a tower built on top of F.
GroupHom unit_inclusion(const UnitQuotient& lower, const UnitQuotient& upper);

/// Action of an automorphism of the top level.
GroupHom galois_on_units(const UnitQuotient& U, const Automorphism& s);

/// Reduction from level h.level to the lower level of l (same tower).
GroupHom unit_level_reduction(const UnitQuotient& h, const UnitQuotient& l);

/// True iff h is injective and onto.
bool is_isomorphism(const GroupHom& h);

}  // namespace ctt
