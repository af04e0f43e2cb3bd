#pragma once

// Tori split over a field of a tower, given by their character lattices with
// Galois action, and their point groups modulo the naive filtration.

#include <string>
#include <utility>

#include "ctt/units_transfer.hpp"

namespace ctt {

/// Finite group Gal(L/F) acting on Z^rank (the character lattice).  The
/// action is stored for every group element; matrices act on columns.
struct GaloisLattice {
  size_t rank = 1;
  std::vector<Mat> action;
  std::vector<std::vector<int>> table;
  std::vector<bool> inertia;
  int identity = 0;
  int frobenius = 0;  // an element inducing the residue Frobenius of L/F

  size_t order() const { return table.size(); }
  int inverse(int i) const;
  /// Action on the cocharacter lattice: transpose of the inverse.
  Mat cocharacter(int i) const;
};

/// Throws std::invalid_argument unless the matrices follow the table and are
/// invertible over Z.
void check_lattice(const GaloisLattice& x);
/// f : Z^src.rank -> Z^dst.rank with f src(s) = dst(s) f for every s.
bool is_equivariant(const GaloisLattice& src, const GaloisLattice& dst, const Mat& f);

enum class CatalogTag { split, weil_restriction, norm_one, general };
std::string tag_name(CatalogTag t);

struct TorusSpec {
  std::string label;
  TowerPtr F, L;                    // L splits the torus and is built on top of F
  std::vector<Automorphism> gamma;  // Gal(L/F), indexed like the lattice
  GaloisLattice lattice;
  CatalogTag tag = CatalogTag::general;
  int cyclic_generator = -1;        // norm_one: generator of gamma
};

/// Gal(L/F) with table, inertia flags and a Frobenius element, ordered as
/// returned by galois_group.
GaloisLattice galois_skeleton(const TowerPtr& F, const TowerPtr& L, std::vector<Automorphism>& gamma);

TorusSpec split_torus(const TowerPtr& F, const TowerPtr& L, size_t rank = 1);
TorusSpec weil_restriction(const TowerPtr& F, const TowerPtr& E);
/// Kernel of the norm for a cyclic E/F.
TorusSpec norm_one(const TowerPtr& F, const TowerPtr& E);
/// Lattice given by matrices for some group elements (indices into gamma);
/// the rest is generated through the table.
TorusSpec general_torus(const TowerPtr& F, const TowerPtr& L, const std::vector<std::pair<int, Mat>>& generators);
/// Res_{E/F} of a torus over E split by L (spec.F must be E, which must extend F).
TorusSpec weil_restrict(const TorusSpec& overE, const TowerPtr& F);

/// Lattice maps for T over F and Res = Res_{E/F} T_E:
/// first: X*(Res) -> X*(T) (dual of the diagonal T -> Res),
/// second: X*(T) -> X*(Res) (dual of the norm Res -> T).
struct DiagonalNorm {
  TorusSpec res;
  Mat diagonal_dual;
  Mat norm_dual;
};
DiagonalNorm diagonal_and_norm(const TorusSpec& T, const TowerPtr& E);

/// Wild inertia permutes some Z-basis of the character lattice.
bool weakly_induced(const TorusSpec& T);

/// Least k with Frobenius^k acting trivially on the lattice, capped at 12.
int default_stage_degree(const TorusSpec& T);

/// T(F) / T(F)^naive_r inside Hom(X*, L^x/(1+p_L^level)) with level = ceil(e r).
struct TorusPoints {
  TorusSpec spec;
  Rat r;
  int level = 1;
  UnitQuotient G;
  FgAbelianGroup tuples;          // G^rank
  std::vector<GroupHom> action;   // gamma on tuples
  Subgroup points;
  GroupHom inclusion;             // points.abstract() -> tuples
  bool exact = true;              // false: Gamma-fixed upper bound
  FgAbelianGroup coinvariants;    // X_* coinvariants under inertia
  Subgroup kottwitz_target;       // Frobenius-fixed part
  // A parametrizing group A -> points (onto), with the Kottwitz map on A.
  GroupHom param;
  GroupHom kappa_param;
  // Whether kappa_param kills ker(param), i.e. descends to points.  Fails
  // for some wild tori at small r, where the finite quotient is too coarse.
  bool kottwitz_defined = true;
  GroupHom kottwitz_map;          // points.abstract() -> coinvariants, when defined

  IVec kottwitz(const IVec& t) const;
  std::vector<int64_t> valuations(const IVec& t) const;
  std::vector<IVec> enumerate(int window, size_t max_count) const;
  std::string str(const IVec& t) const;
};

TorusPoints torus_points(const TorusSpec& T, const Rat& r, size_t max_order = 10000);

/// Subgroups of the tuple group contained in the points.
Subgroup bounded_part(const TorusPoints& P);
Subgroup naive_filtration(const TorusPoints& P, const Rat& s);  // s = 0 gives the bounded part
Subgroup iwahori_subgroup(const TorusPoints& P);                 // kernel of the Kottwitz map
Subgroup standard_filtration(const TorusPoints& P, const Rat& s);
/// Throws for tori that are not weakly induced or for s = 0.
Subgroup congruent_filtration(const TorusPoints& P, const Rat& s);

/// The map on tuples induced by a lattice map f : X*(T2) -> X*(T1), i.e. the
/// torus map T1 -> T2.  Both sides must share the unit quotient.
GroupHom tuple_map(const TorusPoints& P1, const TorusPoints& P2, const Mat& f);

/// Reduction G^n -> G_s^n of tuples to the level of another points quotient.
GroupHom tuple_reduction(const TorusPoints& high, const TorusPoints& low);

}  // namespace ctt
