#pragma once

// Finitely generated abelian groups Z^k / L where L is spanned by the columns of
// a relation matrix.  Everything is done over arbitrary-precision integers.

#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

namespace ctt {

using Int = boost::multiprecision::cpp_int;
using IVec = std::vector<Int>;

struct Mat {
  size_t rows = 0, cols = 0;
  std::vector<Int> a;

  Mat() = default;
  Mat(size_t r, size_t c) : rows(r), cols(c), a(r * c) {}
  static Mat identity(size_t n);
  static Mat from_rows(const std::vector<std::vector<long long>>& rows);
  static Mat from_columns(size_t rows, const std::vector<IVec>& cols);
  Int& operator()(size_t i, size_t j) { return a[i * cols + j]; }
  const Int& operator()(size_t i, size_t j) const { return a[i * cols + j]; }
  IVec column(size_t j) const;
  Mat operator*(const Mat& o) const;
  Mat operator-(const Mat& o) const;
  IVec operator*(const IVec& v) const;
  bool operator==(const Mat& o) const { return rows == o.rows && cols == o.cols && a == o.a; }
  Mat transpose() const;
  Int det() const;
  /// Inverse of a unimodular matrix; throws otherwise.
  Mat inverse_unimodular() const;
  std::string str() const;
};

Mat hcat(const Mat& a, const Mat& b);
Mat vcat(const Mat& a, const Mat& b);
Mat block_diag(const Mat& a, const Mat& b);

struct SmithForm {
  Mat U, D, V;        // U * A * V = D
  Mat Uinv, Vinv;
  size_t rank = 0;    // number of nonzero diagonal entries
};

SmithForm smith_normal_form(const Mat& A);

/// Basis (as columns) of the integer kernel {x : A x = 0}.
Mat integer_kernel(const Mat& A);

class FgAbelianGroup {
 public:
  FgAbelianGroup() : FgAbelianGroup(0, Mat(0, 0)) {}
  FgAbelianGroup(size_t ambient, Mat relations);
  static FgAbelianGroup free(size_t n);
  static FgAbelianGroup finite(const std::vector<Int>& orders);
  static FgAbelianGroup direct_sum(const FgAbelianGroup& a, const FgAbelianGroup& b);
  static FgAbelianGroup power(const FgAbelianGroup& a, size_t n);

  size_t ambient() const { return k_; }
  const Mat& relations() const { return rel_; }
  size_t rank() const { return rank_; }
  /// Invariant factors d_1 | d_2 | ..., each >= 2.
  const std::vector<Int>& torsion() const { return torsion_; }
  /// 0 when infinite.
  Int order() const;
  bool is_finite() const { return rank_ == 0; }
  std::string str() const;

  /// (free coordinates, torsion coordinates reduced mod d_i)
  IVec normal_form(const IVec& x) const;
  IVec from_normal(const IVec& nf) const;
  bool is_zero(const IVec& x) const;
  bool equal(const IVec& x, const IVec& y) const;
  IVec add(const IVec& x, const IVec& y) const;
  IVec neg(const IVec& x) const;
  IVec scale(const IVec& x, const Int& n) const;
  IVec zero() const { return IVec(k_, 0); }
  IVec basis(size_t i) const;

  /// All elements with free normal-form coordinates in [-window, window].
  /// Throws if the count would exceed max_count.
  std::vector<IVec> enumerate(int window, size_t max_count) const;
  size_t enumeration_size(int window) const;

 private:
  size_t k_;
  Mat rel_;
  Mat U_, Uinv_;
  std::vector<Int> diag_;  // per SNF coordinate: 1 (trivial), d >= 2, or 0 (free)
  std::vector<size_t> free_idx_, tors_idx_;
  size_t rank_ = 0;
  std::vector<Int> torsion_;
};

struct GroupHom {
  FgAbelianGroup source, target;
  Mat matrix;  // target.ambient x source.ambient

  GroupHom() = default;
  /// Checks that relations go to relations.
  GroupHom(FgAbelianGroup s, FgAbelianGroup t, Mat m);
  IVec apply(const IVec& x) const;
  GroupHom compose_after(const GroupHom& inner) const;  // this o inner
  bool equals(const GroupHom& o) const;
  bool is_identity() const;
};

/// Subgroup of an ambient group generated by explicit elements.
struct Subgroup {
  FgAbelianGroup ambient;
  std::vector<IVec> gens;

  /// Abstract group Z^m / (relations among the generators).
  FgAbelianGroup abstract() const;
  /// Inclusion abstract() -> ambient.
  GroupHom inclusion() const;
  bool contains(const IVec& x) const;
  bool contains(const Subgroup& h) const;
  bool equals(const Subgroup& h) const { return contains(h) && h.contains(*this); }
  Int order() const { return abstract().order(); }
  /// Coordinates c with sum c_i gens_i = x; throws if x is not in the subgroup.
  IVec coordinates(const IVec& x) const;

  // Smith form of [gens | relations], recomputed when the generators change.
  struct Cache;
  mutable std::shared_ptr<Cache> cache = nullptr;
  const Cache& cached() const;
};

Subgroup whole(const FgAbelianGroup& g);
Subgroup intersect(const Subgroup& a, const Subgroup& b);

Subgroup kernel(const GroupHom& h);
Subgroup image(const GroupHom& h);
/// target / image, with the projection from the target.
FgAbelianGroup cokernel(const GroupHom& h);

/// A finite group acting on M: maps[i] are endomorphisms of M and
/// table[i][j] is the index of maps[i] o maps[j].
struct GroupAction {
  std::vector<GroupHom> maps;
  std::vector<std::vector<int>> table;
};

/// Throws std::invalid_argument if the maps do not follow the table.
void check_action(const GroupAction& act);
Subgroup fixed_points(const GroupAction& act, const FgAbelianGroup& M);
/// M / <(s - 1) m>; the projection from M is the identity on ambient coordinates.
FgAbelianGroup coinvariants(const GroupAction& act, const FgAbelianGroup& M);
/// Endomorphisms of a quotient ambient -> same ambient, for induced actions on coinvariants.
GroupHom induced_on(const GroupHom& h, const FgAbelianGroup& quotient);

/// Result of building a finite abelian group from a black-box multiplication.
struct BlackBoxGroup {
  FgAbelianGroup group;                 // ambient coordinates = generators
  std::vector<uint64_t> generators;     // keys of the generators
  std::unordered_map<uint64_t, IVec> table;  // key -> ambient coordinates
  IVec dlog(uint64_t key) const;
  uint64_t element(const IVec& coords, const std::function<uint64_t(uint64_t, uint64_t)>& mul,
                   uint64_t identity) const;
};

/// Exhaustive generator search over a finite abelian group whose elements are
/// the given keys.  Throws if the group is larger than max_order.
BlackBoxGroup build_black_box(const std::vector<uint64_t>& elements, uint64_t identity,
                              const std::function<uint64_t(uint64_t, uint64_t)>& mul, size_t max_order);

std::string ivec_str(const IVec& v);

}  // namespace ctt
