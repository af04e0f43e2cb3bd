#pragma once

// Exact arithmetic in rings of integers of local field towers, truncated at a
// fixed working precision.
//
// A tower is a stack of layers.  Level 0 is the prime ring (Z/p^M for the mixed
// kind, F_p for the equal kind).  Above it sit an optional t-adic layer
// F_p[t]/t^M, unramified layers R[y]/(g(y)) and Eisenstein layers R[x]/(P(x)).
// An element of level k is stored flat: deg_k blocks, each an element of level
// k-1.  Every ring is O/p^M O, so all operations are exact in that quotient.

#include <cstdint>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace ctt {

using Vec = std::vector<int64_t>;
using Digit = std::vector<int>;

class Tower;
using TowerPtr = std::shared_ptr<const Tower>;

enum class Kind { mixed, equal };

struct BaseField {
  Kind kind = Kind::mixed;
  int p = 2;
  int f = 1;
  int M = 1;
};

bool is_prime(int64_t n);

/// Validates and returns the base description.  Throws std::invalid_argument.
BaseField make_base(Kind kind, int p, int f, int M);

enum class LayerKind { prime, tadic, unramified, eisenstein };

struct Layer {
  LayerKind kind = LayerKind::prime;
  int degree = 1;
  // monic defining polynomial, coefficients c_0..c_{d-1} living one level down
  std::vector<Vec> poly;
  // residue polynomial for unramified layers (coefficients are residue digits)
  std::vector<Digit> residue_poly;
  size_t dim = 1;
  size_t rdim = 1;
  int64_t prec = 0;
  uint64_t q = 0;
  // eisenstein only: -u^{-1}(c_1 + c_2 X + ... + X^{d-1}) where c_0 = pi_below * u
  Vec div_q;
};

inline constexpr int64_t kInfVal = INT64_MAX / 4;

class Tower : public std::enable_shared_from_this<Tower> {
 public:
  static TowerPtr base(const BaseField& b);

  /// New tower with one more layer on top.  `poly` lives at the current top
  /// level.  For unramified layers `residue_poly` carries the reduction.
  TowerPtr with_unramified(const std::vector<Digit>& residue_poly) const;
  TowerPtr with_eisenstein(const std::vector<Vec>& poly) const;

  const BaseField& base_field() const { return base_; }
  int p() const { return base_.p; }
  Kind kind() const { return base_.kind; }
  int64_t modulus() const { return mod_; }
  int top() const { return static_cast<int>(layers_.size()) - 1; }
  int base_top() const { return base_top_; }
  const Layer& layer(int k) const { return layers_.at(static_cast<size_t>(k)); }
  size_t dim(int k) const { return layer(k).dim; }
  size_t rdim(int k) const { return layer(k).rdim; }
  uint64_t q(int k) const { return layer(k).q; }
  uint64_t q() const { return q(top()); }
  int f() const { return static_cast<int>(rdim(top())); }
  /// Ramification index of level k over the base field.
  int e(int k) const;
  int e() const { return e(top()); }
  /// Precision of the top level in top-uniformizer digits.
  int64_t precision() const { return layer(top()).prec; }

  Vec zero(int k) const { return Vec(dim(k), 0); }
  Vec one(int k) const;
  Vec from_int(int k, int64_t n) const;
  Vec gen(int k) const;
  Vec uniformizer(int k) const;
  Vec embed(int from, int to, const Vec& x) const;

  Vec add(int k, const Vec& a, const Vec& b) const;
  Vec sub(int k, const Vec& a, const Vec& b) const;
  Vec neg(int k, const Vec& a) const;
  Vec mul(int k, const Vec& a, const Vec& b) const;
  Vec scale(int k, const Vec& a, int64_t n) const;
  Vec pow(int k, const Vec& a, uint64_t n) const;
  Vec inv(int k, const Vec& a) const;
  bool is_zero(const Vec& a) const;
  int64_t val(int k, const Vec& a) const;
  Vec div_pi(int k, const Vec& a) const;
  Digit residue(int k, const Vec& a) const;
  Vec lift(int k, const Digit& r) const;

  // top-level shorthands
  Vec one() const { return one(top()); }
  Vec add(const Vec& a, const Vec& b) const { return add(top(), a, b); }
  Vec sub(const Vec& a, const Vec& b) const { return sub(top(), a, b); }
  Vec mul(const Vec& a, const Vec& b) const { return mul(top(), a, b); }
  Vec pow(const Vec& a, uint64_t n) const { return pow(top(), a, n); }
  Vec inv(const Vec& a) const { return inv(top(), a); }
  /// Valuation at the top level; returns precision() for zero.
  int64_t valuation(const Vec& a) const;
  Vec uniformizer() const { return uniformizer(top()); }

  /// Evaluates a polynomial with coefficients at level k-1 (monic part not
  /// implied) at an element of level k.
  Vec eval_poly(int k, const std::vector<Vec>& coeffs, const Vec& x) const;

  // digits ------------------------------------------------------------------
  uint64_t digit_index(const Digit& d) const;
  Digit digit_from_index(uint64_t i) const;
  /// Unique expansion sum_{i<l} c_i pi^i; throws if l exceeds precision.
  std::vector<Digit> truncate(const Vec& x, int l) const;
  Vec reassemble(const std::vector<Digit>& digits) const;
  /// Class of x mod p^l as an integer: sum index(c_i) q^i.
  uint64_t class_index(const Vec& x, int l) const;
  Vec from_class(uint64_t idx, int l) const;
  uint64_t class_count(int l) const;

  std::string describe() const;
  std::string format(const Vec& x) const;

 private:
  Tower() = default;
  void mul_raw(int k, const int64_t* a, const int64_t* b, int64_t* out) const;
  int64_t val_raw(int k, const int64_t* a) const;
  bool zero_raw(int k, const int64_t* a) const;
  void finish_layer(Layer& L) const;

  BaseField base_;
  int64_t mod_ = 0;
  int base_top_ = 0;
  std::vector<Layer> layers_;
};

/// Element bound to a tower; the arithmetic refuses mixing towers.
struct RingElem {
  TowerPtr tower;
  Vec c;

  RingElem operator+(const RingElem& o) const;
  RingElem operator-(const RingElem& o) const;
  RingElem operator*(const RingElem& o) const;
  bool operator==(const RingElem& o) const;
  RingElem inv() const;
  int64_t valuation() const { return tower->valuation(c); }
  std::vector<Digit> truncate(int l) const { return tower->truncate(c, l); }
};

RingElem element(const TowerPtr& t, int64_t n);

// residue field helpers; elements of the residue field of level k are Digits
Digit res_mul(const Tower& t, int k, const Digit& a, const Digit& b);
Digit res_add(const Tower& t, int k, const Digit& a, const Digit& b);
/// g monic of degree d given by its low coefficients g_0..g_{d-1}.
bool residue_irreducible(const Tower& t, int k, const std::vector<Digit>& g);
/// First monic irreducible of degree d over the residue field of level k in
/// the lexicographic order of coefficient indices.
std::vector<Digit> first_irreducible(const Tower& t, int k, int d);
RingElem uniformizer(const TowerPtr& t);

/// O/p^l together with the class of the uniformizer in p/p^{l+1}.
struct TruncatedTriple {
  TowerPtr tower;
  int level = 1;

  uint64_t size() const { return tower->class_count(level); }
  std::vector<Digit> digits(uint64_t idx) const;
  uint64_t add(uint64_t a, uint64_t b) const;
  uint64_t mul(uint64_t a, uint64_t b) const;
  uint64_t uniformizer_class() const;
};

TruncatedTriple truncated_triple(const TowerPtr& t, int l);

}  // namespace ctt
