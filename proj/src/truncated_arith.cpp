#include "ctt/truncated_arith.hpp"

#include <algorithm>
#include <sstream>

namespace ctt {

namespace {

int64_t mulmod(int64_t a, int64_t b, int64_t m) {
  return static_cast<int64_t>((static_cast<__int128>(a) * b) % m);
}

int64_t norm(int64_t a, int64_t m) {
  a %= m;
  return a < 0 ? a + m : a;
}

}  // namespace

bool is_prime(int64_t n) {
  if (n < 2) return false;
  for (int64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

BaseField make_base(Kind kind, int p, int f, int M) {
  if (!is_prime(p)) throw std::invalid_argument("make_base: p = " + std::to_string(p) + " is not prime");
  if (f < 1) throw std::invalid_argument("make_base: residue degree must be >= 1");
  if (M < 1) throw std::invalid_argument("make_base: working precision must be >= 1");
  if (kind == Kind::mixed) {
    __int128 m = 1;
    for (int i = 0; i < M; ++i) {
      m *= p;
      if (m > (static_cast<__int128>(1) << 62))
        throw std::invalid_argument("make_base: p^M does not fit in 62 bits");
    }
  }
  return BaseField{kind, p, f, M};
}

TowerPtr Tower::base(const BaseField& b0) {
  BaseField b = make_base(b0.kind, b0.p, b0.f, b0.M);
  std::shared_ptr<Tower> t(new Tower());
  t->base_ = b;
  if (b.kind == Kind::mixed) {
    int64_t m = 1;
    for (int i = 0; i < b.M; ++i) m *= b.p;
    t->mod_ = m;
  } else {
    t->mod_ = b.p;
  }
  Layer L0;
  L0.kind = LayerKind::prime;
  L0.degree = 1;
  t->finish_layer(L0);
  t->layers_.push_back(L0);
  if (b.kind == Kind::equal) {
    Layer Lt;
    Lt.kind = LayerKind::tadic;
    Lt.degree = b.M;
    Lt.poly.assign(static_cast<size_t>(b.M), t->zero(0));
    t->finish_layer(Lt);
    t->layers_.push_back(Lt);
  }
  t->base_top_ = t->top();
  if (b.f > 1) {
    auto g = first_irreducible(*t, t->top(), b.f);
    auto t2 = t->with_unramified(g);
    std::shared_ptr<Tower> t3(new Tower(*t2));
    t3->base_top_ = t3->top();
    return t3;
  }
  return t;
}

void Tower::finish_layer(Layer& L) const {
  switch (L.kind) {
    case LayerKind::prime:
      L.dim = 1;
      L.rdim = 1;
      L.prec = base_.kind == Kind::mixed ? base_.M : kInfVal;
      L.q = static_cast<uint64_t>(base_.p);
      return;
    default:
      break;
  }
  const Layer& B = layers_.back();
  L.dim = B.dim * static_cast<size_t>(L.degree);
  if (L.kind == LayerKind::unramified) {
    L.rdim = B.rdim * static_cast<size_t>(L.degree);
    L.prec = B.prec;
    L.q = 1;
    for (size_t i = 0; i < L.rdim; ++i) L.q *= static_cast<uint64_t>(base_.p);
  } else {
    L.rdim = B.rdim;
    L.q = B.q;
    L.prec = L.kind == LayerKind::tadic ? L.degree : B.prec * L.degree;
  }
}

TowerPtr Tower::with_unramified(const std::vector<Digit>& rpoly) const {
  int k = top();
  if (rpoly.empty()) throw std::invalid_argument("with_unramified: empty polynomial");
  std::shared_ptr<Tower> t(new Tower(*this));
  Layer L;
  L.kind = LayerKind::unramified;
  L.degree = static_cast<int>(rpoly.size());
  L.residue_poly = rpoly;
  for (const auto& c : rpoly) L.poly.push_back(lift(k, c));
  t->finish_layer(L);
  t->layers_.push_back(L);
  return t;
}

TowerPtr Tower::with_eisenstein(const std::vector<Vec>& poly) const {
  int k = top();
  if (poly.empty()) throw std::invalid_argument("with_eisenstein: empty polynomial");
  if (layer(k).kind == LayerKind::prime && base_.kind == Kind::equal)
    throw std::invalid_argument("with_eisenstein: no uniformizer below");
  if (val(k, poly[0]) != 1) throw std::invalid_argument("with_eisenstein: constant term must have valuation 1");
  for (size_t i = 1; i < poly.size(); ++i)
    if (val(k, poly[i]) < 1) throw std::invalid_argument("with_eisenstein: middle coefficient is a unit");
  std::shared_ptr<Tower> t(new Tower(*this));
  Layer L;
  L.kind = LayerKind::eisenstein;
  L.degree = static_cast<int>(poly.size());
  L.poly = poly;
  t->finish_layer(L);
  // -u^{-1}(c_1 + ... + c_{d-1} X^{d-2} + X^{d-1})
  Vec u = div_pi(k, poly[0]);
  Vec ui = neg(k, inv(k, u));
  size_t sd = dim(k);
  L.div_q.assign(L.dim, 0);
  for (int i = 0; i < L.degree; ++i) {
    Vec c = i + 1 < L.degree ? poly[static_cast<size_t>(i + 1)] : one(k);
    Vec blk = mul(k, ui, c);
    std::copy(blk.begin(), blk.end(), L.div_q.begin() + static_cast<long>(sd * static_cast<size_t>(i)));
  }
  t->layers_.push_back(L);
  return t;
}

int Tower::e(int k) const {
  int r = 1;
  for (int j = 0; j <= k; ++j)
    if (layer(j).kind == LayerKind::eisenstein) r *= layer(j).degree;
  return r;
}

Vec Tower::one(int k) const {
  Vec v = zero(k);
  v[0] = 1 % mod_;
  return v;
}

Vec Tower::from_int(int k, int64_t n) const {
  Vec v = zero(k);
  v[0] = norm(n, mod_);
  return v;
}

Vec Tower::gen(int k) const {
  if (layer(k).kind == LayerKind::prime) throw std::invalid_argument("gen: prime level has no generator");
  Vec v = zero(k);
  if (layer(k).degree == 1) {
    // degree one layer: the generator is -c_0
    Vec c = neg(k - 1, layer(k).poly[0]);
    std::copy(c.begin(), c.end(), v.begin());
    return v;
  }
  v[dim(k - 1)] = 1;
  return v;
}

Vec Tower::uniformizer(int k) const {
  const Layer& L = layer(k);
  switch (L.kind) {
    case LayerKind::prime:
      if (base_.kind == Kind::equal) throw std::invalid_argument("uniformizer: F_p has none");
      return from_int(0, base_.p);
    case LayerKind::tadic:
    case LayerKind::eisenstein:
      return gen(k);
    case LayerKind::unramified:
      return embed(k - 1, k, uniformizer(k - 1));
  }
  return {};
}

Vec Tower::embed(int from, int to, const Vec& x) const {
  if (x.size() != dim(from)) throw std::invalid_argument("embed: size mismatch");
  Vec v = zero(to);
  std::copy(x.begin(), x.end(), v.begin());
  return v;
}

Vec Tower::add(int k, const Vec& a, const Vec& b) const {
  Vec r(dim(k));
  for (size_t i = 0; i < r.size(); ++i) {
    int64_t s = a[i] + b[i];
    r[i] = s >= mod_ ? s - mod_ : s;
  }
  return r;
}

Vec Tower::sub(int k, const Vec& a, const Vec& b) const {
  Vec r(dim(k));
  for (size_t i = 0; i < r.size(); ++i) {
    int64_t s = a[i] - b[i];
    r[i] = s < 0 ? s + mod_ : s;
  }
  return r;
}

Vec Tower::neg(int k, const Vec& a) const {
  Vec r(dim(k));
  for (size_t i = 0; i < r.size(); ++i) r[i] = a[i] == 0 ? 0 : mod_ - a[i];
  return r;
}

Vec Tower::scale(int k, const Vec& a, int64_t n) const {
  Vec r(dim(k));
  int64_t nn = norm(n, mod_);
  for (size_t i = 0; i < r.size(); ++i) r[i] = mulmod(a[i], nn, mod_);
  return r;
}

bool Tower::zero_raw(int k, const int64_t* a) const {
  for (size_t i = 0; i < dim(k); ++i)
    if (a[i] != 0) return false;
  return true;
}

bool Tower::is_zero(const Vec& a) const {
  return std::all_of(a.begin(), a.end(), [](int64_t x) { return x == 0; });
}

void Tower::mul_raw(int k, const int64_t* a, const int64_t* b, int64_t* out) const {
  if (k == 0) {
    out[0] = mulmod(a[0], b[0], mod_);
    return;
  }
  const Layer& L = layer(k);
  const size_t sd = dim(k - 1);
  const size_t d = static_cast<size_t>(L.degree);
  std::vector<int64_t> prod((2 * d - 1) * sd, 0);
  std::vector<int64_t> tmp(sd);
  for (size_t i = 0; i < d; ++i) {
    if (zero_raw(k - 1, a + i * sd)) continue;
    for (size_t j = 0; j < d; ++j) {
      if (i + j >= d && L.kind == LayerKind::tadic) break;
      if (zero_raw(k - 1, b + j * sd)) continue;
      mul_raw(k - 1, a + i * sd, b + j * sd, tmp.data());
      int64_t* dst = prod.data() + (i + j) * sd;
      for (size_t s = 0; s < sd; ++s) {
        int64_t v = dst[s] + tmp[s];
        dst[s] = v >= mod_ ? v - mod_ : v;
      }
    }
  }
  if (L.kind != LayerKind::tadic) {
    for (size_t i = 2 * d - 2; i >= d; --i) {
      const int64_t* c = prod.data() + i * sd;
      if (zero_raw(k - 1, c)) continue;
      for (size_t j = 0; j < d; ++j) {
        const Vec& pj = L.poly[j];
        if (is_zero(pj)) continue;
        mul_raw(k - 1, c, pj.data(), tmp.data());
        int64_t* dst = prod.data() + (i - d + j) * sd;
        for (size_t s = 0; s < sd; ++s) {
          int64_t v = dst[s] - tmp[s];
          dst[s] = v < 0 ? v + mod_ : v;
        }
      }
    }
  }
  std::copy(prod.begin(), prod.begin() + static_cast<long>(d * sd), out);
}

Vec Tower::mul(int k, const Vec& a, const Vec& b) const {
  Vec r(dim(k));
  mul_raw(k, a.data(), b.data(), r.data());
  return r;
}

Vec Tower::pow(int k, const Vec& a, uint64_t n) const {
  Vec r = one(k), b = a;
  while (n) {
    if (n & 1) r = mul(k, r, b);
    n >>= 1;
    if (n) b = mul(k, b, b);
  }
  return r;
}

Vec Tower::inv(int k, const Vec& a) const {
  if (val(k, a) != 0) throw std::invalid_argument("inv: element is not a unit");
  Vec y = pow(k, a, q(k) - 2);
  Vec one_k = one(k);
  for (int it = 0; it < 128; ++it) {
    Vec err = sub(k, one_k, mul(k, a, y));
    if (is_zero(err)) return y;
    y = add(k, y, mul(k, y, err));
  }
  throw std::logic_error("inv: Newton iteration did not converge");
}

int64_t Tower::val_raw(int k, const int64_t* a) const {
  const Layer& L = layer(k);
  if (k == 0) {
    if (a[0] == 0) return kInfVal;
    int64_t v = 0, x = a[0];
    while (x % base_.p == 0) {
      x /= base_.p;
      ++v;
    }
    return v;
  }
  const size_t sd = dim(k - 1);
  int64_t best = kInfVal;
  for (int i = 0; i < L.degree; ++i) {
    int64_t v = val_raw(k - 1, a + static_cast<size_t>(i) * sd);
    if (v >= kInfVal) continue;
    int64_t w = L.kind == LayerKind::unramified ? v : v * L.degree + i;
    best = std::min(best, w);
  }
  return best;
}

int64_t Tower::val(int k, const Vec& a) const { return val_raw(k, a.data()); }

int64_t Tower::valuation(const Vec& a) const {
  int64_t v = val(top(), a);
  return std::min(v, precision());
}

Vec Tower::div_pi(int k, const Vec& a) const {
  const Layer& L = layer(k);
  if (val(k, a) < 1) throw std::invalid_argument("div_pi: element is not divisible by the uniformizer");
  switch (L.kind) {
    case LayerKind::prime:
      if (base_.kind == Kind::equal) return zero(0);
      return Vec{a[0] / base_.p};
    case LayerKind::tadic: {
      Vec r = zero(k);
      std::copy(a.begin() + 1, a.end(), r.begin());
      return r;
    }
    case LayerKind::unramified: {
      const size_t sd = dim(k - 1);
      Vec r(dim(k));
      for (int i = 0; i < L.degree; ++i) {
        Vec blk(a.begin() + static_cast<long>(sd * static_cast<size_t>(i)),
                a.begin() + static_cast<long>(sd * static_cast<size_t>(i + 1)));
        Vec d = div_pi(k - 1, blk);
        std::copy(d.begin(), d.end(), r.begin() + static_cast<long>(sd * static_cast<size_t>(i)));
      }
      return r;
    }
    case LayerKind::eisenstein: {
      const size_t sd = dim(k - 1);
      Vec r = zero(k);
      std::copy(a.begin() + static_cast<long>(sd), a.end(), r.begin());
      Vec a0(a.begin(), a.begin() + static_cast<long>(sd));
      if (!is_zero(a0)) {
        Vec a0p = embed(k - 1, k, div_pi(k - 1, a0));
        r = add(k, r, mul(k, a0p, L.div_q));
      }
      return r;
    }
  }
  return {};
}

Digit Tower::residue(int k, const Vec& a) const {
  const Layer& L = layer(k);
  if (k == 0) return Digit{static_cast<int>(a[0] % base_.p)};
  const size_t sd = dim(k - 1);
  if (L.kind != LayerKind::unramified) return residue(k - 1, Vec(a.begin(), a.begin() + static_cast<long>(sd)));
  Digit r;
  for (int i = 0; i < L.degree; ++i) {
    Digit d = residue(k - 1, Vec(a.begin() + static_cast<long>(sd * static_cast<size_t>(i)),
                                 a.begin() + static_cast<long>(sd * static_cast<size_t>(i + 1))));
    r.insert(r.end(), d.begin(), d.end());
  }
  return r;
}

Vec Tower::lift(int k, const Digit& r) const {
  if (r.size() != rdim(k)) throw std::invalid_argument("lift: residue digit has wrong length");
  const Layer& L = layer(k);
  if (k == 0) return Vec{norm(r[0], base_.p)};
  if (L.kind != LayerKind::unramified) return embed(k - 1, k, lift(k - 1, r));
  const size_t sd = dim(k - 1);
  const size_t rd = rdim(k - 1);
  Vec v = zero(k);
  for (int i = 0; i < L.degree; ++i) {
    Digit part(r.begin() + static_cast<long>(rd * static_cast<size_t>(i)),
               r.begin() + static_cast<long>(rd * static_cast<size_t>(i + 1)));
    Vec b = lift(k - 1, part);
    std::copy(b.begin(), b.end(), v.begin() + static_cast<long>(sd * static_cast<size_t>(i)));
  }
  return v;
}

Vec Tower::eval_poly(int k, const std::vector<Vec>& coeffs, const Vec& x) const {
  Vec r = zero(k);
  for (size_t i = coeffs.size(); i-- > 0;) r = add(k, mul(k, r, x), embed(k - 1, k, coeffs[i]));
  return r;
}

uint64_t Tower::digit_index(const Digit& d) const {
  uint64_t r = 0;
  for (size_t i = d.size(); i-- > 0;) r = r * static_cast<uint64_t>(base_.p) + static_cast<uint64_t>(d[i]);
  return r;
}

Digit Tower::digit_from_index(uint64_t i) const {
  Digit d(rdim(top()));
  for (auto& x : d) {
    x = static_cast<int>(i % static_cast<uint64_t>(base_.p));
    i /= static_cast<uint64_t>(base_.p);
  }
  return d;
}

std::vector<Digit> Tower::truncate(const Vec& x0, int l) const {
  if (l < 0 || l > precision())
    throw std::invalid_argument("truncate: level " + std::to_string(l) + " exceeds working precision " +
                                std::to_string(precision()));
  std::vector<Digit> out;
  Vec x = x0;
  int k = top();
  for (int i = 0; i < l; ++i) {
    Digit c = residue(k, x);
    out.push_back(c);
    if (i + 1 < l) x = div_pi(k, sub(k, x, lift(k, c)));
  }
  return out;
}

Vec Tower::reassemble(const std::vector<Digit>& digits) const {
  int k = top();
  Vec pi = uniformizer(k);
  Vec r = zero(k);
  for (size_t i = digits.size(); i-- > 0;) r = add(k, mul(k, r, pi), lift(k, digits[i]));
  return r;
}

uint64_t Tower::class_count(int l) const {
  uint64_t n = 1;
  for (int i = 0; i < l; ++i) {
    if (n > (static_cast<uint64_t>(1) << 62) / q()) throw std::invalid_argument("class_count: too many classes");
    n *= q();
  }
  return n;
}

uint64_t Tower::class_index(const Vec& x, int l) const {
  auto ds = truncate(x, l);
  uint64_t r = 0;
  for (size_t i = ds.size(); i-- > 0;) r = r * q() + digit_index(ds[i]);
  return r;
}

Vec Tower::from_class(uint64_t idx, int l) const {
  std::vector<Digit> ds;
  for (int i = 0; i < l; ++i) {
    ds.push_back(digit_from_index(idx % q()));
    idx /= q();
  }
  return reassemble(ds);
}

std::string Tower::describe() const {
  std::ostringstream os;
  os << (base_.kind == Kind::mixed ? "mixed" : "equal") << "(p=" << base_.p << ", f=" << base_.f
     << ", M=" << base_.M << ")";
  for (int k = base_top_ + 1; k <= top(); ++k) {
    const Layer& L = layer(k);
    os << (L.kind == LayerKind::unramified ? " | unramified(" : " | eisenstein(") << L.degree << ")";
  }
  return os.str();
}

std::string Tower::format(const Vec& x) const {
  std::ostringstream os;
  os << "[";
  for (size_t i = 0; i < x.size(); ++i) os << (i ? "," : "") << x[i];
  os << "]";
  return os.str();
}

RingElem RingElem::operator+(const RingElem& o) const {
  if (tower != o.tower) throw std::invalid_argument("add: tower mismatch");
  return {tower, tower->add(c, o.c)};
}

RingElem RingElem::operator-(const RingElem& o) const {
  if (tower != o.tower) throw std::invalid_argument("sub: tower mismatch");
  return {tower, tower->sub(c, o.c)};
}

RingElem RingElem::operator*(const RingElem& o) const {
  if (tower != o.tower) throw std::invalid_argument("mul: tower mismatch");
  return {tower, tower->mul(c, o.c)};
}

bool RingElem::operator==(const RingElem& o) const { return tower == o.tower && c == o.c; }

RingElem RingElem::inv() const { return {tower, tower->inv(c)}; }

RingElem element(const TowerPtr& t, int64_t n) { return {t, t->from_int(t->top(), n)}; }

RingElem uniformizer(const TowerPtr& t) { return {t, t->uniformizer()}; }

Digit res_mul(const Tower& t, int k, const Digit& a, const Digit& b) {
  return t.residue(k, t.mul(k, t.lift(k, a), t.lift(k, b)));
}

Digit res_add(const Tower& t, int k, const Digit& a, const Digit& b) {
  return t.residue(k, t.add(k, t.lift(k, a), t.lift(k, b)));
}

namespace {

Digit res_from_index(const Tower& t, int k, uint64_t i) {
  Digit d(t.rdim(k));
  for (auto& x : d) {
    x = static_cast<int>(i % static_cast<uint64_t>(t.p()));
    i /= static_cast<uint64_t>(t.p());
  }
  return d;
}

bool res_is_zero(const Digit& d) {
  return std::all_of(d.begin(), d.end(), [](int x) { return x == 0; });
}

// Does the monic h (low coefficients) divide the monic g (low coefficients)?
bool monic_divides(const Tower& t, int k, const std::vector<Digit>& h, const std::vector<Digit>& g) {
  const int p = t.p();
  std::vector<Digit> r = g;
  r.push_back(Digit(t.rdim(k), 0));
  r.back()[0] = 1;
  std::vector<Digit> hm = h;
  hm.push_back(Digit(t.rdim(k), 0));
  hm.back()[0] = 1;
  const size_t dh = h.size();
  for (size_t i = r.size(); i-- > dh;) {
    Digit c = r[i];
    if (res_is_zero(c)) continue;
    for (size_t j = 0; j <= dh; ++j) {
      Digit prod = res_mul(t, k, c, hm[j]);
      Digit& dst = r[i - dh + j];
      for (size_t s = 0; s < dst.size(); ++s) dst[s] = ((dst[s] - prod[s]) % p + p) % p;
    }
  }
  for (size_t i = 0; i < dh; ++i)
    if (!res_is_zero(r[i])) return false;
  return true;
}

}  // namespace

bool residue_irreducible(const Tower& t, int k, const std::vector<Digit>& g) {
  const int d = static_cast<int>(g.size());
  const uint64_t q = t.q(k);
  for (int dh = 1; dh <= d / 2; ++dh) {
    uint64_t count = 1;
    for (int i = 0; i < dh; ++i) {
      count *= q;
      if (count > 50'000'000) throw std::invalid_argument("residue_irreducible: search space too large");
    }
    for (uint64_t idx = 0; idx < count; ++idx) {
      std::vector<Digit> h;
      uint64_t x = idx;
      for (int i = 0; i < dh; ++i) {
        h.push_back(res_from_index(t, k, x % q));
        x /= q;
      }
      if (monic_divides(t, k, h, g)) return false;
    }
  }
  return true;
}

std::vector<Digit> first_irreducible(const Tower& t, int k, int d) {
  if (d < 1) throw std::invalid_argument("first_irreducible: degree must be >= 1");
  const uint64_t q = t.q(k);
  uint64_t count = 1;
  for (int i = 0; i < d; ++i) {
    if (count > (static_cast<uint64_t>(1) << 40) / q) throw std::invalid_argument("first_irreducible: too large");
    count *= q;
  }
  for (uint64_t idx = 0; idx < count; ++idx) {
    std::vector<Digit> g;
    uint64_t x = idx;
    for (int i = 0; i < d; ++i) {
      g.push_back(res_from_index(t, k, x % q));
      x /= q;
    }
    if (res_is_zero(g[0])) continue;
    if (residue_irreducible(t, k, g)) return g;
  }
  throw std::logic_error("first_irreducible: none found");
}

TruncatedTriple truncated_triple(const TowerPtr& t, int l) {
  if (l < 1 || l > t->precision()) throw std::invalid_argument("truncated_triple: level out of range");
  return TruncatedTriple{t, l};
}

std::vector<Digit> TruncatedTriple::digits(uint64_t idx) const { return tower->truncate(tower->from_class(idx, level), level); }

uint64_t TruncatedTriple::add(uint64_t a, uint64_t b) const {
  return tower->class_index(tower->add(tower->from_class(a, level), tower->from_class(b, level)), level);
}

uint64_t TruncatedTriple::mul(uint64_t a, uint64_t b) const {
  return tower->class_index(tower->mul(tower->from_class(a, level), tower->from_class(b, level)), level);
}

uint64_t TruncatedTriple::uniformizer_class() const { return tower->class_index(tower->uniformizer(), level); }

}  // namespace ctt
