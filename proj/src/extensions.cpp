#include "ctt/extensions.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

namespace ctt {

std::string rat_str(const Rat& r) {
  std::ostringstream os;
  os << numerator(r);
  if (denominator(r) != 1) os << "/" << denominator(r);
  return os.str();
}

// --- automorphisms ------------------------------------------------------------

Automorphism identity_aut(const Tower& t, int level) {
  Automorphism s;
  s.level = level;
  s.images.resize(static_cast<size_t>(level) + 1);
  for (int k = 1; k <= level; ++k) s.images[static_cast<size_t>(k)] = t.gen(k);
  return s;
}

namespace {

bool fixes_up_to(const Tower& t, const Automorphism& s, int k) {
  for (int j = 1; j <= k; ++j)
    if (s.images[static_cast<size_t>(j)] != t.gen(j)) return false;
  return true;
}

Vec block(const Tower& t, int k, const Vec& x, int i) {
  const size_t sd = t.dim(k - 1);
  return Vec(x.begin() + static_cast<long>(sd * static_cast<size_t>(i)),
             x.begin() + static_cast<long>(sd * static_cast<size_t>(i + 1)));
}

// monic polynomial with low coefficients c (level k-1) evaluated at x (level k)
Vec eval_monic(const Tower& t, int k, const std::vector<Vec>& c, const Vec& x) {
  Vec r = t.one(k);
  for (size_t i = c.size(); i-- > 0;) r = t.add(k, t.mul(k, r, x), t.embed(k - 1, k, c[i]));
  return r;
}

Vec eval_monic_derivative(const Tower& t, int k, const std::vector<Vec>& c, const Vec& x) {
  const size_t d = c.size();
  Vec r = t.from_int(k, static_cast<int64_t>(d));
  for (size_t i = d - 1; i-- > 0;)
    r = t.add(k, t.mul(k, r, x), t.scale(k, t.embed(k - 1, k, c[i + 1]), static_cast<int64_t>(i + 1)));
  return r;
}

// Newton iteration for a simple root of a monic polynomial, from an
// approximation that is already a root mod the uniformizer.
Vec newton_root(const Tower& t, int k, const std::vector<Vec>& c, Vec z) {
  for (int it = 0; it < 256; ++it) {
    Vec fz = eval_monic(t, k, c, z);
    if (t.is_zero(fz)) return z;
    Vec d = eval_monic_derivative(t, k, c, z);
    z = t.sub(k, z, t.mul(k, fz, t.inv(k, d)));
  }
  throw std::logic_error("newton_root: no convergence");
}

// residues r of level k with r^n = target
std::vector<Digit> residue_roots(const Tower& t, int k, uint64_t n, const Digit& target) {
  std::vector<Digit> out;
  const uint64_t q = t.q(k);
  if (q > 2'000'000) throw std::invalid_argument("residue_roots: residue field too large to search");
  for (uint64_t i = 1; i < q; ++i) {
    Digit r(t.rdim(k));
    uint64_t x = i;
    for (auto& v : r) {
      v = static_cast<int>(x % static_cast<uint64_t>(t.p()));
      x /= static_cast<uint64_t>(t.p());
    }
    if (t.residue(k, t.pow(k, t.lift(k, r), n)) == target) out.push_back(r);
  }
  return out;
}

// x^n = w at level k for a unit w, n prime to p
std::vector<Vec> nth_roots(const Tower& t, int k, uint64_t n, const Vec& w) {
  std::vector<Vec> out;
  std::vector<Vec> c(n, t.zero(k));
  // x^n - w as a monic polynomial over level k, solved at level k via the
  // one-variable Newton step x <- x - (x^n - w)/(n x^{n-1})
  for (const auto& r : residue_roots(t, k, n, t.residue(k, w))) {
    Vec x = t.lift(k, r);
    for (int it = 0; it < 256; ++it) {
      Vec f = t.sub(k, t.pow(k, x, n), w);
      if (t.is_zero(f)) break;
      Vec d = t.scale(k, t.pow(k, x, n - 1), static_cast<int64_t>(n));
      x = t.sub(k, x, t.mul(k, f, t.inv(k, d)));
      if (it == 255) throw std::logic_error("nth_roots: no convergence");
    }
    out.push_back(x);
  }
  return out;
}

bool all_zero_from(const Tower& t, const std::vector<Vec>& c, size_t from) {
  for (size_t i = from; i < c.size(); ++i)
    if (!t.is_zero(c[i])) return false;
  return true;
}

// roots at level k of the tau-conjugate of the k-th defining polynomial
std::vector<Vec> conjugate_roots(const Tower& t, int k, const Automorphism& tau) {
  const Layer& L = t.layer(k);
  std::vector<Vec> cc;
  for (const auto& c : L.poly) cc.push_back(apply_aut(t, tau, k - 1, c));
  const bool fixed_poly = cc == L.poly;
  std::vector<Vec> roots;
  if (L.kind == LayerKind::unramified) {
    if (!fixed_poly) throw std::invalid_argument("galois_group: unramified polynomial moved by a lower automorphism");
    Vec z = t.gen(k);
    for (int i = 0; i < L.degree; ++i) {
      roots.push_back(z);
      z = newton_root(t, k, L.poly, t.pow(k, z, t.q(k - 1)));
    }
    return roots;
  }
  if (L.kind != LayerKind::eisenstein) throw std::invalid_argument("galois_group: unsupported layer");
  const uint64_t d = static_cast<uint64_t>(L.degree);
  const bool binomial = all_zero_from(t, L.poly, 1);
  if (binomial && d % static_cast<uint64_t>(t.p()) != 0) {
    // x^d = -c0'  ;  x = zeta * c * pi with c^d = c0'/c0
    Vec u = t.mul(k - 1, t.div_pi(k - 1, cc[0]), t.inv(k - 1, t.div_pi(k - 1, L.poly[0])));
    auto cs = nth_roots(t, k - 1, d, u);
    if (cs.empty()) return roots;
    auto zetas = nth_roots(t, k - 1, d, t.one(k - 1));
    for (const auto& z : zetas) roots.push_back(t.mul(k, t.embed(k - 1, k, t.mul(k - 1, z, cs[0])), t.gen(k)));
    return roots;
  }
  if (d == 2) {
    if (!fixed_poly) throw std::invalid_argument("galois_group: degree two step moved by a lower automorphism");
    roots.push_back(t.gen(k));
    Vec other = t.sub(k, t.neg(k, t.embed(k - 1, k, L.poly[1])), t.gen(k));
    if (other != roots[0]) roots.push_back(other);  // equal roots: inseparable
    return roots;
  }
  throw std::invalid_argument("galois_group: unsupported Eisenstein step of degree " + std::to_string(d) +
                              " (only degree two and tame binomials carry a Galois action)");
}

}  // namespace

Vec apply_aut(const Tower& t, const Automorphism& s, int k, const Vec& x) {
  if (k == 0 || fixes_up_to(t, s, k)) return x;
  const Layer& L = t.layer(k);
  const Vec& img = s.images[static_cast<size_t>(k)];
  Vec r = t.zero(k);
  for (int i = L.degree; i-- > 0;) r = t.add(k, t.mul(k, r, img), t.embed(k - 1, k, apply_aut(t, s, k - 1, block(t, k, x, i))));
  return r;
}

Automorphism compose(const Tower& t, const Automorphism& s, const Automorphism& u) {
  if (s.level != u.level) throw std::invalid_argument("compose: level mismatch");
  Automorphism r;
  r.level = s.level;
  r.images.resize(s.images.size());
  for (int k = 1; k <= s.level; ++k) r.images[static_cast<size_t>(k)] = apply_aut(t, s, k, u.images[static_cast<size_t>(k)]);
  return r;
}

bool same_aut(const Automorphism& a, const Automorphism& b) { return a.level == b.level && a.images == b.images; }

bool is_ring_endomorphism(const Tower& t, const Automorphism& s) {
  for (int k = 1; k <= s.level; ++k) {
    const Layer& L = t.layer(k);
    const Vec& img = s.images[static_cast<size_t>(k)];
    if (L.kind == LayerKind::tadic) {
      if (!t.is_zero(t.pow(k, img, static_cast<uint64_t>(L.degree)))) return false;
      continue;
    }
    std::vector<Vec> cc;
    for (const auto& c : L.poly) cc.push_back(apply_aut(t, s, k - 1, c));
    if (!t.is_zero(eval_monic(t, k, cc, img))) return false;
  }
  return true;
}

std::vector<Automorphism> galois_group(const Tower& t, int fixed, int top) {
  if (fixed < t.base_top() || top > t.top() || fixed > top) throw std::invalid_argument("galois_group: bad levels");
  std::vector<Automorphism> cur{identity_aut(t, fixed)};
  size_t degree = 1;
  for (int k = fixed + 1; k <= top; ++k) {
    degree *= static_cast<size_t>(t.layer(k).degree);
    std::vector<Automorphism> next;
    for (const auto& tau : cur) {
      for (const auto& r : conjugate_roots(t, k, tau)) {
        Automorphism s = tau;
        s.level = k;
        s.images.push_back(r);
        next.push_back(std::move(s));
      }
    }
    cur = std::move(next);
  }
  if (cur.size() != degree)
    throw std::invalid_argument("galois_group: extension is not Galois (" + std::to_string(cur.size()) +
                                " automorphisms, degree " + std::to_string(degree) + ")");
  for (const auto& s : cur)
    if (!is_ring_endomorphism(t, s)) throw std::logic_error("galois_group: computed map is not a ring map");
  return cur;
}

std::vector<std::vector<int>> composition_table(const Tower& t, const std::vector<Automorphism>& G) {
  std::vector<std::vector<int>> tab(G.size(), std::vector<int>(G.size(), -1));
  for (size_t i = 0; i < G.size(); ++i)
    for (size_t j = 0; j < G.size(); ++j) {
      Automorphism c = compose(t, G[i], G[j]);
      for (size_t k = 0; k < G.size(); ++k)
        if (same_aut(c, G[k])) tab[i][j] = static_cast<int>(k);
      if (tab[i][j] < 0) throw std::logic_error("composition_table: not closed");
    }
  return tab;
}

Automorphism frobenius(const Tower& t, int level) {
  const Layer& L = t.layer(level);
  if (L.kind != LayerKind::unramified) throw std::invalid_argument("frobenius: layer is not unramified");
  Automorphism s = identity_aut(t, level);
  s.images[static_cast<size_t>(level)] = newton_root(t, level, L.poly, t.pow(level, t.gen(level), t.q(level - 1)));
  return s;
}

bool is_inertia(const Tower& t, const Automorphism& s) {
  for (int k = 1; k <= s.level; ++k) {
    if (t.layer(k).kind != LayerKind::unramified) continue;
    if (t.residue(k, s.images[static_cast<size_t>(k)]) != t.residue(k, t.gen(k))) return false;
  }
  return true;
}

// --- steps --------------------------------------------------------------------

TowerPtr extend_unramified(const TowerPtr& t, int f2, const std::optional<std::vector<Digit>>& poly) {
  if (f2 < 1) throw std::invalid_argument("extend_unramified: degree must be >= 1");
  if (f2 == 1) return t;
  std::vector<Digit> g;
  if (poly) {
    g = *poly;
    if (static_cast<int>(g.size()) != f2) throw std::invalid_argument("extend_unramified: polynomial degree mismatch");
    for (auto& c : g)
      if (c.size() != t->rdim(t->top())) throw std::invalid_argument("extend_unramified: coefficient has wrong length");
    if (!residue_irreducible(*t, t->top(), g))
      throw std::invalid_argument("extend_unramified: defining polynomial is reducible over the residue field");
  } else {
    g = first_irreducible(*t, t->top(), f2);
  }
  return t->with_unramified(g);
}

TowerPtr extend_eisenstein(const TowerPtr& t, const std::vector<Vec>& poly) { return t->with_eisenstein(poly); }

ExtensionStep step_at(const TowerPtr& t, int level) {
  const Layer& L = t->layer(level);
  if (level <= t->base_top()) throw std::invalid_argument("step_at: level belongs to the base field");
  ExtensionStep s;
  s.kind = L.kind == LayerKind::unramified ? StepKind::unramified : StepKind::eisenstein;
  s.degree = L.degree;
  s.level = level;
  try {
    s.galois_action = galois_group(*t, level - 1, level);
  } catch (const std::invalid_argument&) {
    s.galois_action.reset();
  }
  return s;
}

std::vector<ExtensionStep> steps(const TowerPtr& t) {
  std::vector<ExtensionStep> out;
  for (int k = t->base_top() + 1; k <= t->top(); ++k) out.push_back(step_at(t, k));
  return out;
}

// --- piecewise linear -----------------------------------------------------------

namespace {

PiecewiseLinear normalized(std::vector<Rat> xs, std::vector<Rat> slopes) {
  PiecewiseLinear f;
  f.slopes.push_back(slopes[0]);
  for (size_t i = 0; i < xs.size(); ++i) {
    if (slopes[i + 1] == f.slopes.back()) continue;
    f.xs.push_back(xs[i]);
    f.slopes.push_back(slopes[i + 1]);
  }
  return f;
}

}  // namespace

Rat PiecewiseLinear::operator()(const Rat& x) const {
  if (x < 0) throw std::invalid_argument("PiecewiseLinear: negative argument");
  Rat acc = 0, prev = 0;
  for (size_t i = 0; i < xs.size(); ++i) {
    if (x <= xs[i]) return acc + slopes[i] * (x - prev);
    acc += slopes[i] * (xs[i] - prev);
    prev = xs[i];
  }
  return acc + slopes.back() * (x - prev);
}

PiecewiseLinear PiecewiseLinear::inverse() const {
  std::vector<Rat> ys, ss;
  for (const auto& x : xs) ys.push_back((*this)(x));
  for (const auto& s : slopes) {
    if (s <= 0) throw std::invalid_argument("PiecewiseLinear: not increasing");
    ss.push_back(1 / s);
  }
  return normalized(ys, ss);
}

PiecewiseLinear PiecewiseLinear::compose(const PiecewiseLinear& inner) const {
  std::set<Rat> pts(inner.xs.begin(), inner.xs.end());
  PiecewiseLinear inv = inner.inverse();
  for (const auto& x : xs) pts.insert(inv(x));
  std::vector<Rat> bx(pts.begin(), pts.end());
  std::vector<Rat> ss;
  Rat prev = 0;
  for (const auto& b : bx) {
    ss.push_back(((*this)(inner(b)) - (*this)(inner(prev))) / (b - prev));
    prev = b;
  }
  ss.push_back((*this)(inner(prev + 1)) - (*this)(inner(prev)));
  return normalized(bx, ss);
}

PiecewiseLinear PiecewiseLinear::linear(const Rat& slope) {
  PiecewiseLinear f;
  f.slopes = {slope};
  return f;
}

std::string PiecewiseLinear::str() const {
  std::ostringstream os;
  os << "slope " << rat_str(slopes[0]);
  for (size_t i = 0; i < xs.size(); ++i) os << " | at " << rat_str(xs[i]) << " slope " << rat_str(slopes[i + 1]);
  return os.str();
}

std::vector<Rat> HerbrandData::upper_breaks() const {
  std::vector<Rat> u;
  for (const auto& b : breaks) u.push_back(phi(b.first));
  return u;
}

namespace {

std::vector<std::pair<Rat, Rat>> breaks_from_phi(const PiecewiseLinear& phi) {
  std::vector<std::pair<Rat, Rat>> br;
  if (phi.slopes[0] != 1) br.emplace_back(Rat(0), 1 / phi.slopes[0]);
  for (size_t i = 0; i < phi.xs.size(); ++i) br.emplace_back(phi.xs[i], phi.slopes[i] / phi.slopes[i + 1]);
  return br;
}

}  // namespace

HerbrandData ramification_breaks(const TowerPtr& tp, int fixed, int top) {
  const Tower& t = *tp;
  auto G = galois_group(t, fixed, top);
  std::vector<int64_t> is;  // i(s) for non-identity inertia elements
  int64_t nonid = 0;
  for (const auto& s : G) {
    int64_t best = kInfVal;
    for (int k = fixed + 1; k <= top; ++k) {
      Vec d = t.sub(top, t.embed(k, top, s.images[static_cast<size_t>(k)]), t.embed(k, top, t.gen(k)));
      best = std::min(best, t.val(top, d));
    }
    if (best >= kInfVal) continue;  // identity
    ++nonid;
    if (best >= t.layer(top).prec) throw std::invalid_argument("ramification_breaks: precision too low to separate automorphisms");
    if (best >= 1) is.push_back(best);
  }
  if (nonid + 1 != static_cast<int64_t>(G.size())) throw std::logic_error("ramification_breaks: duplicate identity");
  HerbrandData h;
  h.e = static_cast<int>(is.size()) + 1;
  std::set<int64_t> bs;
  for (auto i : is) bs.insert(i - 1);
  auto count_ge = [&](int64_t b) {
    int64_t c = 1;
    for (auto i : is)
      if (i - 1 >= b) ++c;
    return c;
  };
  std::vector<Rat> xs, ss;
  for (auto b : bs) {
    if (b == 0) continue;
    xs.push_back(Rat(b));
    ss.push_back(Rat(count_ge(b), h.e));
  }
  ss.push_back(Rat(1, h.e));
  h.phi = normalized(xs, ss);
  h.psi = h.phi.inverse();
  h.breaks = breaks_from_phi(h.phi);
  for (auto i : is) h.different_val += i;
  return h;
}

HerbrandData identity_herbrand() {
  HerbrandData h;
  h.phi = PiecewiseLinear::linear(1);
  h.psi = PiecewiseLinear::linear(1);
  return h;
}

HerbrandData compose_herbrand(const HerbrandData& outer, const HerbrandData& inner) {
  HerbrandData h;
  h.phi = outer.phi.compose(inner.phi);
  h.psi = inner.psi.compose(outer.psi);
  h.e = outer.e * inner.e;
  h.different_val = inner.different_val + static_cast<int64_t>(inner.e) * outer.different_val;
  h.breaks = breaks_from_phi(h.phi);
  return h;
}

int64_t different_from_derivative(const TowerPtr& t, int level) {
  const Layer& L = t->layer(level);
  if (L.kind != LayerKind::eisenstein) throw std::invalid_argument("different_from_derivative: not an Eisenstein layer");
  return t->val(level, eval_monic_derivative(*t, level, L.poly, t->gen(level)));
}

bool at_most_l_ramified(const HerbrandData& h, int64_t l) {
  for (const auto& u : h.upper_breaks())
    if (!(u < l)) return false;
  return true;
}

int64_t l_one(const HerbrandData& h, int64_t l) {
  if (l < 1) throw std::invalid_argument("l_one: level must be positive");
  if (!at_most_l_ramified(h, l))
    throw std::invalid_argument("l_one: extension is not at most " + std::to_string(l) + "-ramified");
  Rat v = h.psi(Rat(l));
  if (denominator(v) != 1) throw std::logic_error("l_one: psi(l) is not an integer");
  int64_t l1 = static_cast<int64_t>(numerator(v));
  if (l1 < l || l1 > l * h.e) throw std::logic_error("l_one: bound l <= l(1) <= l e violated");
  if (l1 != h.e * (l + 1) - h.different_val - 1) throw std::logic_error("l_one: disagrees with the different");
  return l1;
}

bool lleq(const Rat& r, int64_t l, const HerbrandData& h) {
  if (!at_most_l_ramified(h, l)) return false;
  return r <= h.psi(Rat(l)) / h.e;
}

// --- close pairs ------------------------------------------------------------------

namespace {

std::vector<std::vector<Digit>> residue_layout(const Tower& t) {
  std::vector<std::vector<Digit>> out;
  for (int k = 1; k <= t.top(); ++k)
    if (t.layer(k).kind == LayerKind::unramified) out.push_back(t.layer(k).residue_poly);
  return out;
}

Vec transport_digits(const Tower& F2, const std::vector<Digit>& ds, const Vec& pi) {
  Vec r = F2.zero(F2.top());
  for (size_t i = ds.size(); i-- > 0;) r = F2.add(F2.mul(r, pi), F2.lift(F2.top(), ds[i]));
  return r;
}

// ring map F(level k) -> F2(top) defined by generator images
struct HomEval {
  const Tower& F;
  const Tower& F2;
  std::vector<Vec> img;
  Vec eval(int k, const Vec& x) const {
    if (k == 0) return F2.from_int(F2.top(), x[0]);
    const Layer& L = F.layer(k);
    Vec r = F2.zero(F2.top());
    for (int i = L.degree; i-- > 0;) r = F2.add(F2.mul(r, img[static_cast<size_t>(k)]), eval(k - 1, block(F, k, x, i)));
    return r;
  }
};

}  // namespace

ClosePairCertificate certify_close(const TowerPtr& F, const TowerPtr& F2, int l, const std::optional<Vec>& pi_image) {
  if (F->p() != F2->p() || residue_layout(*F) != residue_layout(*F2))
    throw std::invalid_argument("certify_close: residue field mismatch");
  if (l < 1 || l > F->precision() || l > F2->precision())
    throw std::invalid_argument("certify_close: level " + std::to_string(l) + " exceeds working precision");
  ClosePairCertificate c;
  c.F = F;
  c.F2 = F2;
  c.level = l;
  c.pi_image = pi_image ? *pi_image : F2->uniformizer();
  {
    auto ds = F2->truncate(c.pi_image, l);
    bool ok = F2->digit_index(ds[0]) == 0 && (l < 2 || F2->digit_index(ds[1]) != 0);
    if (!ok) throw std::invalid_argument("certify_close: uniformizer image does not have valuation one");
  }
  const int top = F->top();
  HomEval h{*F, *F2, std::vector<Vec>(static_cast<size_t>(top) + 1)};
  for (int k = 1; k <= top; ++k)
    h.img[static_cast<size_t>(k)] = transport_digits(*F2, F->truncate(F->embed(k, top, F->gen(k)), l), c.pi_image);
  auto vanishes = [&](const Vec& x) { return F2->valuation(x) >= l; };
  // prime relation
  if (F->kind() == Kind::mixed && F2->kind() == Kind::mixed) {
    if (static_cast<int64_t>(F->base_field().M) * F2->e() < l)
      throw std::invalid_argument("certify_close: p^M does not vanish at level " + std::to_string(l));
  }
  if (F->kind() == Kind::equal && F2->kind() == Kind::mixed && F2->e() < l)
    throw std::invalid_argument("certify_close: p is not zero mod p^" + std::to_string(l) + " on the second side (e = " +
                                std::to_string(F2->e()) + ")");
  for (int k = 1; k <= top; ++k) {
    const Layer& L = F->layer(k);
    const Vec& x = h.img[static_cast<size_t>(k)];
    Vec rel;
    if (L.kind == LayerKind::tadic) {
      rel = F2->pow(x, static_cast<uint64_t>(L.degree));
    } else {
      rel = F2->one();
      for (size_t i = L.poly.size(); i-- > 0;) rel = F2->add(F2->mul(rel, x), h.eval(k - 1, L.poly[i]));
    }
    if (!vanishes(rel))
      throw std::invalid_argument("certify_close: defining relation of layer " + std::to_string(k) +
                                  " does not hold mod p^" + std::to_string(l));
  }
  Vec pi_hom = h.eval(top, F->uniformizer());
  if (!vanishes(F2->sub(pi_hom, c.pi_image))) {
    std::string why = F->kind() == Kind::mixed && F->e() < l
                          ? " (p is not zero mod p_F^" + std::to_string(l) + " since e = " + std::to_string(F->e()) + ")"
                          : "";
    throw std::invalid_argument("certify_close: digit rings differ at level " + std::to_string(l) + why);
  }
  return c;
}

Vec transport(const ClosePairCertificate& c, const Vec& x, int s) {
  if (s > c.level) throw std::invalid_argument("transport: level above the certificate");
  return transport_digits(*c.F2, c.F->truncate(x, s), c.pi_image);
}

uint64_t transport_class(const ClosePairCertificate& c, const Vec& x, int s) {
  return c.F2->class_index(transport(c, x, s), s);
}

ClosePairCertificate invert(const ClosePairCertificate& c) {
  const uint64_t n = c.F->class_count(c.level);
  const uint64_t target = c.F2->class_index(c.F2->uniformizer(), c.level);
  const uint64_t q = c.F->q();
  for (uint64_t i = 0; i < n; ++i) {
    if (i % q != 0) continue;  // valuation >= 1
    Vec y = c.F->from_class(i, c.level);
    if (transport_class(c, y, c.level) == target) return certify_close(c.F2, c.F, c.level, y);
  }
  throw std::logic_error("invert: no preimage of the uniformizer");
}

namespace {

HerbrandData step_herbrand(const TowerPtr& E) {
  const int k = E->top();
  const Layer& L = E->layer(k);
  try {
    return ramification_breaks(E, k - 1, k);
  } catch (const std::invalid_argument&) {
    if (L.kind == LayerKind::eisenstein && L.degree % E->p() != 0) {
      // tame: a single break at 0
      HerbrandData h;
      h.e = L.degree;
      h.phi = PiecewiseLinear::linear(Rat(1, L.degree));
      h.psi = h.phi.inverse();
      h.breaks = {{Rat(0), Rat(L.degree)}};
      h.different_val = L.degree - 1;
      if (different_from_derivative(E, k) != h.different_val) throw std::logic_error("step_herbrand: tame different mismatch");
      return h;
    }
    throw;
  }
}

bool same_herbrand(const HerbrandData& a, const HerbrandData& b) {
  return a.e == b.e && a.different_val == b.different_val && a.phi.xs == b.phi.xs && a.phi.slopes == b.phi.slopes;
}

}  // namespace

TransferredExtension transfer_extension(const ClosePairCertificate& c, const StepSpec& step) {
  TransferredExtension r;
  const int l = c.level;
  const int ftop = c.F->top();
  if (step.kind == StepKind::unramified) {
    std::vector<Digit> g = step.residue_poly ? *step.residue_poly : first_irreducible(*c.F, ftop, step.degree);
    r.E = extend_unramified(c.F, step.degree, g);
    r.E2 = extend_unramified(c.F2, step.degree, g);
  } else {
    if (static_cast<int>(step.poly.size()) != step.degree) throw std::invalid_argument("transfer_extension: degree mismatch");
    if (l < 2 || c.F->valuation(step.poly[0]) != 1)
      throw std::invalid_argument("transfer_extension: constant term is not determined at level " + std::to_string(l));
    std::vector<Vec> p2;
    for (const auto& a : step.poly) p2.push_back(transport(c, a, l));
    r.E = extend_eisenstein(c.F, step.poly);
    r.E2 = extend_eisenstein(c.F2, p2);
  }
  r.herbrand = step_herbrand(r.E);
  r.herbrand2 = step_herbrand(r.E2);
  if (!same_herbrand(r.herbrand, r.herbrand2))
    throw std::invalid_argument("transfer_extension: ramification data differ on the two sides");
  r.l1 = l_one(r.herbrand, l);
  if (r.l1 != l_one(r.herbrand2, l)) throw std::logic_error("transfer_extension: l(1) differs");
  const int etop = r.E->top();
  Vec pi2 = step.kind == StepKind::unramified ? r.E2->embed(c.F2->top(), r.E2->top(), c.pi_image) : r.E2->uniformizer();
  r.cert = certify_close(r.E, r.E2, static_cast<int>(r.l1), pi2);
  // the derived certificate must extend the given one
  const int l1 = static_cast<int>(r.l1);
  for (int k = 1; k <= ftop; ++k) {
    Vec g = c.F->embed(k, ftop, c.F->gen(k));
    Vec lhs = transport(r.cert, r.E->embed(ftop, etop, g), l1);
    Vec rhs = r.E2->embed(c.F2->top(), r.E2->top(), transport(c, g, l));
    if (r.E2->class_index(lhs, l1) != r.E2->class_index(rhs, l1))
      throw std::invalid_argument("transfer_extension: derived certificate does not extend the given one");
  }
  return r;
}

}  // namespace ctt
