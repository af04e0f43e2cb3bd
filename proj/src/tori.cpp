#include "ctt/tori.hpp"

#include <algorithm>
#include <functional>
#include <set>
#include <sstream>
#include <stdexcept>

namespace ctt {

namespace {

void place(Mat& M, size_t r0, size_t c0, const Mat& B, const Int& s = 1) {
  for (size_t i = 0; i < B.rows; ++i)
    for (size_t j = 0; j < B.cols; ++j) M(r0 + i, c0 + j) += s * B(i, j);
}

Mat power_diag(const Mat& B, size_t n) {
  Mat M(B.rows * n, B.cols * n);
  for (size_t b = 0; b < n; ++b) place(M, b * B.rows, b * B.cols, B);
  return M;
}

Mat mat_pow(const Mat& A, int k) {
  Mat r = Mat::identity(A.rows);
  for (int i = 0; i < k; ++i) r = r * A;
  return r;
}

bool extends(const Tower& upper, const Tower& lower) {
  if (upper.top() < lower.top() || upper.p() != lower.p() || upper.kind() != lower.kind()) return false;
  for (int k = 1; k <= lower.top(); ++k)
    if (upper.layer(k).kind != lower.layer(k).kind || upper.layer(k).poly != lower.layer(k).poly) return false;
  return true;
}

int element_order(const GaloisLattice& x, int i) {
  int k = 1, cur = i;
  while (cur != x.identity) {
    cur = x.table[static_cast<size_t>(i)][static_cast<size_t>(cur)];
    ++k;
  }
  return k;
}

// coset representatives of gamma / H (H given by membership flags), in gamma order
std::vector<int> coset_reps(const GaloisLattice& g, const std::vector<bool>& inH) {
  std::vector<int> reps;
  for (int s = 0; s < static_cast<int>(g.order()); ++s) {
    bool covered = false;
    for (int r : reps)
      if (inH[static_cast<size_t>(g.table[static_cast<size_t>(g.inverse(r))][static_cast<size_t>(s)])]) covered = true;
    if (!covered) reps.push_back(s);
  }
  return reps;
}

}  // namespace

int GaloisLattice::inverse(int i) const {
  for (size_t j = 0; j < table.size(); ++j)
    if (table[static_cast<size_t>(i)][j] == identity) return static_cast<int>(j);
  throw std::logic_error("GaloisLattice: element without inverse");
}

Mat GaloisLattice::cocharacter(int i) const { return action[static_cast<size_t>(inverse(i))].transpose(); }

void check_lattice(const GaloisLattice& x) {
  const size_t n = x.order();
  if (x.table.size() != n || x.inertia.size() != n) throw std::invalid_argument("lattice: table size mismatch");
  for (const auto& A : x.action) {
    if (A.rows != x.rank || A.cols != x.rank) throw std::invalid_argument("lattice: matrix has wrong size");
    Int d = A.det();
    if (d != 1 && d != -1) throw std::invalid_argument("lattice: matrix is not invertible over Z");
  }
  if (!(x.action[static_cast<size_t>(x.identity)] == Mat::identity(x.rank)))
    throw std::invalid_argument("lattice: identity acts nontrivially");
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < n; ++j)
      if (!(x.action[i] * x.action[j] == x.action[static_cast<size_t>(x.table[i][j])]))
        throw std::invalid_argument("lattice: matrices do not satisfy the group relations");
}

bool is_equivariant(const GaloisLattice& src, const GaloisLattice& dst, const Mat& f) {
  if (src.order() != dst.order() || f.rows != dst.rank || f.cols != src.rank) return false;
  for (size_t i = 0; i < src.order(); ++i)
    if (!(f * src.action[i] == dst.action[i] * f)) return false;
  return true;
}

std::string tag_name(CatalogTag t) {
  switch (t) {
    case CatalogTag::split: return "split";
    case CatalogTag::weil_restriction: return "weil_restriction";
    case CatalogTag::norm_one: return "norm_one";
    case CatalogTag::general: return "general";
  }
  return "?";
}

GaloisLattice galois_skeleton(const TowerPtr& F, const TowerPtr& L, std::vector<Automorphism>& gamma) {
  if (!extends(*L, *F)) throw std::invalid_argument("splitting field does not extend the base field");
  GaloisLattice g;
  if (L->top() == F->top()) {
    gamma = {identity_aut(*L, L->top())};
  } else {
    gamma = galois_group(*L, F->top(), L->top());
  }
  const size_t n = gamma.size();
  g.table = n == 1 ? std::vector<std::vector<int>>{{0}} : composition_table(*L, gamma);
  const Automorphism id = identity_aut(*L, L->top());
  g.identity = -1;
  g.frobenius = -1;
  const uint64_t qF = F->q();
  for (size_t i = 0; i < n; ++i) {
    if (same_aut(gamma[i], id)) g.identity = static_cast<int>(i);
    g.inertia.push_back(is_inertia(*L, gamma[i]));
    bool frob = true;
    for (int k = F->top() + 1; k <= L->top(); ++k) {
      if (L->layer(k).kind != LayerKind::unramified) continue;
      if (L->residue(k, gamma[i].images[static_cast<size_t>(k)]) != L->residue(k, L->pow(k, L->gen(k), qF))) frob = false;
    }
    if (frob && g.frobenius < 0) g.frobenius = static_cast<int>(i);
  }
  if (g.identity < 0 || g.frobenius < 0) throw std::logic_error("galois_skeleton: identity or Frobenius missing");
  return g;
}

TorusSpec split_torus(const TowerPtr& F, const TowerPtr& L, size_t rank) {
  TorusSpec T;
  T.label = "split";
  T.F = F;
  T.L = L;
  T.lattice = galois_skeleton(F, L, T.gamma);
  T.lattice.rank = rank;
  T.lattice.action.assign(T.gamma.size(), Mat::identity(rank));
  T.tag = CatalogTag::split;
  check_lattice(T.lattice);
  return T;
}

TorusSpec weil_restriction(const TowerPtr& F, const TowerPtr& E) {
  TorusSpec T;
  T.label = "weil_restriction";
  T.F = F;
  T.L = E;
  T.lattice = galois_skeleton(F, E, T.gamma);
  const size_t n = T.gamma.size();
  T.lattice.rank = n;
  for (size_t i = 0; i < n; ++i) {
    Mat A(n, n);
    for (size_t j = 0; j < n; ++j) A(static_cast<size_t>(T.lattice.table[i][j]), j) = 1;
    T.lattice.action.push_back(A);
  }
  T.tag = CatalogTag::weil_restriction;
  check_lattice(T.lattice);
  return T;
}

TorusSpec norm_one(const TowerPtr& F, const TowerPtr& E) {
  TorusSpec T;
  T.label = "norm_one";
  T.F = F;
  T.L = E;
  T.lattice = galois_skeleton(F, E, T.gamma);
  const int d = static_cast<int>(T.gamma.size());
  if (d < 2) throw std::invalid_argument("norm_one: trivial extension");
  int g = -1;
  for (int i = 0; i < d && g < 0; ++i)
    if (element_order(T.lattice, i) == d) g = i;
  if (g < 0) throw std::invalid_argument("norm_one: Galois group is not cyclic");
  std::vector<int> pw{T.lattice.identity};
  for (int k = 1; k < d; ++k) pw.push_back(T.lattice.table[static_cast<size_t>(g)][static_cast<size_t>(pw.back())]);
  const size_t n = static_cast<size_t>(d - 1);
  T.lattice.rank = n;
  T.lattice.action.assign(static_cast<size_t>(d), Mat());
  for (int a = 0; a < d; ++a) {
    Mat A(n, n);
    for (size_t k = 0; k < n; ++k) {
      size_t img = (k + static_cast<size_t>(a)) % static_cast<size_t>(d);
      if (img < n) {
        A(img, k) = 1;
      } else {
        for (size_t i = 0; i < n; ++i) A(i, k) = -1;
      }
    }
    T.lattice.action[static_cast<size_t>(pw[static_cast<size_t>(a)])] = A;
  }
  T.tag = CatalogTag::norm_one;
  T.cyclic_generator = g;
  check_lattice(T.lattice);
  return T;
}

TorusSpec general_torus(const TowerPtr& F, const TowerPtr& L, const std::vector<std::pair<int, Mat>>& generators) {
  TorusSpec T;
  T.label = "general";
  T.F = F;
  T.L = L;
  T.lattice = galois_skeleton(F, L, T.gamma);
  if (generators.empty()) throw std::invalid_argument("general_torus: no generator matrices");
  const size_t rank = generators[0].second.rows;
  T.lattice.rank = rank;
  const size_t n = T.gamma.size();
  std::vector<std::optional<Mat>> acts(n);
  acts[static_cast<size_t>(T.lattice.identity)] = Mat::identity(rank);
  for (const auto& [i, M] : generators) {
    if (i < 0 || static_cast<size_t>(i) >= n) throw std::invalid_argument("general_torus: generator index out of range");
    if (M.rows != rank || M.cols != rank) throw std::invalid_argument("general_torus: matrices of different sizes");
  }
  bool changed = true;
  while (changed) {
    changed = false;
    for (size_t i = 0; i < n; ++i) {
      if (!acts[i]) continue;
      for (const auto& [j, M] : generators) {
        size_t k = static_cast<size_t>(T.lattice.table[static_cast<size_t>(j)][i]);
        Mat P = M * *acts[i];
        if (!acts[k]) {
          acts[k] = P;
          changed = true;
        } else if (!(*acts[k] == P)) {
          throw std::invalid_argument("general_torus: matrices do not satisfy the group relations");
        }
      }
    }
  }
  for (auto& a : acts) {
    if (!a) throw std::invalid_argument("general_torus: matrices do not generate the action");
    T.lattice.action.push_back(*a);
  }
  T.tag = CatalogTag::general;
  check_lattice(T.lattice);
  return T;
}

namespace {

struct Induction {
  std::vector<int> reps;
  std::vector<bool> inH;
  std::vector<int> to_sub;  // index in the subgroup's own ordering
};

Induction induction_data(const GaloisLattice& full, const std::vector<Automorphism>& gamma, const TowerPtr& E,
                         const std::vector<Automorphism>& sub_gamma) {
  Induction d;
  d.to_sub.assign(gamma.size(), -1);
  for (size_t i = 0; i < gamma.size(); ++i) {
    bool fixes = true;
    for (int k = 1; k <= E->top(); ++k)
      if (gamma[i].images[static_cast<size_t>(k)] != E->embed(k, k, E->gen(k))) fixes = false;
    d.inH.push_back(fixes);
    if (!fixes) continue;
    for (size_t j = 0; j < sub_gamma.size(); ++j)
      if (same_aut(gamma[i], sub_gamma[j])) d.to_sub[i] = static_cast<int>(j);
    if (d.to_sub[i] < 0) throw std::logic_error("induction: subgroup element not found");
  }
  d.reps = coset_reps(full, d.inH);
  return d;
}

}  // namespace

TorusSpec weil_restrict(const TorusSpec& overE, const TowerPtr& F) {
  const TowerPtr& E = overE.F;
  if (!extends(*E, *F)) throw std::invalid_argument("weil_restrict: E does not extend F");
  TorusSpec R;
  R.F = F;
  R.L = overE.L;
  R.lattice = galois_skeleton(F, overE.L, R.gamma);
  auto ind = induction_data(R.lattice, R.gamma, E, overE.gamma);
  const size_t n = overE.lattice.rank, k = ind.reps.size();
  R.lattice.rank = n * k;
  for (size_t s = 0; s < R.gamma.size(); ++s) {
    Mat A(n * k, n * k);
    for (size_t i = 0; i < k; ++i) {
      int sr = R.lattice.table[s][static_cast<size_t>(ind.reps[i])];
      bool found = false;
      for (size_t j = 0; j < k && !found; ++j) {
        int h = R.lattice.table[static_cast<size_t>(R.lattice.inverse(ind.reps[j]))][static_cast<size_t>(sr)];
        if (!ind.inH[static_cast<size_t>(h)]) continue;
        place(A, j * n, i * n, overE.lattice.action[static_cast<size_t>(ind.to_sub[static_cast<size_t>(h)])]);
        found = true;
      }
      if (!found) throw std::logic_error("weil_restrict: coset not found");
    }
    R.lattice.action.push_back(A);
  }
  const bool regular = overE.tag == CatalogTag::split && n == 1 && overE.L->top() == E->top();
  R.tag = regular ? CatalogTag::weil_restriction : CatalogTag::general;
  R.label = "Res(" + overE.label + ")";
  check_lattice(R.lattice);
  return R;
}

DiagonalNorm diagonal_and_norm(const TorusSpec& T, const TowerPtr& E) {
  if (!extends(*T.L, *E) || !extends(*E, *T.F)) throw std::invalid_argument("diagonal_and_norm: E must lie between F and L");
  // T over E: restrict the action to Gal(L/E)
  TorusSpec TE;
  TE.label = T.label;
  TE.F = E;
  TE.L = T.L;
  TE.lattice = galois_skeleton(E, T.L, TE.gamma);
  TE.lattice.rank = T.lattice.rank;
  for (const auto& s : TE.gamma) {
    bool found = false;
    for (size_t i = 0; i < T.gamma.size() && !found; ++i)
      if (same_aut(s, T.gamma[i])) {
        TE.lattice.action.push_back(T.lattice.action[i]);
        found = true;
      }
    if (!found) throw std::logic_error("diagonal_and_norm: subgroup element missing");
  }
  TE.tag = T.tag == CatalogTag::split ? CatalogTag::split : CatalogTag::general;
  DiagonalNorm out;
  out.res = weil_restrict(TE, T.F);
  auto ind = induction_data(T.lattice, T.gamma, E, TE.gamma);
  const size_t n = T.lattice.rank, k = ind.reps.size();
  out.diagonal_dual = Mat(n, n * k);
  out.norm_dual = Mat(n * k, n);
  for (size_t i = 0; i < k; ++i) {
    place(out.diagonal_dual, 0, i * n, T.lattice.action[static_cast<size_t>(ind.reps[i])]);
    place(out.norm_dual, i * n, 0, T.lattice.action[static_cast<size_t>(T.lattice.inverse(ind.reps[i]))]);
  }
  if (!is_equivariant(out.res.lattice, T.lattice, out.diagonal_dual) || !is_equivariant(T.lattice, out.res.lattice, out.norm_dual))
    throw std::logic_error("diagonal_and_norm: maps are not equivariant");
  return out;
}

bool weakly_induced(const TorusSpec& T) {
  const auto& x = T.lattice;
  const int p = T.F->p();
  std::vector<int> W;
  for (int i = 0; i < static_cast<int>(x.order()); ++i) {
    if (!x.inertia[static_cast<size_t>(i)]) continue;
    int o = element_order(x, i);
    while (o % p == 0) o /= p;
    if (o == 1) W.push_back(i);
  }
  if (W.size() == 1) return true;
  const size_t n = x.rank;
  if (n > 8) throw std::invalid_argument("weakly_induced: lattice rank too large for the basis search");
  // orbits of small vectors under the wild inertia
  std::set<std::vector<IVec>> orbits;
  IVec v(n, 0);
  std::function<void(size_t)> gen = [&](size_t i) {
    if (i == n) {
      bool nz = false;
      for (auto& c : v) nz = nz || c != 0;
      if (!nz) return;
      std::set<IVec> orb;
      for (int w : W) orb.insert(x.action[static_cast<size_t>(w)] * v);
      if (orb.size() <= n) orbits.insert(std::vector<IVec>(orb.begin(), orb.end()));
      return;
    }
    for (int c = -1; c <= 1; ++c) {
      v[i] = c;
      gen(i + 1);
    }
  };
  gen(0);
  std::vector<std::vector<IVec>> list(orbits.begin(), orbits.end());
  std::vector<IVec> chosen;
  std::function<bool(size_t)> search = [&](size_t from) {
    if (chosen.size() == n) {
      Mat B = Mat::from_columns(n, chosen);
      Int d = B.det();
      return d == 1 || d == -1;
    }
    for (size_t i = from; i < list.size(); ++i) {
      if (chosen.size() + list[i].size() > n) continue;
      for (const auto& w : list[i]) chosen.push_back(w);
      if (search(i + 1)) return true;
      chosen.resize(chosen.size() - list[i].size());
    }
    return false;
  };
  return search(0);
}

int default_stage_degree(const TorusSpec& T) {
  const Mat& A = T.lattice.action[static_cast<size_t>(T.lattice.frobenius)];
  for (int k = 1; k <= 12; ++k)
    if (mat_pow(A, k) == Mat::identity(T.lattice.rank)) return k;
  return 12;
}

// --- points -------------------------------------------------------------------

IVec TorusPoints::kottwitz(const IVec& t) const {
  if (!kottwitz_defined)
    throw std::invalid_argument("kottwitz: map does not descend to T(F)/T(F)_r at level " + std::to_string(level));
  return kottwitz_map.apply(points.coordinates(t));
}

std::vector<int64_t> TorusPoints::valuations(const IVec& t) const {
  std::vector<int64_t> v;
  const size_t a = G.group.ambient();
  for (size_t b = 0; b < spec.lattice.rank; ++b) v.push_back(static_cast<int64_t>(t.at(b * a)));
  return v;
}

std::vector<IVec> TorusPoints::enumerate(int window, size_t max_count) const {
  std::vector<IVec> out;
  for (const auto& y : inclusion.source.enumerate(window, max_count)) out.push_back(inclusion.apply(y));
  return out;
}

std::string TorusPoints::str(const IVec& t) const {
  const size_t a = G.group.ambient();
  std::ostringstream os;
  os << "[";
  for (size_t b = 0; b < spec.lattice.rank; ++b) {
    IVec part(t.begin() + static_cast<long>(b * a), t.begin() + static_cast<long>((b + 1) * a));
    os << (b ? "; " : "") << G.str(part);
  }
  os << "]";
  return os.str();
}

namespace {

int ceil_level(const Rat& x) {
  Int q = numerator(x) / denominator(x);
  if (Rat(q) < x) q += 1;
  return static_cast<int>(q);
}

Subgroup pull_to_tuples(const TorusPoints& P, const Subgroup& inAbstract) {
  Subgroup s{P.tuples, {}};
  for (const auto& g : inAbstract.gens) s.gens.push_back(P.inclusion.apply(g));
  return s;
}

}  // namespace

TorusPoints torus_points(const TorusSpec& T, const Rat& r, size_t max_order) {
  if (r <= 0) throw std::invalid_argument("torus_points: r must be positive");
  TorusPoints P;
  P.spec = T;
  P.r = r;
  const int e = T.L->e() / T.F->e();
  P.level = ceil_level(r * e);
  P.G = unit_quotient(T.L, P.level, max_order);
  const size_t n = T.lattice.rank, a = P.G.group.ambient();
  P.tuples = FgAbelianGroup::power(P.G.group, n);
  std::vector<Mat> S;
  for (const auto& s : T.gamma) S.push_back(galois_on_units(P.G, s).matrix);
  for (size_t i = 0; i < T.gamma.size(); ++i) {
    const Mat& Ainv = T.lattice.action[static_cast<size_t>(T.lattice.inverse(static_cast<int>(i)))];
    Mat M(n * a, n * a);
    for (size_t j = 0; j < n; ++j)
      for (size_t k = 0; k < n; ++k)
        if (Ainv(k, j) != 0) place(M, j * a, k * a, S[i], Ainv(k, j));
    P.action.emplace_back(P.tuples, P.tuples, M);
  }
  GaloisLattice& X = P.spec.lattice;
  // parametrization (catalog) or fixed points
  Mat kappa_cols;
  std::vector<IVec> gens;
  auto reps_mod_inertia = [&]() {
    IVec s(X.order(), 0);
    if (T.tag == CatalogTag::weil_restriction || T.tag == CatalogTag::norm_one) {
      for (int rep : coset_reps(X, X.inertia)) s[static_cast<size_t>(rep)] = 1;
    }
    return s;
  };
  switch (T.tag) {
    case CatalogTag::split: {
      auto UF = unit_quotient(T.F, ceil_level(r), max_order);
      Mat inc = unit_inclusion(UF, P.G).matrix;
      const size_t af = UF.group.ambient();
      P.param = GroupHom(FgAbelianGroup::power(UF.group, n), P.tuples, power_diag(inc, n));
      kappa_cols = Mat(n, n * af);
      for (size_t b = 0; b < n; ++b) kappa_cols(b, b * af) = 1;
      break;
    }
    case CatalogTag::weil_restriction:
    case CatalogTag::norm_one: {
      Mat M(n * a, a);
      if (T.tag == CatalogTag::weil_restriction) {
        for (size_t j = 0; j < n; ++j) place(M, j * a, 0, S[j]);
      } else {
        const size_t g = static_cast<size_t>(T.cyclic_generator);
        int cur = X.identity;
        for (size_t j = 0; j < n; ++j) {
          int nxt = X.table[g][static_cast<size_t>(cur)];
          place(M, j * a, 0, S[static_cast<size_t>(cur)]);
          place(M, j * a, 0, S[static_cast<size_t>(nxt)], -1);
          cur = nxt;
        }
      }
      P.param = GroupHom(P.G.group, P.tuples, M);
      IVec s = reps_mod_inertia();
      IVec col0;
      if (T.tag == CatalogTag::weil_restriction) {
        col0 = s;
      } else {
        // pushforward along y -> y / g(y) on cocharacters
        const size_t g = static_cast<size_t>(T.cyclic_generator);
        int cur = X.identity;
        for (size_t j = 0; j < n; ++j) {
          int nxt = X.table[g][static_cast<size_t>(cur)];
          col0.push_back(s[static_cast<size_t>(cur)] - s[static_cast<size_t>(nxt)]);
          cur = nxt;
        }
      }
      kappa_cols = Mat(n, a);
      for (size_t b = 0; b < n; ++b) kappa_cols(b, 0) = col0[b];
      break;
    }
    case CatalogTag::general: {
      P.exact = false;
      GroupAction act{P.action, X.table};
      auto fixed = fixed_points(act, P.tuples);
      P.param = fixed.inclusion();
      kappa_cols = Mat(n, fixed.gens.size());
      for (size_t i = 0; i < fixed.gens.size(); ++i)
        for (size_t b = 0; b < n; ++b) kappa_cols(b, i) = fixed.gens[i][b * a];
      break;
    }
  }
  for (size_t i = 0; i < P.param.source.ambient(); ++i) {
    IVec ei(P.param.source.ambient(), 0);
    ei[i] = 1;
    gens.push_back(P.param.apply(ei));
  }
  P.points = Subgroup{P.tuples, gens};
  for (const auto& g : gens)
    for (const auto& s : P.action)
      if (!P.tuples.equal(s.apply(g), g)) throw std::logic_error("torus_points: parametrized point is not Galois fixed");
  P.inclusion = P.points.inclusion();
  // Kottwitz target
  std::vector<int> inert;
  for (size_t i = 0; i < X.order(); ++i)
    if (X.inertia[i]) inert.push_back(static_cast<int>(i));
  auto Zn = FgAbelianGroup::free(n);
  GroupAction actI;
  for (int i : inert) actI.maps.emplace_back(Zn, Zn, X.cocharacter(i));
  actI.table.assign(inert.size(), std::vector<int>(inert.size()));
  for (size_t i = 0; i < inert.size(); ++i)
    for (size_t j = 0; j < inert.size(); ++j) {
      int k = X.table[static_cast<size_t>(inert[i])][static_cast<size_t>(inert[j])];
      actI.table[i][j] = static_cast<int>(std::find(inert.begin(), inert.end(), k) - inert.begin());
    }
  P.coinvariants = coinvariants(actI, Zn);
  GroupAction actC;
  for (size_t i = 0; i < X.order(); ++i)
    actC.maps.push_back(induced_on(GroupHom(Zn, Zn, X.cocharacter(static_cast<int>(i))), P.coinvariants));
  actC.table = X.table;
  P.kottwitz_target = fixed_points(actC, P.coinvariants);
  P.kappa_param = GroupHom(P.param.source, P.coinvariants, kappa_cols);
  for (size_t i = 0; i < gens.size(); ++i) {
    IVec ei(gens.size(), 0);
    ei[i] = 1;
    if (!P.kottwitz_target.contains(P.kappa_param.apply(ei)))
      throw std::logic_error("torus_points: Kottwitz value is not Frobenius fixed");
  }
  // points.abstract() is Z^gens modulo relations among param(e_i), so the
  // map descends iff kappa_param kills ker(param)
  for (const auto& k : kernel(P.param).gens)
    if (!P.coinvariants.is_zero(P.kappa_param.apply(k))) P.kottwitz_defined = false;
  if (P.kottwitz_defined) P.kottwitz_map = GroupHom(P.inclusion.source, P.coinvariants, kappa_cols);
  return P;
}

Subgroup bounded_part(const TorusPoints& P) {
  const size_t n = P.spec.lattice.rank, a = P.G.group.ambient();
  Mat V(n, n * a);
  for (size_t b = 0; b < n; ++b) V(b, b * a) = 1;
  GroupHom val(P.tuples, FgAbelianGroup::free(n), V);
  return pull_to_tuples(P, kernel(val.compose_after(P.inclusion)));
}

Subgroup naive_filtration(const TorusPoints& P, const Rat& s) {
  if (s < 0) throw std::invalid_argument("naive_filtration: negative level");
  if (s == 0) return bounded_part(P);
  const int e = P.spec.L->e() / P.spec.F->e();
  const int lev = ceil_level(s * e);
  if (lev > P.level) throw std::invalid_argument("naive_filtration: level above the quotient");
  if (lev == P.level) return Subgroup{P.tuples, {}};
  auto Gs = unit_quotient(P.spec.L, lev);
  const size_t n = P.spec.lattice.rank;
  GroupHom red(P.tuples, FgAbelianGroup::power(Gs.group, n), power_diag(unit_level_reduction(P.G, Gs).matrix, n));
  return pull_to_tuples(P, kernel(red.compose_after(P.inclusion)));
}

Subgroup iwahori_subgroup(const TorusPoints& P) {
  Subgroup s{P.tuples, {}};
  for (const auto& g : kernel(P.kappa_param).gens) s.gens.push_back(P.param.apply(g));
  return s;
}

Subgroup standard_filtration(const TorusPoints& P, const Rat& s) { return intersect(naive_filtration(P, s), iwahori_subgroup(P)); }

Subgroup congruent_filtration(const TorusPoints& P, const Rat& s) {
  if (!weakly_induced(P.spec))
    throw std::invalid_argument("congruent_filtration: torus is not weakly induced; out of scope (needs the Neron model)");
  if (s <= 0) throw std::invalid_argument("congruent_filtration: level must be positive");
  return standard_filtration(P, s);
}

GroupHom tuple_map(const TorusPoints& P1, const TorusPoints& P2, const Mat& f) {
  if (P1.G.tower != P2.G.tower || P1.level != P2.level) throw std::invalid_argument("tuple_map: different unit quotients");
  const size_t n1 = P1.spec.lattice.rank, n2 = P2.spec.lattice.rank, a = P1.G.group.ambient();
  if (f.rows != n1 || f.cols != n2) throw std::invalid_argument("tuple_map: lattice map has wrong shape");
  Mat M(n2 * a, n1 * a);
  Mat I = Mat::identity(a);
  for (size_t j = 0; j < n2; ++j)
    for (size_t i = 0; i < n1; ++i)
      if (f(i, j) != 0) place(M, j * a, i * a, I, f(i, j));
  return GroupHom(P1.tuples, P2.tuples, M);
}

GroupHom tuple_reduction(const TorusPoints& high, const TorusPoints& low) {
  if (high.spec.lattice.rank != low.spec.lattice.rank) throw std::invalid_argument("tuple_reduction: rank mismatch");
  return GroupHom(high.tuples, low.tuples,
                  power_diag(unit_level_reduction(high.G, low.G).matrix, high.spec.lattice.rank));
}

}  // namespace ctt
