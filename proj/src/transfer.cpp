#include "ctt/transfer.hpp"

#include <algorithm>
#include <map>
#include <sstream>
#include <stdexcept>

namespace ctt {

namespace {

StepSpec step_of(const TorusSpec& T) {
  const Tower& L = *T.L;
  if (L.top() != T.F->top() + 1)
    throw std::invalid_argument("close_pair: splitting field must be one step above the base (got " +
                                std::to_string(L.top() - T.F->top()) + " steps)");
  const Layer& y = L.layer(L.top());
  StepSpec s;
  s.degree = y.degree;
  if (y.kind == LayerKind::unramified) {
    s.kind = StepKind::unramified;
    s.residue_poly = y.residue_poly;
  } else {
    s.kind = StepKind::eisenstein;
    s.poly = y.poly;
  }
  return s;
}

Mat block_diag(const Mat& B, size_t n) {
  Mat M(B.rows * n, B.cols * n);
  for (size_t k = 0; k < n; ++k)
    for (size_t i = 0; i < B.rows; ++i)
      for (size_t j = 0; j < B.cols; ++j) M(k * B.rows + i, k * B.cols + j) = B(i, j);
  return M;
}

// sigma -> sigma' with D o S = S' o D on units at the least level separating Gamma
std::vector<int> match_galois(const ClosePairCertificate& c, const std::vector<Automorphism>& g,
                              const std::vector<Automorphism>& g2, int& used_level) {
  if (g.size() != g2.size()) throw std::invalid_argument("close_pair: Galois groups have different orders");
  const int top = static_cast<int>(std::min<int64_t>({c.level, c.F->precision(), c.F2->precision()}));
  for (int lev = 1; lev <= top; ++lev) {
    UnitQuotient U, U2;
    try {
      U = unit_quotient(c.F, lev);
      U2 = unit_quotient(c.F2, lev);
    } catch (const std::invalid_argument&) {
      break;
    }
    GroupHom D = deligne_unit_iso(c, U, U2);
    std::vector<GroupHom> S2;
    for (const auto& s : g2) S2.push_back(galois_on_units(U2, s));
    std::vector<int> m;
    std::vector<bool> taken(g2.size(), false);
    bool unique = true;
    for (const auto& s : g) {
      GroupHom lhs = D.compose_after(galois_on_units(U, s));
      int hit = -1, hits = 0;
      for (size_t j = 0; j < g2.size(); ++j)
        if (lhs.equals(S2[j].compose_after(D))) {
          hit = static_cast<int>(j);
          ++hits;
        }
      if (hits == 0) throw std::invalid_argument("close_pair: an automorphism has no partner on the other side");
      if (hits > 1 || taken[static_cast<size_t>(hit)]) {
        unique = false;
        break;
      }
      taken[static_cast<size_t>(hit)] = true;
      m.push_back(hit);
    }
    if (unique) {
      used_level = lev;
      return m;
    }
  }
  throw std::invalid_argument("close_pair: automorphisms cannot be told apart within the certified level");
}

int ceil_int(const Rat& x) {
  Int q = numerator(x) / denominator(x);
  if (Rat(q) < x) q += 1;
  return static_cast<int>(q);
}

std::string tuple_str(const TorusPoints& P, const IVec& t) { return P.str(t); }

std::vector<IVec> subgroup_elements(const Subgroup& s, size_t max_count) {
  auto inc = s.inclusion();
  std::vector<IVec> out;
  for (const auto& y : inc.source.enumerate(0, max_count)) out.push_back(inc.apply(y));
  return out;
}

}  // namespace

std::string iso_kind_name(IsoKind k) { return k == IsoKind::standard ? "standard" : "congruent"; }

ClosePairDatum close_pair(const ClosePairCertificate& cert, const TorusSpec& spec, const std::optional<TorusSpec>& target) {
  if (spec.F != cert.F) throw std::invalid_argument("close_pair: torus is not over the certificate's base field");
  if (target && target->F != cert.F2) throw std::invalid_argument("close_pair: target torus is not over the certificate's second field");
  check_lattice(spec.lattice);
  ClosePairDatum d;
  d.cert = cert;
  d.spec = spec;
  TowerPtr L2;
  std::vector<Automorphism> g2;
  GaloisLattice skel2;
  if (spec.L == spec.F) {
    d.herbrand = identity_herbrand();
    d.l1 = cert.level;
    d.cert_L = cert;
    L2 = cert.F2;
    if (target && target->L != target->F) throw std::invalid_argument("close_pair: target splitting field differs");
  } else {
    auto tr = transfer_extension(cert, step_of(spec));
    d.herbrand = tr.herbrand;
    d.l1 = tr.l1;
    L2 = target ? target->L : tr.E2;
    d.cert_L = certify_close(spec.L, L2, static_cast<int>(tr.l1), tr.cert.pi_image);
  }
  skel2 = galois_skeleton(cert.F2, L2, g2);
  d.match = match_galois(d.cert_L, spec.gamma, g2, d.match_level);
  const GaloisLattice& X = spec.lattice;
  const size_t n = X.order();
  for (size_t i = 0; i < n; ++i) {
    const size_t mi = static_cast<size_t>(d.match[i]);
    if (skel2.inertia[mi] != X.inertia[i]) throw std::invalid_argument("close_pair: inertia differs under the matching");
    for (size_t j = 0; j < n; ++j)
      if (skel2.table[mi][static_cast<size_t>(d.match[j])] != d.match[static_cast<size_t>(X.table[i][j])])
        throw std::invalid_argument("close_pair: Galois composition tables disagree");
  }
  if (target) {
    for (size_t i = 0; i < n; ++i) {
      // target lattice is indexed like galois_skeleton's order
      if (target->lattice.action[static_cast<size_t>(d.match[i])] != X.action[i])
        throw std::invalid_argument("close_pair: target lattice does not match");
    }
  }
  d.spec2 = spec;
  d.spec2.label = target ? target->label : spec.label + "'";
  d.spec2.F = cert.F2;
  d.spec2.L = L2;
  d.spec2.gamma.clear();
  for (size_t i = 0; i < n; ++i) d.spec2.gamma.push_back(g2[static_cast<size_t>(d.match[i])]);
  return d;
}

ClosePairDatum reversed(const ClosePairDatum& d) {
  TorusSpec back = d.spec;
  // present d.spec in galois_skeleton order, as close_pair expects of a target
  std::vector<Automorphism> g;
  galois_skeleton(d.spec.F, d.spec.L, g);
  for (size_t i = 0; i < g.size(); ++i)
    for (size_t j = 0; j < d.spec.gamma.size(); ++j)
      if (same_aut(g[i], d.spec.gamma[j])) back.lattice.action[i] = d.spec.lattice.action[j];
  auto r = close_pair(invert(d.cert), d.spec2, back);
  return r;
}

bool admissible(const ClosePairDatum& d, const Rat& r) { return r > 0 && lleq(r, d.level(), d.herbrand); }

GroupHom split_level_iso(const ClosePairDatum& d, const TorusPoints& P, const TorusPoints& P2) {
  if (P.spec.L != d.spec.L || P2.spec.L != d.spec2.L) throw std::invalid_argument("split_level_iso: points are not over the datum");
  GroupHom D = deligne_unit_iso(d.cert_L, P.G, P2.G);
  return GroupHom(P.tuples, P2.tuples, block_diag(D.matrix, P.spec.lattice.rank));
}

bool is_standard_correspondent(const ClosePairDatum& d, const TorusPoints& P, const TorusPoints& P2, const IVec& t,
                               const IVec& t2) {
  if (!admissible(d, P.r)) throw std::invalid_argument("is_standard_correspondent: r << l violated");
  return P2.tuples.equal(split_level_iso(d, P, P2).apply(t), t2);
}

TransferIso build_standard_iso(const ClosePairDatum& d, const Rat& r, size_t max_order) {
  if (!admissible(d, r))
    throw std::invalid_argument("build_standard_iso: r = " + r.str() + " violates r << l for l = " +
                                std::to_string(d.level()));
  TransferIso iso;
  iso.r = r;
  iso.P = torus_points(d.spec, r, max_order);
  iso.P2 = torus_points(d.spec2, r, max_order);
  iso.tuples = split_level_iso(d, iso.P, iso.P2);
  iso.ok = true;
  Subgroup img{iso.P2.tuples, {}};
  for (const auto& g : iso.P.points.gens) {
    IVec y = iso.tuples.apply(g);
    if (!iso.P2.points.contains(y)) {
      iso.ok = false;
      iso.witness = "source point " + tuple_str(iso.P, g) + " maps outside the target points";
      return iso;
    }
    img.gens.push_back(y);
  }
  for (const auto& g : iso.P2.points.gens)
    if (!img.contains(g)) {
      iso.ok = false;
      iso.witness = "target point " + tuple_str(iso.P2, g) + " has no standard correspondent";
      return iso;
    }
  return iso;
}

TransferIso build_congruent_iso(const ClosePairDatum& d, int m, int stage_degree, size_t max_order) {
  if (!weakly_induced(d.spec))
    throw std::invalid_argument("build_congruent_iso: torus is not weakly induced; out of scope (needs the Neron model)");
  if (m <= 0) throw std::invalid_argument("build_congruent_iso: level must be a positive integer");
  TransferIso iso = build_standard_iso(d, Rat(m), max_order);
  iso.kind = IsoKind::congruent;
  iso.stage_degree = stage_degree > 0 ? stage_degree : default_stage_degree(d.spec);
  if (!iso.ok || iso.stage_degree == 1) {
    iso.stage_note = "no unramified stage needed";
    return iso;
  }
  // over the unramified stage the split-level map must commute with Frobenius
  // and restrict to the map over L
  StepSpec st;
  st.kind = StepKind::unramified;
  st.degree = iso.stage_degree;
  auto tr = transfer_extension(d.cert_L, st);
  const int lev = iso.P.level;
  auto U = unit_quotient(tr.E, lev, max_order), U2 = unit_quotient(tr.E2, lev, max_order);
  GroupHom D = deligne_unit_iso(tr.cert, U, U2);
  GroupHom Fr = galois_on_units(U, frobenius(*tr.E, tr.E->top()));
  GroupHom Fr2 = galois_on_units(U2, frobenius(*tr.E2, tr.E2->top()));
  if (!D.compose_after(Fr).equals(Fr2.compose_after(D))) {
    iso.ok = false;
    iso.witness = "stage map does not commute with Frobenius";
    return iso;
  }
  GroupHom below = deligne_unit_iso(d.cert_L, iso.P.G, iso.P2.G);
  GroupHom i1 = unit_inclusion(iso.P.G, U), i2 = unit_inclusion(iso.P2.G, U2);
  if (!D.compose_after(i1).equals(i2.compose_after(below))) {
    iso.ok = false;
    iso.witness = "stage map does not extend the map over the splitting field";
    return iso;
  }
  iso.stage_note = "Frobenius-equivariant over the degree " + std::to_string(iso.stage_degree) + " unramified stage";
  return iso;
}

size_t count_correspondents(const TransferIso& iso, const ClosePairDatum& d, const IVec& t, int window, size_t max_count) {
  (void)d;
  IVec key = iso.P2.tuples.normal_form(iso.apply(t));
  size_t n = 0;
  for (const auto& y : iso.P2.enumerate(window, max_count))
    if (iso.P2.tuples.normal_form(y) == key) ++n;
  return n;
}

Report verify_functoriality(const ClosePairDatum& d1, const ClosePairDatum& d2, const Mat& f, const Rat& r, int window,
                            size_t max_count) {
  if (!is_equivariant(d2.spec.lattice, d1.spec.lattice, f))
    throw std::invalid_argument("verify_functoriality: lattice map is not Galois equivariant");
  if (!is_equivariant(d2.spec2.lattice, d1.spec2.lattice, f))
    throw std::invalid_argument("verify_functoriality: lattice map is not Galois equivariant on the second side");
  Report rep;
  rep.name = "functoriality";
  auto i1 = build_standard_iso(d1, r, max_count);
  auto i2 = build_standard_iso(d2, r, max_count);
  if (!i1.ok || !i2.ok) {
    rep.pass = false;
    rep.witness = !i1.ok ? i1.witness : i2.witness;
    rep.detail = "standard isomorphism missing";
    return rep;
  }
  GroupHom phi = tuple_map(i1.P, i2.P, f), phi2 = tuple_map(i1.P2, i2.P2, f);
  for (const auto& x : i1.P.enumerate(window, max_count)) {
    ++rep.checked;
    IVec a = i2.apply(phi.apply(x)), b = phi2.apply(i1.apply(x));
    if (!i2.P2.tuples.equal(a, b)) {
      rep.pass = false;
      rep.witness = tuple_str(i1.P, x);
      return rep;
    }
  }
  return rep;
}

Report verify_equivariance(const ClosePairDatum& d, const Rat& r, int window) {
  Report rep;
  rep.name = "equivariance";
  if (!admissible(d, r)) throw std::invalid_argument("verify_equivariance: r << l violated");
  const int e = d.spec.L->e() / d.spec.F->e();
  const int lev = ceil_int(r * e);
  auto U = unit_quotient(d.spec.L, lev), U2 = unit_quotient(d.spec2.L, lev);
  GroupHom D = deligne_unit_iso(d.cert_L, U, U2);
  std::vector<IVec> xs;
  for (int v = -window; v <= window; ++v)
    for (const auto& kv : U.units.table) xs.push_back(U.element(v, kv.first));
  for (size_t i = 0; i < d.spec.gamma.size(); ++i) {
    GroupHom S = galois_on_units(U, d.spec.gamma[i]), S2 = galois_on_units(U2, d.spec2.gamma[i]);
    for (const auto& x : xs) {
      ++rep.checked;
      if (!U2.group.equal(D.apply(S.apply(x)), S2.apply(D.apply(x)))) {
        rep.pass = false;
        rep.witness = "automorphism " + std::to_string(i) + " at " + U.str(x);
        return rep;
      }
    }
  }
  rep.detail = std::to_string(d.spec.gamma.size()) + " automorphisms";
  return rep;
}

Report verify_kottwitz(const ClosePairDatum& d, const TransferIso& iso, int window, size_t max_count) {
  (void)d;
  Report rep;
  rep.name = "kottwitz";
  if (!iso.ok) {
    rep.pass = false;
    rep.witness = iso.witness;
    rep.detail = "no isomorphism";
    return rep;
  }
  if (!iso.P.kottwitz_defined || !iso.P2.kottwitz_defined) {
    rep.pass = false;
    rep.detail = "Kottwitz map does not descend to level " + std::to_string(iso.P.level);
    return rep;
  }
  const FgAbelianGroup& C = iso.P.coinvariants;
  if (C.str() != iso.P2.coinvariants.str() || iso.P.kottwitz_target.order() != iso.P2.kottwitz_target.order()) {
    rep.pass = false;
    rep.detail = "Kottwitz targets differ";
    return rep;
  }
  rep.detail = "target " + iso.P.kottwitz_target.abstract().str();
  for (const auto& x : iso.P.enumerate(window, max_count)) {
    ++rep.checked;
    if (!C.equal(iso.P.kottwitz(x), iso.P2.kottwitz(iso.apply(x)))) {
      rep.pass = false;
      rep.witness = tuple_str(iso.P, x);
      return rep;
    }
  }
  return rep;
}

Report verify_level_reduction(const ClosePairDatum& d, const Rat& r, const Rat& s, int window, size_t max_count) {
  if (s > r || s <= 0) throw std::invalid_argument("verify_level_reduction: need 0 < s <= r");
  Report rep;
  rep.name = "level_reduction";
  auto hi = build_standard_iso(d, r, max_count), lo = build_standard_iso(d, s, max_count);
  if (!hi.ok || !lo.ok) {
    rep.pass = false;
    rep.witness = !hi.ok ? hi.witness : lo.witness;
    rep.detail = "standard isomorphism missing";
    return rep;
  }
  GroupHom red = tuple_reduction(hi.P, lo.P), red2 = tuple_reduction(hi.P2, lo.P2);
  for (const auto& x : hi.P.enumerate(window, max_count)) {
    ++rep.checked;
    if (!lo.P2.tuples.equal(lo.apply(red.apply(x)), red2.apply(hi.apply(x)))) {
      rep.pass = false;
      rep.witness = tuple_str(hi.P, x);
      return rep;
    }
  }
  // the bounded parts correspond
  Subgroup B = bounded_part(hi.P), B2 = bounded_part(hi.P2);
  Subgroup img{hi.P2.tuples, {}};
  for (const auto& g : B.gens) img.gens.push_back(hi.apply(g));
  if (!B2.contains(img) || !img.contains(B2)) {
    rep.pass = false;
    rep.detail = "bounded parts do not correspond";
    return rep;
  }
  rep.detail = "bounded part of order " + B.order().str();
  return rep;
}

Report verify_uniqueness(const ClosePairDatum& d, const TransferIso& iso, int window, size_t max_count) {
  (void)d;
  Report rep;
  rep.name = "uniqueness";
  if (!iso.ok) {
    rep.pass = false;
    rep.witness = iso.witness;
    return rep;
  }
  // bounded parts are finite: scan the whole target once, keyed by normal form
  Subgroup B = bounded_part(iso.P), B2 = bounded_part(iso.P2);
  if (!B.abstract().is_finite() || B2.order() > Int(max_count)) {
    rep.pass = false;
    rep.detail = "bounded part too large to scan";
    return rep;
  }
  std::map<IVec, size_t> hits;
  for (const auto& y : subgroup_elements(B2, max_count)) ++hits[iso.P2.tuples.normal_form(y)];
  for (const auto& x : subgroup_elements(B, max_count)) {
    ++rep.checked;
    auto it = hits.find(iso.P2.tuples.normal_form(iso.apply(x)));
    if (it == hits.end() || it->second != 1) {
      rep.pass = false;
      rep.witness = tuple_str(iso.P, x) + " has " + std::to_string(it == hits.end() ? 0 : it->second) + " correspondents";
      return rep;
    }
  }
  // beyond the bounded part: at most one correspondent within the window
  for (const auto& x : iso.P.enumerate(window, max_count)) {
    ++rep.checked;
    if (count_correspondents(iso, d, x, window + 1, max_count) > 1) {
      rep.pass = false;
      rep.witness = tuple_str(iso.P, x) + " has several correspondents";
      return rep;
    }
  }
  rep.detail = "bounded target of order " + B2.order().str();
  return rep;
}

Report verify_identity(const TransferIso& iso) {
  Report rep;
  rep.name = "identity";
  rep.pass = iso.ok && iso.tuples.is_identity();
  rep.checked = iso.P.points.gens.size();
  if (!rep.pass) rep.witness = iso.ok ? "map differs from the identity" : iso.witness;
  return rep;
}

}  // namespace ctt
