#include "ctt/units_transfer.hpp"

#include <sstream>
#include <stdexcept>

namespace ctt {

uint64_t UnitQuotient::unit_order() const { return static_cast<uint64_t>(units.group.order()); }

IVec UnitQuotient::element(int64_t valuation, uint64_t unit_class) const {
  IVec x{Int(valuation)};
  for (const auto& c : units.dlog(unit_class)) x.push_back(c);
  return x;
}

uint64_t UnitQuotient::mul_class(uint64_t a, uint64_t b) const {
  const Tower& t = *tower;
  return t.class_index(t.mul(t.from_class(a, level), t.from_class(b, level)), level);
}

uint64_t UnitQuotient::unit_class(const IVec& x) const {
  IVec u(x.begin() + 1, x.end());
  return units.element(u, [this](uint64_t a, uint64_t b) { return mul_class(a, b); },
                       tower->class_index(tower->one(), level));
}

std::string UnitQuotient::str(const IVec& x) const {
  std::ostringstream os;
  os << "(" << valuation_of(x) << ", [";
  auto ds = tower->truncate(tower->from_class(unit_class(x), level), level);
  for (size_t i = 0; i < ds.size(); ++i) os << (i ? " " : "") << tower->digit_index(ds[i]);
  os << "])";
  return os.str();
}

UnitQuotient unit_quotient(const TowerPtr& t, int level, size_t max_order) {
  if (level < 1 || level > t->precision())
    throw std::invalid_argument("unit_quotient: level " + std::to_string(level) + " exceeds working precision " +
                                std::to_string(t->precision()));
  UnitQuotient U;
  U.tower = t;
  U.level = level;
  const uint64_t q = t->q();
  const uint64_t n = t->class_count(level);
  if ((q - 1) * (n / q) > max_order)
    throw std::invalid_argument("unit_quotient: unit group of order " + std::to_string((q - 1) * (n / q)) +
                                " exceeds the enumeration bound " + std::to_string(max_order));
  std::vector<uint64_t> elems;
  for (uint64_t i = 0; i < n; ++i)
    if (i % q != 0) elems.push_back(i);
  const uint64_t one = t->class_index(t->one(), level);
  U.units = build_black_box(elems, one, [&U](uint64_t a, uint64_t b) { return U.mul_class(a, b); }, max_order);
  U.group = FgAbelianGroup::direct_sum(FgAbelianGroup::free(1), U.units.group);
  return U;
}

IVec project(const UnitQuotient& U, const Vec& x) {
  const Tower& t = *U.tower;
  int64_t v = t.valuation(x);
  if (v >= t.precision()) throw std::invalid_argument("project: element is zero at working precision");
  if (t.precision() - v < U.level)
    throw std::invalid_argument("project: unit part not determined at level " + std::to_string(U.level));
  Vec u = x;
  for (int64_t i = 0; i < v; ++i) u = t.div_pi(t.top(), u);
  return U.element(v, t.class_index(u, U.level));
}

namespace {

Mat columns(const UnitQuotient& target, const std::vector<IVec>& cols) {
  return Mat::from_columns(target.group.ambient(), cols);
}

}  // namespace

GroupHom deligne_unit_iso(const ClosePairCertificate& c, const UnitQuotient& U, const UnitQuotient& U2) {
  if (U.tower != c.F || U2.tower != c.F2) throw std::invalid_argument("deligne_unit_iso: quotients are not on the certificate's fields");
  if (U.level != U2.level || U.level > c.level)
    throw std::invalid_argument("deligne_unit_iso: certificate level mismatch (certificate " + std::to_string(c.level) +
                                ", quotients " + std::to_string(U.level) + "/" + std::to_string(U2.level) + ")");
  std::vector<IVec> cols{project(U2, c.pi_image)};
  for (uint64_t g : U.units.generators)
    cols.push_back(U2.element(0, transport_class(c, c.F->from_class(g, U.level), U.level)));
  GroupHom h(U.group, U2.group, columns(U2, cols));
  if (!is_isomorphism(h)) throw std::logic_error("deligne_unit_iso: constructed map is not an isomorphism");
  return h;
}

GroupHom unit_inclusion(const UnitQuotient& lower, const UnitQuotient& upper) {
  const Tower& F = *lower.tower;
  const Tower& L = *upper.tower;
  if (L.top() < F.top() || L.p() != F.p() || L.kind() != F.kind()) throw std::invalid_argument("unit_inclusion: not an extension");
  for (int k = 1; k <= F.top(); ++k)
    if (L.layer(k).poly != F.layer(k).poly || L.layer(k).kind != F.layer(k).kind)
      throw std::invalid_argument("unit_inclusion: upper tower does not extend the lower one");
  const int e = L.e() / F.e();
  if (upper.level > e * lower.level)
    throw std::invalid_argument("unit_inclusion: level arithmetic violated (" + std::to_string(upper.level) + " > " +
                                std::to_string(e) + " * " + std::to_string(lower.level) + ")");
  std::vector<IVec> cols{project(upper, L.embed(F.top(), L.top(), F.uniformizer()))};
  for (uint64_t g : lower.units.generators)
    cols.push_back(project(upper, L.embed(F.top(), L.top(), F.from_class(g, lower.level))));
  return GroupHom(lower.group, upper.group, columns(upper, cols));
}

GroupHom galois_on_units(const UnitQuotient& U, const Automorphism& s) {
  const Tower& t = *U.tower;
  if (s.level != t.top()) throw std::invalid_argument("galois_on_units: automorphism is not of the top level");
  std::vector<IVec> cols{project(U, apply_aut(t, s, t.uniformizer()))};
  for (uint64_t g : U.units.generators) cols.push_back(project(U, apply_aut(t, s, t.from_class(g, U.level))));
  return GroupHom(U.group, U.group, columns(U, cols));
}

GroupHom unit_level_reduction(const UnitQuotient& h, const UnitQuotient& l) {
  if (h.tower != l.tower || l.level > h.level) throw std::invalid_argument("unit_level_reduction: bad levels");
  uint64_t qs = 1;
  for (int i = 0; i < l.level; ++i) qs *= h.tower->q();
  std::vector<IVec> cols{l.element(1, l.tower->class_index(l.tower->one(), l.level))};
  for (uint64_t g : h.units.generators) cols.push_back(l.element(0, g % qs));
  return GroupHom(h.group, l.group, columns(l, cols));
}

bool is_isomorphism(const GroupHom& h) {
  auto k = kernel(h);
  if (!k.abstract().is_finite() || k.order() != 1) return false;
  auto c = cokernel(h);
  return c.is_finite() && c.order() == 1;
}

}  // namespace ctt
