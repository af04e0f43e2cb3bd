#include "ctt/abelian.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace ctt {

namespace {

Int abs_int(const Int& x) { return x < 0 ? Int(-x) : x; }

// floor-free mod into [0, d)
Int pmod(const Int& x, const Int& d) {
  Int r = x % d;
  if (r < 0) r += d;
  return r;
}

}  // namespace

Mat Mat::identity(size_t n) {
  Mat m(n, n);
  for (size_t i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

Mat Mat::from_rows(const std::vector<std::vector<long long>>& rs) {
  Mat m(rs.size(), rs.empty() ? 0 : rs[0].size());
  for (size_t i = 0; i < m.rows; ++i)
    for (size_t j = 0; j < m.cols; ++j) m(i, j) = rs[i].at(j);
  return m;
}

Mat Mat::from_columns(size_t r, const std::vector<IVec>& cs) {
  Mat m(r, cs.size());
  for (size_t j = 0; j < cs.size(); ++j) {
    if (cs[j].size() != r) throw std::invalid_argument("Mat::from_columns: length mismatch");
    for (size_t i = 0; i < r; ++i) m(i, j) = cs[j][i];
  }
  return m;
}

IVec Mat::column(size_t j) const {
  IVec v(rows);
  for (size_t i = 0; i < rows; ++i) v[i] = (*this)(i, j);
  return v;
}

Mat Mat::operator*(const Mat& o) const {
  if (cols != o.rows) throw std::invalid_argument("Mat: dimension mismatch in product");
  Mat r(rows, o.cols);
  for (size_t i = 0; i < rows; ++i)
    for (size_t k = 0; k < cols; ++k) {
      const Int& x = (*this)(i, k);
      if (x == 0) continue;
      for (size_t j = 0; j < o.cols; ++j) r(i, j) += x * o(k, j);
    }
  return r;
}

Mat Mat::operator-(const Mat& o) const {
  if (rows != o.rows || cols != o.cols) throw std::invalid_argument("Mat: dimension mismatch in difference");
  Mat r(rows, cols);
  for (size_t i = 0; i < a.size(); ++i) r.a[i] = a[i] - o.a[i];
  return r;
}

IVec Mat::operator*(const IVec& v) const {
  if (cols != v.size()) throw std::invalid_argument("Mat: dimension mismatch in apply");
  IVec r(rows, 0);
  for (size_t i = 0; i < rows; ++i)
    for (size_t j = 0; j < cols; ++j)
      if (v[j] != 0) r[i] += (*this)(i, j) * v[j];
  return r;
}

Mat Mat::transpose() const {
  Mat r(cols, rows);
  for (size_t i = 0; i < rows; ++i)
    for (size_t j = 0; j < cols; ++j) r(j, i) = (*this)(i, j);
  return r;
}

Int Mat::det() const {
  if (rows != cols) throw std::invalid_argument("Mat::det: not square");
  size_t n = rows;
  if (n == 0) return 1;
  // Bareiss fraction-free elimination
  Mat m = *this;
  Int sign = 1, prev = 1;
  for (size_t k = 0; k + 1 < n; ++k) {
    if (m(k, k) == 0) {
      size_t s = k + 1;
      while (s < n && m(s, k) == 0) ++s;
      if (s == n) return 0;
      for (size_t j = 0; j < n; ++j) std::swap(m(k, j), m(s, j));
      sign = -sign;
    }
    for (size_t i = k + 1; i < n; ++i)
      for (size_t j = k + 1; j < n; ++j) m(i, j) = (m(i, j) * m(k, k) - m(i, k) * m(k, j)) / prev;
    prev = m(k, k);
  }
  return sign * m(n - 1, n - 1);
}

Mat Mat::inverse_unimodular() const {
  if (rows != cols) throw std::invalid_argument("inverse_unimodular: not square");
  SmithForm s = smith_normal_form(*this);
  if (!(s.D == Mat::identity(rows))) throw std::invalid_argument("inverse_unimodular: matrix is not unimodular");
  return s.V * s.U;
}

std::string Mat::str() const {
  std::ostringstream os;
  os << "[";
  for (size_t i = 0; i < rows; ++i) {
    os << (i ? "; " : "");
    for (size_t j = 0; j < cols; ++j) os << (j ? " " : "") << (*this)(i, j);
  }
  os << "]";
  return os.str();
}

Mat hcat(const Mat& a, const Mat& b) {
  if (a.rows != b.rows) throw std::invalid_argument("hcat: row mismatch");
  Mat r(a.rows, a.cols + b.cols);
  for (size_t i = 0; i < a.rows; ++i) {
    for (size_t j = 0; j < a.cols; ++j) r(i, j) = a(i, j);
    for (size_t j = 0; j < b.cols; ++j) r(i, a.cols + j) = b(i, j);
  }
  return r;
}

Mat vcat(const Mat& a, const Mat& b) {
  if (a.cols != b.cols) throw std::invalid_argument("vcat: column mismatch");
  Mat r(a.rows + b.rows, a.cols);
  for (size_t i = 0; i < a.rows; ++i)
    for (size_t j = 0; j < a.cols; ++j) r(i, j) = a(i, j);
  for (size_t i = 0; i < b.rows; ++i)
    for (size_t j = 0; j < b.cols; ++j) r(a.rows + i, j) = b(i, j);
  return r;
}

Mat block_diag(const Mat& a, const Mat& b) {
  Mat r(a.rows + b.rows, a.cols + b.cols);
  for (size_t i = 0; i < a.rows; ++i)
    for (size_t j = 0; j < a.cols; ++j) r(i, j) = a(i, j);
  for (size_t i = 0; i < b.rows; ++i)
    for (size_t j = 0; j < b.cols; ++j) r(a.rows + i, a.cols + j) = b(i, j);
  return r;
}

SmithForm smith_normal_form(const Mat& A) {
  const size_t m = A.rows, n = A.cols;
  SmithForm s;
  s.D = A;
  s.U = Mat::identity(m);
  s.Uinv = Mat::identity(m);
  s.V = Mat::identity(n);
  s.Vinv = Mat::identity(n);
  Mat& D = s.D;

  // elementary operations, mirrored on U/Uinv and V/Vinv
  auto row_add = [&](size_t i, size_t j, const Int& c) {  // row_i += c row_j
    if (c == 0) return;
    for (size_t k = 0; k < n; ++k) D(i, k) += c * D(j, k);
    for (size_t k = 0; k < m; ++k) s.U(i, k) += c * s.U(j, k);
    for (size_t k = 0; k < m; ++k) s.Uinv(k, j) -= c * s.Uinv(k, i);
  };
  auto row_swap = [&](size_t i, size_t j) {
    if (i == j) return;
    for (size_t k = 0; k < n; ++k) std::swap(D(i, k), D(j, k));
    for (size_t k = 0; k < m; ++k) std::swap(s.U(i, k), s.U(j, k));
    for (size_t k = 0; k < m; ++k) std::swap(s.Uinv(k, i), s.Uinv(k, j));
  };
  auto row_neg = [&](size_t i) {
    for (size_t k = 0; k < n; ++k) D(i, k) = -D(i, k);
    for (size_t k = 0; k < m; ++k) s.U(i, k) = -s.U(i, k);
    for (size_t k = 0; k < m; ++k) s.Uinv(k, i) = -s.Uinv(k, i);
  };
  auto col_add = [&](size_t i, size_t j, const Int& c) {  // col_i += c col_j
    if (c == 0) return;
    for (size_t k = 0; k < m; ++k) D(k, i) += c * D(k, j);
    for (size_t k = 0; k < n; ++k) s.V(k, i) += c * s.V(k, j);
    for (size_t k = 0; k < n; ++k) s.Vinv(j, k) -= c * s.Vinv(i, k);
  };
  auto col_swap = [&](size_t i, size_t j) {
    if (i == j) return;
    for (size_t k = 0; k < m; ++k) std::swap(D(k, i), D(k, j));
    for (size_t k = 0; k < n; ++k) std::swap(s.V(k, i), s.V(k, j));
    for (size_t k = 0; k < n; ++k) std::swap(s.Vinv(i, k), s.Vinv(j, k));
  };

  size_t t = 0;
  while (t < std::min(m, n)) {
    // pivot: smallest nonzero absolute value in the trailing block
    bool found = false;
    size_t pi = t, pj = t;
    Int best;
    for (size_t i = t; i < m; ++i)
      for (size_t j = t; j < n; ++j)
        if (D(i, j) != 0 && (!found || abs_int(D(i, j)) < best)) {
          found = true;
          best = abs_int(D(i, j));
          pi = i;
          pj = j;
        }
    if (!found) break;
    row_swap(t, pi);
    col_swap(t, pj);
    bool clean = false;
    while (!clean) {
      clean = true;
      for (size_t i = t + 1; i < m; ++i) {
        if (D(i, t) == 0) continue;
        Int qq = D(i, t) / D(t, t);
        row_add(i, t, -qq);
        if (D(i, t) != 0) {
          row_swap(t, i);
          clean = false;
        }
      }
      for (size_t j = t + 1; j < n; ++j) {
        if (D(t, j) == 0) continue;
        Int qq = D(t, j) / D(t, t);
        col_add(j, t, -qq);
        if (D(t, j) != 0) {
          col_swap(t, j);
          clean = false;
        }
      }
      if (!clean) continue;
      // divisibility of the trailing block
      for (size_t i = t + 1; i < m && clean; ++i)
        for (size_t j = t + 1; j < n; ++j)
          if (D(i, j) % D(t, t) != 0) {
            row_add(t, i, 1);
            clean = false;
            break;
          }
    }
    if (D(t, t) < 0) row_neg(t);
    ++t;
  }
  s.rank = t;
  return s;
}

Mat integer_kernel(const Mat& A) {
  SmithForm s = smith_normal_form(A);
  Mat K(A.cols, A.cols - s.rank);
  for (size_t j = s.rank; j < A.cols; ++j)
    for (size_t i = 0; i < A.cols; ++i) K(i, j - s.rank) = s.V(i, j);
  return K;
}

// ---------------------------------------------------------------------------

FgAbelianGroup::FgAbelianGroup(size_t ambient, Mat relations) : k_(ambient), rel_(std::move(relations)) {
  if (rel_.rows != k_) {
    if (rel_.cols == 0 && rel_.rows == 0) rel_ = Mat(k_, 0);
    else throw std::invalid_argument("FgAbelianGroup: relation matrix has wrong row count");
  }
  SmithForm s = smith_normal_form(rel_);
  U_ = s.U;
  Uinv_ = s.Uinv;
  diag_.assign(k_, 0);
  for (size_t i = 0; i < s.rank; ++i) diag_[i] = s.D(i, i);
  for (size_t i = 0; i < k_; ++i) {
    if (diag_[i] == 0) free_idx_.push_back(i);
    else if (diag_[i] != 1) {
      tors_idx_.push_back(i);
      torsion_.push_back(diag_[i]);
    }
  }
  rank_ = free_idx_.size();
}

FgAbelianGroup FgAbelianGroup::free(size_t n) { return FgAbelianGroup(n, Mat(n, 0)); }

FgAbelianGroup FgAbelianGroup::finite(const std::vector<Int>& orders) {
  Mat r(orders.size(), orders.size());
  for (size_t i = 0; i < orders.size(); ++i) r(i, i) = orders[i];
  return FgAbelianGroup(orders.size(), r);
}

FgAbelianGroup FgAbelianGroup::direct_sum(const FgAbelianGroup& a, const FgAbelianGroup& b) {
  return FgAbelianGroup(a.k_ + b.k_, block_diag(a.rel_, b.rel_));
}

FgAbelianGroup FgAbelianGroup::power(const FgAbelianGroup& a, size_t n) {
  Mat r(0, 0);
  for (size_t i = 0; i < n; ++i) r = block_diag(r, a.rel_);
  return FgAbelianGroup(a.k_ * n, r);
}

Int FgAbelianGroup::order() const {
  if (rank_ > 0) return 0;
  Int o = 1;
  for (const auto& d : torsion_) o *= d;
  return o;
}

std::string FgAbelianGroup::str() const {
  std::ostringstream os;
  bool first = true;
  if (rank_ > 0) {
    os << "Z";
    if (rank_ > 1) os << "^" << rank_;
    first = false;
  }
  for (const auto& d : torsion_) {
    os << (first ? "" : " x ") << "Z/" << d;
    first = false;
  }
  if (first) os << "0";
  return os.str();
}

IVec FgAbelianGroup::normal_form(const IVec& x) const {
  if (x.size() != k_) throw std::invalid_argument("normal_form: wrong ambient dimension");
  IVec y = U_ * x;
  IVec nf;
  for (size_t i : free_idx_) nf.push_back(y[i]);
  for (size_t i : tors_idx_) nf.push_back(pmod(y[i], diag_[i]));
  return nf;
}

IVec FgAbelianGroup::from_normal(const IVec& nf) const {
  if (nf.size() != free_idx_.size() + tors_idx_.size()) throw std::invalid_argument("from_normal: wrong length");
  IVec y(k_, 0);
  size_t c = 0;
  for (size_t i : free_idx_) y[i] = nf[c++];
  for (size_t i : tors_idx_) y[i] = nf[c++];
  return Uinv_ * y;
}

bool FgAbelianGroup::is_zero(const IVec& x) const {
  IVec nf = normal_form(x);
  return std::all_of(nf.begin(), nf.end(), [](const Int& v) { return v == 0; });
}

bool FgAbelianGroup::equal(const IVec& x, const IVec& y) const { return normal_form(x) == normal_form(y); }

IVec FgAbelianGroup::add(const IVec& x, const IVec& y) const {
  IVec r(k_);
  for (size_t i = 0; i < k_; ++i) r[i] = x[i] + y[i];
  return from_normal(normal_form(r));
}

IVec FgAbelianGroup::neg(const IVec& x) const {
  IVec r(k_);
  for (size_t i = 0; i < k_; ++i) r[i] = -x[i];
  return from_normal(normal_form(r));
}

IVec FgAbelianGroup::scale(const IVec& x, const Int& n) const {
  IVec r(k_);
  for (size_t i = 0; i < k_; ++i) r[i] = x[i] * n;
  return from_normal(normal_form(r));
}

IVec FgAbelianGroup::basis(size_t i) const {
  IVec r(k_, 0);
  r.at(i) = 1;
  return r;
}

size_t FgAbelianGroup::enumeration_size(int window) const {
  long double n = 1;
  for (size_t i = 0; i < rank_; ++i) n *= (2 * window + 1);
  for (const auto& d : torsion_) n *= static_cast<long double>(d);
  if (n > 1e15L) return static_cast<size_t>(-1);
  return static_cast<size_t>(n);
}

std::vector<IVec> FgAbelianGroup::enumerate(int window, size_t max_count) const {
  size_t n = enumeration_size(window);
  if (n > max_count)
    throw std::invalid_argument("enumerate: " + str() + " has more than " + std::to_string(max_count) +
                                " elements in the window");
  std::vector<Int> lo, span;
  for (size_t i = 0; i < rank_; ++i) {
    lo.push_back(-window);
    span.push_back(2 * window + 1);
  }
  for (const auto& d : torsion_) {
    lo.push_back(0);
    span.push_back(d);
  }
  std::vector<IVec> out;
  out.reserve(n);
  IVec cur = lo;
  for (size_t c = 0; c < n; ++c) {
    out.push_back(from_normal(cur));
    for (size_t i = 0; i < cur.size(); ++i) {
      cur[i] += 1;
      if (cur[i] < lo[i] + span[i]) break;
      cur[i] = lo[i];
    }
  }
  return out;
}

// ---------------------------------------------------------------------------

GroupHom::GroupHom(FgAbelianGroup s, FgAbelianGroup t, Mat m)
    : source(std::move(s)), target(std::move(t)), matrix(std::move(m)) {
  if (matrix.rows != target.ambient() || matrix.cols != source.ambient())
    throw std::invalid_argument("GroupHom: matrix shape does not match source/target");
  const Mat& R = source.relations();
  for (size_t j = 0; j < R.cols; ++j)
    if (!target.is_zero(matrix * R.column(j)))
      throw std::invalid_argument("GroupHom: map is not well defined on relations");
}

IVec GroupHom::apply(const IVec& x) const { return target.from_normal(target.normal_form(matrix * x)); }

GroupHom GroupHom::compose_after(const GroupHom& inner) const { return GroupHom(inner.source, target, matrix * inner.matrix); }

bool GroupHom::equals(const GroupHom& o) const {
  if (source.ambient() != o.source.ambient() || target.ambient() != o.target.ambient()) return false;
  for (size_t j = 0; j < source.ambient(); ++j)
    if (!target.equal(matrix.column(j), o.matrix.column(j))) return false;
  return true;
}

bool GroupHom::is_identity() const {
  if (source.ambient() != target.ambient()) return false;
  return equals(GroupHom(source, target, Mat::identity(source.ambient())));
}

Subgroup whole(const FgAbelianGroup& g) {
  Subgroup s{g, {}};
  for (size_t i = 0; i < g.ambient(); ++i) s.gens.push_back(g.basis(i));
  return s;
}

struct Subgroup::Cache {
  Mat key;
  SmithForm snf;
  std::optional<FgAbelianGroup> abs;
};

const Subgroup::Cache& Subgroup::cached() const {
  Mat A = hcat(Mat::from_columns(ambient.ambient(), gens), ambient.relations());
  if (!cache || !(cache->key == A)) {
    auto c = std::make_shared<Cache>();
    c->snf = smith_normal_form(A);
    c->key = std::move(A);
    cache = c;
  }
  return *cache;
}

FgAbelianGroup Subgroup::abstract() const {
  const Cache& c = cached();
  if (!c.abs) {
    const size_t mg = gens.size();
    const Mat& A = c.key;
    Mat rel(mg, A.cols - c.snf.rank);
    for (size_t j = c.snf.rank; j < A.cols; ++j)
      for (size_t i = 0; i < mg; ++i) rel(i, j - c.snf.rank) = c.snf.V(i, j);
    cache->abs = FgAbelianGroup(mg, rel);
  }
  return *c.abs;
}

GroupHom Subgroup::inclusion() const { return GroupHom(abstract(), ambient, Mat::from_columns(ambient.ambient(), gens)); }

IVec Subgroup::coordinates(const IVec& x) const {
  const Cache& c = cached();
  const Mat& A = c.key;
  const SmithForm& s = c.snf;
  IVec y = s.U * x;
  IVec z(A.cols, 0);
  for (size_t i = 0; i < y.size(); ++i) {
    if (i < s.rank) {
      if (y[i] % s.D(i, i) != 0) throw std::invalid_argument("coordinates: element not in subgroup");
      z[i] = y[i] / s.D(i, i);
    } else if (y[i] != 0) {
      throw std::invalid_argument("coordinates: element not in subgroup");
    }
  }
  IVec w = s.V * z;
  w.resize(gens.size());
  return w;
}

bool Subgroup::contains(const IVec& x) const {
  try {
    coordinates(x);
    return true;
  } catch (const std::invalid_argument&) {
    return false;
  }
}

bool Subgroup::contains(const Subgroup& h) const {
  return std::all_of(h.gens.begin(), h.gens.end(), [&](const IVec& g) { return contains(g); });
}

Subgroup intersect(const Subgroup& a, const Subgroup& b) {
  const size_t k = a.ambient.ambient();
  Mat Ga = Mat::from_columns(k, a.gens);
  Mat Gb = Mat::from_columns(k, b.gens);
  Mat negGb = Mat(k, Gb.cols) - Gb;
  Mat K = integer_kernel(hcat(hcat(Ga, negGb), a.ambient.relations()));
  Subgroup r{a.ambient, {}};
  for (size_t j = 0; j < K.cols; ++j) {
    IVec c(a.gens.size());
    for (size_t i = 0; i < c.size(); ++i) c[i] = K(i, j);
    IVec v = Ga * c;
    if (!a.ambient.is_zero(v)) r.gens.push_back(a.ambient.from_normal(a.ambient.normal_form(v)));
  }
  return r;
}

Subgroup kernel(const GroupHom& h) {
  const size_t a = h.source.ambient();
  Mat K = integer_kernel(hcat(h.matrix, h.target.relations()));
  Subgroup r{h.source, {}};
  for (size_t j = 0; j < K.cols; ++j) {
    IVec v(a);
    for (size_t i = 0; i < a; ++i) v[i] = K(i, j);
    if (!h.source.is_zero(v)) r.gens.push_back(h.source.from_normal(h.source.normal_form(v)));
  }
  return r;
}

Subgroup image(const GroupHom& h) {
  Subgroup r{h.target, {}};
  for (size_t j = 0; j < h.matrix.cols; ++j) {
    IVec v = h.matrix.column(j);
    if (!h.target.is_zero(v)) r.gens.push_back(h.target.from_normal(h.target.normal_form(v)));
  }
  return r;
}

FgAbelianGroup cokernel(const GroupHom& h) {
  return FgAbelianGroup(h.target.ambient(), hcat(h.target.relations(), h.matrix));
}

void check_action(const GroupAction& act) {
  const size_t n = act.maps.size();
  if (act.table.size() != n) throw std::invalid_argument("group action: composition table has wrong size");
  for (size_t i = 0; i < n; ++i) {
    if (act.table[i].size() != n) throw std::invalid_argument("group action: composition table has wrong size");
    for (size_t j = 0; j < n; ++j) {
      int k = act.table[i][j];
      if (k < 0 || static_cast<size_t>(k) >= n) throw std::invalid_argument("group action: bad table entry");
      if (!act.maps[i].compose_after(act.maps[j]).equals(act.maps[static_cast<size_t>(k)]))
        throw std::invalid_argument("group action: maps do not satisfy the composition table");
    }
  }
}

namespace {

// indices of a generating set, read off the composition table
std::vector<size_t> generating_set(const GroupAction& act) {
  const size_t n = act.maps.size();
  std::vector<char> in(n, 0);
  std::vector<size_t> gens;
  auto close = [&]() {
    bool grew = true;
    while (grew) {
      grew = false;
      for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j)
          if (in[i] && in[j] && !in[static_cast<size_t>(act.table[i][j])]) {
            in[static_cast<size_t>(act.table[i][j])] = 1;
            grew = true;
          }
    }
  };
  for (size_t i = 0; i < n; ++i) {
    if (in[i]) continue;
    gens.push_back(i);
    in[i] = 1;
    close();
  }
  return gens;
}

Mat stacked_minus_one(const GroupAction& act, size_t k) {
  Mat S(0, k);
  for (size_t i : generating_set(act)) S = vcat(S, act.maps[i].matrix - Mat::identity(k));
  return S;
}

}  // namespace

Subgroup fixed_points(const GroupAction& act, const FgAbelianGroup& M) {
  check_action(act);
  const size_t k = M.ambient();
  FgAbelianGroup tgt = FgAbelianGroup::power(M, generating_set(act).size());
  return kernel(GroupHom(M, tgt, stacked_minus_one(act, k)));
}

FgAbelianGroup coinvariants(const GroupAction& act, const FgAbelianGroup& M) {
  check_action(act);
  const size_t k = M.ambient();
  Mat R = M.relations();
  for (size_t i : generating_set(act)) R = hcat(R, act.maps[i].matrix - Mat::identity(k));
  return FgAbelianGroup(k, R);
}

GroupHom induced_on(const GroupHom& h, const FgAbelianGroup& quotient) { return GroupHom(quotient, quotient, h.matrix); }

IVec BlackBoxGroup::dlog(uint64_t key) const {
  auto it = table.find(key);
  if (it == table.end()) throw std::invalid_argument("dlog: element not in group");
  return it->second;
}

uint64_t BlackBoxGroup::element(const IVec& coords, const std::function<uint64_t(uint64_t, uint64_t)>& mul,
                                uint64_t identity) const {
  IVec nf = group.normal_form(coords);
  IVec c = group.from_normal(nf);
  uint64_t r = identity;
  for (size_t i = 0; i < c.size(); ++i) {
    Int e = c[i];
    // coordinates of from_normal can be negative; reduce with the generator order
    Int ord = 1;
    {
      uint64_t x = generators[i];
      while (x != identity) {
        x = mul(x, generators[i]);
        ord += 1;
      }
    }
    e = pmod(e, ord);
    for (Int j = 0; j < e; ++j) r = mul(r, generators[i]);
  }
  return r;
}

BlackBoxGroup build_black_box(const std::vector<uint64_t>& elements, uint64_t identity,
                              const std::function<uint64_t(uint64_t, uint64_t)>& mul, size_t max_order) {
  if (elements.size() > max_order)
    throw std::invalid_argument("build_black_box: group order " + std::to_string(elements.size()) +
                                " exceeds the enumeration bound " + std::to_string(max_order));
  BlackBoxGroup out;
  std::vector<IVec> rel_cols;
  out.table[identity] = IVec{};
  std::vector<uint64_t> members{identity};
  for (uint64_t g : elements) {
    if (out.table.count(g)) continue;
    const size_t m = out.generators.size();
    // smallest k with g^k in the current subgroup
    uint64_t x = g;
    Int k = 1;
    while (!out.table.count(x)) {
      x = mul(x, g);
      k += 1;
      if (k > static_cast<long long>(elements.size()) + 1) throw std::invalid_argument("build_black_box: not a group");
    }
    IVec prev = out.table[x];
    prev.resize(m + 1, 0);
    IVec rel(m + 1, 0);
    for (size_t i = 0; i < m; ++i) rel[i] = -prev[i];
    rel[m] = k;
    for (auto& c : rel_cols) c.resize(m + 1, 0);
    rel_cols.push_back(rel);
    for (auto& kv : out.table) kv.second.resize(m + 1, 0);
    out.generators.push_back(g);
    // extend by powers g^j, 1 <= j < k
    std::vector<uint64_t> fresh;
    uint64_t gj = g;
    for (Int j = 1; j < k; ++j) {
      for (uint64_t h : members) {
        uint64_t y = mul(h, gj);
        IVec c = out.table[h];
        c[m] += j;
        out.table[y] = c;
        fresh.push_back(y);
      }
      gj = mul(gj, g);
    }
    members.insert(members.end(), fresh.begin(), fresh.end());
  }
  if (members.size() != elements.size())
    throw std::invalid_argument("build_black_box: element list is not closed under multiplication");
  const size_t m = out.generators.size();
  for (auto& kv : out.table) kv.second.resize(m, 0);
  out.group = FgAbelianGroup(m, Mat::from_columns(m, rel_cols));
  return out;
}

std::string ivec_str(const IVec& v) {
  std::ostringstream os;
  os << "(";
  for (size_t i = 0; i < v.size(); ++i) os << (i ? "," : "") << v[i];
  os << ")";
  return os.str();
}

}  // namespace ctt
