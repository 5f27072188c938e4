#include "quasilab/regions.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace quasilab {

namespace {

Eigen::MatrixXd to_eigen(const std::vector<double>& rm, std::size_t d) {
  Eigen::MatrixXd m(d, d);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) m(i, j) = rm[i * d + j];
  return m;
}

std::string trim(std::string_view s) {
  std::size_t a = 0;
  std::size_t b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return std::string(s.substr(a, b - a));
}

bool same_columns_up_to_order(const QMatrix& a, const QMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
  std::vector<bool> used(b.cols(), false);
  for (std::size_t j = 0; j < a.cols(); ++j) {
    const QVector col = a.column(j);
    bool found = false;
    for (std::size_t k = 0; k < b.cols() && !found; ++k) {
      if (!used[k] && b.column(k) == col) {
        used[k] = true;
        found = true;
      }
    }
    if (!found) return false;
  }
  return true;
}

}  // namespace

RegionSet::RegionSet(std::size_t dim, std::vector<Piece> pieces) : dim_(dim), pieces_(std::move(pieces)) {
  if (dim_ == 0) throw PreconditionError("region dimension must be >= 1");
  for (std::size_t p = 0; p < pieces_.size(); ++p) {
    const Piece& pc = pieces_[p];
    if (pc.offset.size() != dim_ || pc.edges.rows() != dim_ || pc.edges.cols() != dim_)
      throw PreconditionError("piece " + std::to_string(p) + " has the wrong dimension");
    const QValue det = exact_det(pc.edges);
    if (det.is_zero()) throw PreconditionError("piece " + std::to_string(p) + " has a singular edge matrix");
    NumericPiece np;
    np.offset = eval(pc.offset);
    np.edges.resize(dim_ * dim_);
    for (std::size_t i = 0; i < dim_; ++i)
      for (std::size_t j = 0; j < dim_; ++j) np.edges[i * dim_ + j] = pc.edges(i, j).eval();
    const Eigen::MatrixXd e = to_eigen(np.edges, dim_);
    const Eigen::MatrixXd inv = e.inverse();
    np.inverse.resize(dim_ * dim_);
    for (std::size_t i = 0; i < dim_; ++i)
      for (std::size_t j = 0; j < dim_; ++j) np.inverse[i * dim_ + j] = inv(i, j);
    np.abs_det = std::abs(det.eval());
    numeric_.push_back(std::move(np));

    // long double inverse through the adjugate for the guard-band test
    const QMatrix adj = adjugate(pc.edges);
    const long double det_ld = det.eval_ld();
    std::vector<long double> inv_ld(dim_ * dim_);
    for (std::size_t i = 0; i < dim_; ++i)
      for (std::size_t j = 0; j < dim_; ++j) inv_ld[i * dim_ + j] = adj(i, j).eval_ld() / det_ld;
    inverse_ld_.push_back(std::move(inv_ld));
    exact_inverse_.push_back(adj);
    dets_.push_back(det);
  }
}

const AlgebraPtr& RegionSet::algebra() const {
  if (pieces_.empty()) throw PreconditionError("empty region has no algebra");
  return pieces_[0].edges.algebra();
}

RegionSet RegionSet::interval(const QValue& lo, const QValue& hi, bool closed_left) {
  if (compare(lo, hi) >= 0) throw PreconditionError("interval needs lo < hi, got [" + lo.to_string() + ", " + hi.to_string() + ")");
  Piece p;
  QMatrix e(lo.algebra(), 1, 1);
  if (closed_left) {
    p.offset = {lo};
    e(0, 0) = hi - lo;
  } else {
    p.offset = {hi};
    e(0, 0) = lo - hi;
  }
  p.edges = std::move(e);
  return RegionSet(1, {std::move(p)});
}

RegionSet RegionSet::box(const QVector& lo, const QVector& hi) {
  if (lo.size() != hi.size() || lo.empty()) throw PreconditionError("box corners must have equal dimension");
  const std::size_t d = lo.size();
  Piece p;
  p.offset = lo;
  p.edges = QMatrix(lo[0].algebra(), d, d);
  for (std::size_t i = 0; i < d; ++i) {
    if (compare(lo[i], hi[i]) >= 0) throw PreconditionError("box needs lo < hi on every axis");
    p.edges(i, i) = hi[i] - lo[i];
  }
  return RegionSet(d, {std::move(p)});
}

RegionSet RegionSet::parse_intervals(const AlgebraPtr& algebra, std::string_view text,
                                     bool allow_any_brackets) {
  std::vector<Piece> pieces;
  std::size_t i = 0;
  auto skip_ws = [&] {
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
  };
  bool expect_sep = false;
  while (true) {
    skip_ws();
    if (i >= text.size()) break;
    if (expect_sep) {
      if (text[i] == 'u' || text[i] == 'U') {
        ++i;
      } else if (text.substr(i).starts_with("∪")) {
        i += std::string_view("∪").size();
      } else {
        throw ParseError("expected 'u' between intervals in \"" + std::string(text) + "\"");
      }
      skip_ws();
    }
    if (i >= text.size() || (text[i] != '[' && text[i] != '('))
      throw ParseError("interval must start with '[' or '(' in \"" + std::string(text) + "\"");
    const bool closed_left = text[i] == '[';
    ++i;
    int depth = 0;
    std::size_t comma = std::string_view::npos;
    std::size_t start = i;
    char closer = 0;
    for (; i < text.size(); ++i) {
      const char c = text[i];
      if (c == '(') {
        ++depth;
      } else if (c == ')' && depth > 0) {
        --depth;
      } else if (depth == 0 && c == ',') {
        if (comma != std::string_view::npos) throw ParseError("too many commas in interval");
        comma = i;
      } else if (depth == 0 && (c == ')' || c == ']')) {
        closer = c;
        break;
      }
    }
    if (!closer || comma == std::string_view::npos)
      throw ParseError("malformed interval in \"" + std::string(text) + "\"");
    const QValue lo = QValue::parse(algebra, trim(text.substr(start, comma - start)));
    const QValue hi = QValue::parse(algebra, trim(text.substr(comma + 1, i - comma - 1)));
    ++i;
    const bool closed_right = closer == ']';
    if (closed_left == closed_right && !allow_any_brackets)
      throw PreconditionError("window must be semi-closed, [a,b) or (a,b]; got " +
                              std::string(closed_left ? "[a,b]" : "(a,b)"));
    RegionSet one = interval(lo, hi, closed_left || !closed_right);
    pieces.push_back(one.pieces_[0]);
    expect_sep = true;
  }
  if (pieces.empty()) throw ParseError("no intervals in \"" + std::string(text) + "\"");
  RegionSet r(1, std::move(pieces));
  r.check_disjoint();
  return r;
}

QValue RegionSet::piece_volume(std::size_t i) const {
  const QValue& det = dets_[i];
  return det.sign() < 0 ? -det : det;
}

QValue RegionSet::volume() const {
  if (pieces_.empty()) return QValue(AlgebraSpec::rationals());
  QValue v(algebra());
  for (std::size_t i = 0; i < pieces_.size(); ++i) v += piece_volume(i);
  return v;
}

int RegionSet::classify_numeric(std::size_t p, std::span<const long double> x) const {
  const NumericPiece& np = numeric_[p];
  const std::vector<long double>& inv = inverse_ld_[p];
  bool ambiguous = false;
  for (std::size_t k = 0; k < dim_; ++k) {
    long double c = 0;
    for (std::size_t j = 0; j < dim_; ++j)
      c += inv[k * dim_ + j] * (x[j] - static_cast<long double>(np.offset[j]));
    if (c < -kBoundaryGuard || c > 1 + kBoundaryGuard) return -1;
    if (std::abs(c) <= kBoundaryGuard || std::abs(c - 1) <= kBoundaryGuard) ambiguous = true;
  }
  return ambiguous ? 0 : 1;
}

bool RegionSet::contains_piece_exact(std::size_t p, const QVector& x) const {
  const Piece& pc = pieces_[p];
  const QMatrix& adj = *exact_inverse_[p];
  const QValue& det = dets_[p];
  const int s = det.sign();
  QVector diff;
  for (std::size_t j = 0; j < dim_; ++j) diff.push_back(x[j] - pc.offset[j]);
  const QVector a = adj * diff;
  for (std::size_t k = 0; k < dim_; ++k) {
    // coordinate c_k = a_k / det must lie in [0, 1)
    if (a[k].sign() * s < 0) return false;
    if ((a[k] - det).sign() * s >= 0) return false;
  }
  return true;
}

bool RegionSet::contains(const QVector& x) const {
  if (x.size() != dim_) throw PreconditionError("point dimension mismatch");
  for (std::size_t p = 0; p < pieces_.size(); ++p)
    if (contains_piece_exact(p, x)) return true;
  return false;
}

bool RegionSet::contains(std::span<const long double> x, const ExactPoint& exact) const {
  if (x.size() != dim_) throw PreconditionError("point dimension mismatch");
  std::optional<QVector> cached;
  for (std::size_t p = 0; p < pieces_.size(); ++p) {
    const int c = classify_numeric(p, x);
    if (c > 0) return true;
    if (c < 0) continue;
    if (!exact) throw AmbiguousBoundary("point within 1e-9 of the boundary of piece " + std::to_string(p) +
                                        " and no exact coordinates are available");
    if (!cached) cached = exact();
    if (contains_piece_exact(p, *cached)) return true;
  }
  return false;
}

int RegionSet::multiplicity(std::span<const long double> x, const ExactPoint& exact) const {
  if (x.size() != dim_) throw PreconditionError("point dimension mismatch");
  // chi_S is Z^d-periodic: move x near the origin by an integer shift first.
  constexpr std::size_t kMaxDim = 8;
  if (dim_ > kMaxDim) throw PreconditionError("multiplicity supports dimension <= 8");
  long double base[kMaxDim];
  long double shift[kMaxDim];
  for (std::size_t i = 0; i < dim_; ++i) {
    shift[i] = std::floor(x[i]);
    base[i] = x[i] - shift[i];
  }
  std::optional<QVector> base_exact;
  auto get_base_exact = [&]() -> const QVector& {
    if (!base_exact) {
      if (!exact) throw AmbiguousBoundary("multiplicity: point within 1e-9 of a boundary and no exact coordinates");
      QVector v = exact();
      for (std::size_t i = 0; i < dim_; ++i)
        v[i] -= QValue(v[i].algebra(), Rational(Integer(static_cast<long>(shift[i]))));
      base_exact = std::move(v);
    }
    return *base_exact;
  };

  int count = 0;
  long double y[kMaxDim];
  long k[kMaxDim];
  long klo[kMaxDim];
  long khi[kMaxDim];
  for (std::size_t p = 0; p < pieces_.size(); ++p) {
    const NumericPiece& np = numeric_[p];
    for (std::size_t i = 0; i < dim_; ++i) {
      double lo = np.offset[i];
      double hi = np.offset[i];
      for (std::size_t j = 0; j < dim_; ++j) {
        const double e = np.edges[i * dim_ + j];
        (e < 0 ? lo : hi) += e;
      }
      klo[i] = static_cast<long>(std::floor(lo - static_cast<double>(base[i]))) - 1;
      khi[i] = static_cast<long>(std::ceil(hi - static_cast<double>(base[i]))) + 1;
      k[i] = klo[i];
    }
    while (true) {
      for (std::size_t i = 0; i < dim_; ++i) y[i] = base[i] + static_cast<long double>(k[i]);
      const int c = classify_numeric(p, std::span<const long double>(y, dim_));
      if (c > 0) {
        ++count;
      } else if (c == 0) {
        QVector ye = get_base_exact();
        for (std::size_t i = 0; i < dim_; ++i) ye[i] += QValue(ye[i].algebra(), Rational(k[i]));
        if (contains_piece_exact(p, ye)) ++count;
      }
      std::size_t i = 0;
      while (i < dim_ && ++k[i] > khi[i]) {
        k[i] = klo[i];
        ++i;
      }
      if (i == dim_) break;
    }
  }
  return count;
}

int RegionSet::multiplicity(const QVector& x) const {
  std::vector<long double> xl;
  for (const auto& v : x) xl.push_back(v.eval_ld());
  return multiplicity(xl, [&x] { return x; });
}

std::vector<double> RegionSet::bbox_lo() const {
  std::vector<double> lo(dim_, HUGE_VAL);
  for (const auto& np : numeric_)
    for (std::size_t i = 0; i < dim_; ++i) {
      double v = np.offset[i];
      for (std::size_t j = 0; j < dim_; ++j) v += std::min(0.0, np.edges[i * dim_ + j]);
      lo[i] = std::min(lo[i], v);
    }
  return lo;
}

std::vector<double> RegionSet::bbox_hi() const {
  std::vector<double> hi(dim_, -HUGE_VAL);
  for (const auto& np : numeric_)
    for (std::size_t i = 0; i < dim_; ++i) {
      double v = np.offset[i];
      for (std::size_t j = 0; j < dim_; ++j) v += std::max(0.0, np.edges[i * dim_ + j]);
      hi[i] = std::max(hi[i], v);
    }
  return hi;
}

bool RegionSet::axis_aligned() const {
  for (const auto& p : pieces_)
    for (std::size_t i = 0; i < dim_; ++i)
      for (std::size_t j = 0; j < dim_; ++j)
        if (i != j && !p.edges(i, j).is_zero()) return false;
  return true;
}

namespace {

std::vector<std::vector<double>> corners(const RegionSet::NumericPiece& np, std::size_t d) {
  std::vector<std::vector<double>> out;
  for (std::size_t mask = 0; mask < (std::size_t{1} << d); ++mask) {
    std::vector<double> c = np.offset;
    for (std::size_t j = 0; j < d; ++j)
      if (mask & (std::size_t{1} << j))
        for (std::size_t i = 0; i < d; ++i) c[i] += np.edges[i * d + j];
    out.push_back(std::move(c));
  }
  return out;
}

// Separating axis test on face normals (plus edge cross products in 3-D).
bool numerically_separated(const RegionSet::NumericPiece& a, const RegionSet::NumericPiece& b,
                           std::size_t d) {
  std::vector<std::vector<double>> axes;
  for (const auto* np : {&a, &b})
    for (std::size_t k = 0; k < d; ++k) {
      std::vector<double> ax(d);
      for (std::size_t j = 0; j < d; ++j) ax[j] = np->inverse[k * d + j];
      axes.push_back(std::move(ax));
    }
  if (d == 3) {
    for (std::size_t p = 0; p < 3; ++p)
      for (std::size_t q = 0; q < 3; ++q) {
        const double u0 = a.edges[0 * 3 + p], u1 = a.edges[1 * 3 + p], u2 = a.edges[2 * 3 + p];
        const double v0 = b.edges[0 * 3 + q], v1 = b.edges[1 * 3 + q], v2 = b.edges[2 * 3 + q];
        axes.push_back({u1 * v2 - u2 * v1, u2 * v0 - u0 * v2, u0 * v1 - u1 * v0});
      }
  }
  const auto ca = corners(a, d);
  const auto cb = corners(b, d);
  for (const auto& ax : axes) {
    double norm = 0;
    for (double v : ax) norm += v * v;
    norm = std::sqrt(norm);
    if (norm < 1e-300) continue;
    auto project = [&](const std::vector<std::vector<double>>& cs) {
      double lo = HUGE_VAL;
      double hi = -HUGE_VAL;
      for (const auto& c : cs) {
        double s = 0;
        for (std::size_t j = 0; j < d; ++j) s += c[j] * ax[j];
        s /= norm;
        lo = std::min(lo, s);
        hi = std::max(hi, s);
      }
      return std::pair{lo, hi};
    };
    const auto [alo, ahi] = project(ca);
    const auto [blo, bhi] = project(cb);
    const double tol = 1e-9 * std::max({1.0, std::abs(alo), std::abs(ahi), std::abs(blo), std::abs(bhi)});
    if (ahi <= blo + tol || bhi <= alo + tol) return true;
  }
  return false;
}

}  // namespace

void RegionSet::check_disjoint() const {
  const bool aligned = axis_aligned();
  for (std::size_t a = 0; a < pieces_.size(); ++a)
    for (std::size_t b = a + 1; b < pieces_.size(); ++b) {
      bool overlap;
      if (aligned) {
        overlap = true;
        for (std::size_t i = 0; i < dim_ && overlap; ++i) {
          auto span_of = [&](const Piece& p) {
            QValue lo = p.offset[i];
            QValue hi = p.offset[i] + p.edges(i, i);
            if (compare(lo, hi) > 0) std::swap(lo, hi);
            return std::pair{lo, hi};
          };
          const auto [alo, ahi] = span_of(pieces_[a]);
          const auto [blo, bhi] = span_of(pieces_[b]);
          const QValue& lo = compare(alo, blo) >= 0 ? alo : blo;
          const QValue& hi = compare(ahi, bhi) <= 0 ? ahi : bhi;
          if (compare(hi, lo) <= 0) overlap = false;
        }
      } else {
        overlap = !numerically_separated(numeric_[a], numeric_[b], dim_);
      }
      if (overlap)
        throw PreconditionError("pieces " + std::to_string(a) + " and " + std::to_string(b) +
                                " overlap in positive measure");
    }
}

std::string RegionSet::to_string() const {
  std::ostringstream os;
  for (std::size_t p = 0; p < pieces_.size(); ++p) {
    if (p) os << "; ";
    os << "offset=" << quasilab::to_string(pieces_[p].offset) << " edges=" << pieces_[p].edges.to_string();
  }
  return os.str();
}

std::complex<double> ft_indicator(const RegionSet& s, std::span<const double> t) {
  const std::size_t d = s.dim();
  if (t.size() != d) throw PreconditionError("frequency dimension mismatch");
  constexpr double pi = std::numbers::pi;
  std::complex<double> total = 0;
  for (std::size_t p = 0; p < s.pieces().size(); ++p) {
    const auto& np = s.numeric_piece(p);
    double phase = 0;
    for (std::size_t j = 0; j < d; ++j) phase -= 2 * pi * t[j] * np.offset[j];
    double mag = np.abs_det;
    for (std::size_t k = 0; k < d; ++k) {
      double sk = 0;
      for (std::size_t j = 0; j < d; ++j) sk += np.edges[j * d + k] * t[j];
      // int_0^1 exp(-2 pi i s u) du = exp(-i pi s) sin(pi s) / (pi s)
      phase -= pi * sk;
      if (sk != 0) mag *= std::sin(pi * sk) / (pi * sk);
    }
    total += std::polar(mag, phase);
  }
  return total;
}

RegionSet transform_region(const RegionSet& s, const QMatrix& m) {
  if (!m.square() || m.rows() != s.dim()) throw PreconditionError("transform dimension mismatch");
  if (exact_det(m).is_zero()) throw PreconditionError("transform matrix is singular");
  std::vector<Piece> out;
  for (const auto& p : s.pieces()) out.push_back(Piece{m * p.offset, m * p.edges});
  return RegionSet(s.dim(), std::move(out));
}

RegionSet translate_region(const RegionSet& s, const QVector& v) {
  if (v.size() != s.dim()) throw PreconditionError("translation dimension mismatch");
  std::vector<Piece> out;
  for (const auto& p : s.pieces()) {
    Piece q = p;
    for (std::size_t i = 0; i < v.size(); ++i) q.offset[i] += v[i];
    out.push_back(std::move(q));
  }
  return RegionSet(s.dim(), std::move(out));
}

EquidecompVerdict verify_equidecomposition(const EquidecompCertificate& cert) {
  EquidecompVerdict v;
  const std::size_t n = cert.source.pieces().size();
  if (cert.target.pieces().size() != n || cert.shifts.size() != n) {
    v.violation = "piece counts differ: source " + std::to_string(n) + ", target " +
                  std::to_string(cert.target.pieces().size()) + ", shifts " +
                  std::to_string(cert.shifts.size());
    return v;
  }
  if (!cert.witnesses.empty() && cert.witnesses.size() != n) {
    v.violation = "witness count differs from piece count";
    return v;
  }
  try {
    cert.source.check_disjoint();
  } catch (const PreconditionError& e) {
    v.violation = std::string("source: ") + e.what();
    return v;
  }
  try {
    cert.target.check_disjoint();
  } catch (const PreconditionError& e) {
    v.violation = std::string("target: ") + e.what();
    return v;
  }
  for (std::size_t i = 0; i < n; ++i) {
    const QVector& shift = cert.shifts[i];
    std::optional<ModuleWitness> w;
    try {
      w = module_membership(shift, cert.alpha);
    } catch (const PreconditionError& e) {
      v.violation = "shift " + std::to_string(i) + " " + to_string(shift) + ": " + e.what();
      return v;
    }
    if (!w) {
      v.violation = "shift " + std::to_string(i) + " " + to_string(shift) + " is not in Z alpha + Z^d";
      return v;
    }
    if (!cert.witnesses.empty()) {
      const ModuleWitness& given = cert.witnesses[i];
      if (given.n != w->n || given.m != w->m) {
        v.violation = "witness " + std::to_string(i) + " does not reproduce shift " + to_string(shift);
        return v;
      }
    }
    const Piece& src = cert.source.pieces()[i];
    const Piece& dst = cert.target.pieces()[i];
    QVector moved = src.offset;
    for (std::size_t k = 0; k < moved.size(); ++k) moved[k] += shift[k];
    if (!(moved == dst.offset) || !same_columns_up_to_order(src.edges, dst.edges)) {
      v.violation = "source piece " + std::to_string(i) + " shifted by " + to_string(shift) +
                    " is not target piece " + std::to_string(i);
      return v;
    }
    v.witnesses.push_back(std::move(*w));
  }
  v.valid = true;
  return v;
}

}  // namespace quasilab
