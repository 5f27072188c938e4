#include <algorithm>
#include <cmath>
#include <climits>

#include "quasilab/regions.hpp"

namespace quasilab {

namespace {

using IntVec = std::vector<long>;

// Values in search order 0, 1, -1, 2, -2, ...
long key_value(int idx) { return idx == 0 ? 0 : (idx % 2 ? (idx + 1) / 2 : -(idx / 2)); }

// Visits every vector of `len` entries with |v_i| <= bound and sum |v_i| ==
// total, lexicographically in the key order above. Stops when visit
// returns true.
bool for_each_vector(std::size_t len, long bound, long total, IntVec& v, std::size_t pos,
                     const std::function<bool(const IntVec&)>& visit) {
  if (pos == len) return total == 0 && visit(v);
  if (pos + 1 == len) {
    if (total > bound) return false;
    for (long x : total == 0 ? IntVec{0} : IntVec{total, -total}) {
      v[pos] = x;
      if (visit(v)) return true;
    }
    return false;
  }
  for (int idx = 0;; ++idx) {
    const long x = key_value(idx);
    const long a = x < 0 ? -x : x;
    if (a > bound || a > total) break;
    v[pos] = x;
    if (for_each_vector(len, bound, total - a, v, pos + 1, visit)) return true;
  }
  return false;
}

bool for_each_by_size(std::size_t len, long bound, const std::function<bool(const IntVec&)>& visit) {
  IntVec v(len, 0);
  for (long s = 0; s <= static_cast<long>(len) * bound; ++s)
    if (for_each_vector(len, bound, s, v, 0, visit)) return true;
  return false;
}

// m is column-major d x d: m[j*d + i] = M(i, j).
Integer int_det(const std::vector<Integer>& m, std::size_t d) {
  if (d == 1) return m[0];
  Integer det = 0;
  for (std::size_t r = 0; r < d; ++r) {
    if (m[r] == 0) continue;
    std::vector<Integer> minor;
    for (std::size_t j = 1; j < d; ++j)
      for (std::size_t i = 0; i < d; ++i)
        if (i != r) minor.push_back(m[j * d + i]);
    const Integer sub = int_det(minor, d - 1);
    det += (r % 2 ? -1 : 1) * m[r] * sub;
  }
  return det;
}

// adj(M)(i, j) = (-1)^{i+j} det(M without row j, column i); column-major.
std::vector<Integer> int_adjugate(const std::vector<Integer>& m, std::size_t d) {
  std::vector<Integer> adj(d * d);
  if (d == 1) {
    adj[0] = 1;
    return adj;
  }
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) {
      std::vector<Integer> minor;
      for (std::size_t c = 0; c < d; ++c) {
        if (c == i) continue;
        for (std::size_t r = 0; r < d; ++r)
          if (r != j) minor.push_back(m[c * d + r]);
      }
      const Integer sub = int_det(minor, d - 1);
      adj[j * d + i] = ((i + j) % 2 ? -sub : sub);
    }
  return adj;
}

QVector module_vector(const QVector& alpha, const ModuleWitness& w) {
  QVector v;
  for (std::size_t i = 0; i < alpha.size(); ++i)
    v.push_back(alpha[i] * Rational(w.n) + QValue(alpha[i].algebra(), Rational(w.m[i])));
  return v;
}

struct Corners {
  std::vector<std::vector<double>> pts;
};

Corners piece_corners(const RegionSet::NumericPiece& np, std::size_t d) {
  Corners c;
  for (std::size_t mask = 0; mask < (std::size_t{1} << d); ++mask) {
    std::vector<double> p = np.offset;
    for (std::size_t j = 0; j < d; ++j)
      if (mask & (std::size_t{1} << j))
        for (std::size_t i = 0; i < d; ++i) p[i] += np.edges[i * d + j];
    c.pts.push_back(std::move(p));
  }
  return c;
}

// Separating-axis test over the face normals of both pieces. With
// `strict`, touching closures count as meeting.
bool closures_meet(const RegionSet::NumericPiece& a, const RegionSet::NumericPiece& b, std::size_t d,
                   bool strict) {
  const Corners ca = piece_corners(a, d);
  const Corners cb = piece_corners(b, d);
  std::vector<std::vector<double>> axes;
  for (const auto* np : {&a, &b})
    for (std::size_t k = 0; k < d; ++k) {
      std::vector<double> ax(d);
      for (std::size_t j = 0; j < d; ++j) ax[j] = np->inverse[k * d + j];
      axes.push_back(std::move(ax));
    }
  for (const auto& ax : axes) {
    auto project = [&](const Corners& cs) {
      double lo = HUGE_VAL;
      double hi = -HUGE_VAL;
      for (const auto& p : cs.pts) {
        double s = 0;
        for (std::size_t j = 0; j < d; ++j) s += p[j] * ax[j];
        lo = std::min(lo, s);
        hi = std::max(hi, s);
      }
      return std::pair{lo, hi};
    };
    const auto [alo, ahi] = project(ca);
    const auto [blo, bhi] = project(cb);
    const double tol = 1e-9 * std::max({1.0, std::abs(alo), std::abs(ahi), std::abs(blo), std::abs(bhi)});
    if (strict) {
      if (ahi < blo - tol || bhi < alo - tol) return false;
    } else if (ahi <= blo + tol || bhi <= alo + tol) {
      return false;
    }
  }
  return true;
}

// Every corner of `inner` strictly inside the convex piece `outer`.
bool strictly_inside(const RegionSet::NumericPiece& inner, const RegionSet::NumericPiece& outer,
                     std::size_t d) {
  for (const auto& p : piece_corners(inner, d).pts)
    for (std::size_t k = 0; k < d; ++k) {
      double c = 0;
      for (std::size_t j = 0; j < d; ++j) c += outer.inverse[k * d + j] * (p[j] - outer.offset[j]);
      if (c <= 1e-9 || c >= 1 - 1e-9) return false;
    }
  return true;
}

}  // namespace

BrsParallelepiped brs_parallelepiped(const QVector& alpha, const std::vector<ModuleWitness>& generators) {
  const std::size_t d = alpha.size();
  if (d == 0 || generators.size() != d)
    throw PreconditionError("need exactly d = " + std::to_string(d) + " generators");
  std::vector<QVector> cols;
  for (const auto& g : generators) {
    if (g.m.size() != d) throw PreconditionError("generator integer part must have length d");
    cols.push_back(module_vector(alpha, g));
  }
  Piece p;
  p.offset = QVector(d, QValue(alpha[0].algebra()));
  p.edges = QMatrix::from_columns(cols);
  if (exact_det(p.edges).is_zero()) throw PreconditionError("degenerate span: generators are linearly dependent");
  return BrsParallelepiped{RegionSet(d, {std::move(p)}), generators};
}

bool for_each_measure_realization(const QVector& alpha, const QValue& gamma, int search_bound,
                                  const std::function<bool(const BrsParallelepiped&)>& accept) {
  const std::size_t d = alpha.size();
  if (d == 0) throw PreconditionError("alpha must be nonempty");
  if (gamma.sign() <= 0) throw PreconditionError("gamma must be positive");
  const auto form = measure_form(gamma, alpha);
  if (!form)
    throw PreconditionError("gamma = " + gamma.to_string() + " is not of the form n0 + n1 alpha_1 + ... + nd alpha_d");
  const Integer& n0 = (*form)[0];
  const std::vector<Integer> c(form->begin() + 1, form->end());

  if (d == 1) {
    ModuleWitness w{c[0], {n0}};
    return accept(brs_parallelepiped(alpha, {w}));
  }

  // det(M + alpha n^T) = det M + n^T adj(M) alpha, so with 1, alpha independent:
  //   det M = s n0   and   adj(M)^T n = s c,   s = +-1.
  const long bound = search_bound;
  return for_each_by_size(d * d, bound, [&](const IntVec& flat) {
    std::vector<Integer> m(flat.begin(), flat.end());
    const Integer det = int_det(m, d);
    const std::vector<Integer> adj = int_adjugate(m, d);
    for (int s : {1, -1}) {
      if (det != s * n0) continue;
      auto try_n = [&](const std::vector<Integer>& n) {
        // adj(M)^T n == s c
        for (std::size_t k = 0; k < d; ++k) {
          Integer acc = 0;
          for (std::size_t i = 0; i < d; ++i) acc += adj[k * d + i] * n[i];
          if (acc != s * c[k]) return false;
        }
        std::vector<ModuleWitness> gens;
        for (std::size_t j = 0; j < d; ++j) {
          ModuleWitness w{n[j], std::vector<Integer>(m.begin() + static_cast<std::ptrdiff_t>(j * d),
                                                     m.begin() + static_cast<std::ptrdiff_t>((j + 1) * d))};
          gens.push_back(std::move(w));
        }
        BrsParallelepiped b = brs_parallelepiped(alpha, gens);
        const QValue det_v = exact_det(b.region.pieces()[0].edges);
        if (!(det_v == gamma) && !(det_v == -gamma))
          throw Error("realize_measure: internal determinant identity failed");
        return accept(b);
      };
      if (det != 0) {
        // n = s M^T c / det M
        std::vector<Integer> n(d);
        bool integral = true;
        for (std::size_t i = 0; i < d && integral; ++i) {
          Integer acc = 0;
          for (std::size_t k = 0; k < d; ++k) acc += m[i * d + k] * c[k];
          acc *= s;
          if (acc % det != 0) integral = false;
          n[i] = acc / det;
          if (Integer(abs(n[i])) > bound) integral = false;
        }
        if (integral && try_n(n)) return true;
      } else {
        const bool found = for_each_by_size(d, bound, [&](const IntVec& nv) {
          return try_n(std::vector<Integer>(nv.begin(), nv.end()));
        });
        if (found) return true;
      }
    }
    return false;
  });
}

BrsParallelepiped realize_measure(const QVector& alpha, const QValue& gamma, int search_bound) {
  std::optional<BrsParallelepiped> out;
  const bool found = for_each_measure_realization(alpha, gamma, search_bound, [&](const BrsParallelepiped& b) {
    out = b;
    return true;
  });
  if (!found)
    throw SearchExhausted("realize_measure: no parallelepiped of volume " + gamma.to_string() +
                          " with entries bounded by " + std::to_string(search_bound));
  return *out;
}

namespace {

// Smallest positive n with |n alpha - round(n alpha)|_inf < eps, as a
// module vector; skips vectors in the span of `previous`.
std::vector<ModuleWitness> small_module_vectors(const QVector& alpha, double eps, std::size_t want) {
  const std::size_t d = alpha.size();
  std::vector<ModuleWitness> out;
  std::vector<long double> a;
  for (const auto& x : alpha) a.push_back(x.eval_ld());
  constexpr long kLimit = 10'000'000;
  for (long n = 1; n <= kLimit && out.size() < want; ++n) {
    bool small = true;
    std::vector<Integer> m(d);
    for (std::size_t i = 0; i < d && small; ++i) {
      const long double v = static_cast<long double>(n) * a[i];
      const long double r = std::nearbyint(v);
      if (std::abs(v - r) >= eps) small = false;
      m[i] = -Integer(static_cast<long>(r));
    }
    if (!small) continue;
    ModuleWitness w{Integer(n), m};
    std::vector<QVector> cols;
    for (const auto& p : out) cols.push_back(module_vector(alpha, p));
    cols.push_back(module_vector(alpha, w));
    bool zero = true;
    for (const auto& x : cols.back()) zero = zero && x.is_zero();
    if (zero) continue;
    if (cols.size() > 1) {
      // independence: the Gram determinant of the columns is nonzero
      QMatrix c = QMatrix::from_columns(cols);
      if (exact_det(c.transpose() * c).is_zero()) continue;
    }
    out.push_back(std::move(w));
  }
  if (out.size() < want)
    throw SearchExhausted("no " + std::to_string(want) + " independent module vectors below epsilon");
  return out;
}

BrsConstruction construct_1d(const RegionSet& k, const RegionSet& u, const QValue& gamma, const QVector& alpha,
                             double epsilon) {
  const AlgebraPtr& alg = alpha[0].algebra();
  auto ends = [](const Piece& p) {
    QValue a = p.offset[0];
    QValue b = p.offset[0] + p.edges(0, 0);
    if (compare(a, b) > 0) std::swap(a, b);
    return std::pair{a, b};
  };
  QValue k0 = ends(k.pieces()[0]).first;
  QValue k1 = ends(k.pieces()[0]).second;
  for (const auto& p : k.pieces()) {
    const auto [a, b] = ends(p);
    if (compare(a, k0) < 0) k0 = a;
    if (compare(b, k1) > 0) k1 = b;
  }
  std::optional<std::pair<QValue, QValue>> host;
  for (const auto& p : u.pieces()) {
    const auto [a, b] = ends(p);
    if (compare(a, k0) <= 0 && compare(k1, b) <= 0) host = std::pair{a, b};
  }
  if (!host) throw PreconditionError("K is not contained in a single interval of U");
  const auto [u0, u1] = *host;

  const ModuleWitness tw = small_module_vectors(alpha, epsilon, 1)[0];
  QValue t = module_vector(alpha, tw)[0];
  ModuleWitness tile = tw;
  if (t.sign() < 0) {
    t = -t;
    tile = ModuleWitness{-tw.n, {-tw.m[0]}};
  }
  const QValue t_inv = t.inverse();
  const Integer j_lo = (k0 * t_inv).floor();
  const Integer j_hi = (k1 * t_inv).floor();
  auto at = [&](const Integer& j) { return t * Rational(j); };

  QValue lo = at(j_lo);
  QValue hi = at(j_hi + 1);
  if (compare(lo, u0) <= 0 || compare(hi, u1) >= 0)
    throw SearchExhausted("tiles meeting K reach the boundary of U; use a smaller epsilon");
  BrsConstruction out;
  out.tile = {tile};
  out.tiles_meeting_k = static_cast<std::size_t>(Integer(j_hi - j_lo + 1).get_si());
  QValue covered = hi - lo;
  if (compare(covered, gamma) > 0)
    throw SearchExhausted("tiles meeting K already exceed gamma; use a smaller epsilon");

  for (bool right : {true, false}) {
    while (compare(covered + t, gamma) <= 0) {
      const QValue next = right ? hi + t : lo - t;
      if (right ? compare(next, u1) >= 0 : compare(next, u0) <= 0) break;
      (right ? hi : lo) = next;
      covered = covered + t;
      ++out.free_tiles;
    }
  }
  const QValue residual = gamma - covered;
  if (!residual.is_zero()) {
    out.has_residual = true;
    if (compare(hi + residual, u1) < 0) {
      hi = hi + residual;
    } else if (compare(lo - residual, u0) > 0) {
      lo = lo - residual;
    } else {
      throw SearchExhausted("no room in U for the residual piece of length " + residual.to_string());
    }
  }
  // adjacent tiles and residual merge into one interval of length gamma
  const auto form = measure_form(gamma, alpha);
  out.region = RegionSet::interval(lo, hi);
  out.piece_edges = {{ModuleWitness{(*form)[1], {(*form)[0]}}}};
  (void)alg;
  return out;
}

BrsConstruction construct_nd(const RegionSet& k, const RegionSet& u, const QValue& gamma, const QVector& alpha,
                             double epsilon, int search_bound) {
  const std::size_t d = alpha.size();
  const AlgebraPtr& alg = alpha[0].algebra();
  BrsConstruction out;
  out.tile = small_module_vectors(alpha, epsilon, d);
  std::vector<QVector> cols;
  for (const auto& w : out.tile) cols.push_back(module_vector(alpha, w));
  const QMatrix v = QMatrix::from_columns(cols);
  QValue tile_vol = exact_det(v);
  if (tile_vol.sign() < 0) tile_vol = -tile_vol;
  const Eigen::MatrixXd vn = v.numeric();
  const Eigen::MatrixXd vinv = vn.inverse();

  auto tile_piece = [&](const std::vector<long>& j) {
    Piece p;
    std::vector<Integer> ji(j.begin(), j.end());
    QVector o(d, QValue(alg));
    for (std::size_t c = 0; c < d; ++c)
      for (std::size_t i = 0; i < d; ++i) o[i] += v(i, c) * Rational(ji[c]);
    p.offset = std::move(o);
    p.edges = v;
    return p;
  };
  // grid index box covering a numeric bounding box
  auto index_box = [&](const std::vector<double>& lo, const std::vector<double>& hi) {
    std::vector<long> jlo(d, LONG_MAX);
    std::vector<long> jhi(d, LONG_MIN);
    for (std::size_t mask = 0; mask < (std::size_t{1} << d); ++mask) {
      Eigen::VectorXd x(d);
      for (std::size_t i = 0; i < d; ++i) x(i) = (mask & (std::size_t{1} << i)) ? hi[i] : lo[i];
      const Eigen::VectorXd c = vinv * x;
      for (std::size_t i = 0; i < d; ++i) {
        jlo[i] = std::min(jlo[i], static_cast<long>(std::floor(c(i))) - 1);
        jhi[i] = std::max(jhi[i], static_cast<long>(std::ceil(c(i))) + 1);
      }
    }
    return std::pair{jlo, jhi};
  };
  auto for_each_index = [&](const std::vector<long>& jlo, const std::vector<long>& jhi, auto&& f) {
    std::vector<long> j = jlo;
    while (true) {
      f(j);
      std::size_t i = 0;
      while (i < d && ++j[i] > jhi[i]) {
        j[i] = jlo[i];
        ++i;
      }
      if (i == d) break;
    }
  };

  std::vector<Piece> chosen;
  std::vector<std::vector<long>> chosen_idx;
  const auto [klo, khi] = index_box(k.bbox_lo(), k.bbox_hi());
  for_each_index(klo, khi, [&](const std::vector<long>& j) {
    Piece p = tile_piece(j);
    const RegionSet one(d, {p});
    for (std::size_t q = 0; q < k.pieces().size(); ++q)
      if (closures_meet(one.numeric_piece(0), k.numeric_piece(q), d, true)) {
        chosen.push_back(std::move(p));
        chosen_idx.push_back(j);
        return;
      }
  });
  out.tiles_meeting_k = chosen.size();
  auto inside_u = [&](const RegionSet::NumericPiece& np) {
    for (std::size_t q = 0; q < u.pieces().size(); ++q)
      if (strictly_inside(np, u.numeric_piece(q), d)) return true;
    return false;
  };
  {
    const RegionSet tiles(d, chosen);
    for (std::size_t i = 0; i < chosen.size(); ++i)
      if (!inside_u(tiles.numeric_piece(i)))
        throw SearchExhausted("tiles meeting K leave U; use a smaller epsilon");
  }
  QValue covered = tile_vol * Rational(static_cast<long>(chosen.size()));
  QValue residual = gamma - covered;
  if (residual.sign() < 0) throw SearchExhausted("tiles meeting K already exceed gamma; use a smaller epsilon");

  std::vector<std::vector<ModuleWitness>> edges(chosen.size(), out.tile);
  const QValue q = residual * tile_vol.inverse();
  if (!residual.is_zero() && q.is_rational() && q.coeff(0).get_den() == 1) {
    // the remainder is a whole number of tiles: take free tiles of U
    long need = q.coeff(0).get_num().get_si();
    const auto [ulo, uhi] = index_box(u.bbox_lo(), u.bbox_hi());
    for_each_index(ulo, uhi, [&](const std::vector<long>& j) {
      if (need == 0) return;
      if (std::find(chosen_idx.begin(), chosen_idx.end(), j) != chosen_idx.end()) return;
      Piece p = tile_piece(j);
      const RegionSet one(d, {p});
      if (!inside_u(one.numeric_piece(0))) return;
      chosen.push_back(std::move(p));
      chosen_idx.push_back(j);
      edges.push_back(out.tile);
      ++out.free_tiles;
      --need;
    });
    if (need != 0) throw SearchExhausted("not enough free tiles inside U");
    residual = QValue(alg);
  }
  if (!residual.is_zero()) {
    const RegionSet tiles(d, chosen);
    const std::vector<double> ulo = u.bbox_lo();
    const std::vector<double> uhi = u.bbox_hi();
    constexpr long kSteps = 8;  // candidate offsets on a 1/8 grid
    auto place = [&](const BrsParallelepiped& b) {
      const Piece& base = b.region.pieces()[0];
      std::vector<long> lo(d);
      std::vector<long> hi(d);
      for (std::size_t i = 0; i < d; ++i) {
        lo[i] = static_cast<long>(std::floor(ulo[i] * kSteps));
        hi[i] = static_cast<long>(std::ceil(uhi[i] * kSteps));
      }
      std::vector<long> g = lo;
      while (true) {
        Piece p = base;
        for (std::size_t i = 0; i < d; ++i) p.offset[i] = QValue(alg, Rational(g[i], kSteps));
        const RegionSet one(d, {p});
        const auto& np = one.numeric_piece(0);
        bool ok = inside_u(np);
        for (std::size_t t = 0; ok && t < chosen.size(); ++t)
          if (closures_meet(np, tiles.numeric_piece(t), d, false)) ok = false;
        if (ok) {
          chosen.push_back(std::move(p));
          edges.push_back(b.edges);
          return true;
        }
        std::size_t i = 0;
        while (i < d && ++g[i] > hi[i]) {
          g[i] = lo[i];
          ++i;
        }
        if (i == d) return false;
      }
    };
    const bool placed = for_each_measure_realization(alpha, residual, search_bound, place);
    if (!placed)
      throw SearchExhausted("no residual parallelepiped of volume " + residual.to_string() +
                            " fits in U next to the tiles (search bound " + std::to_string(search_bound) + ")");
    out.has_residual = true;
  }
  out.region = RegionSet(d, std::move(chosen));
  out.piece_edges = std::move(edges);
  if (!(out.region.volume() == gamma)) throw Error("construct_brs_between: volume bookkeeping failed");
  return out;
}

}  // namespace

BrsConstruction construct_brs_between(const RegionSet& k, const RegionSet& u, const QValue& gamma,
                                      const QVector& alpha, double epsilon, int search_bound) {
  const std::size_t d = alpha.size();
  if (k.empty() || u.empty()) throw PreconditionError("K and U must be nonempty");
  if (k.dim() != d || u.dim() != d) throw PreconditionError("K, U and alpha must share the dimension d");
  if (!(epsilon > 0)) throw PreconditionError("epsilon must be positive");
  if (compare(k.volume(), gamma) >= 0 || compare(gamma, u.volume()) >= 0)
    throw PreconditionError("need mes K < gamma < mes U");
  if (!measure_form(gamma, alpha))
    throw PreconditionError("gamma = " + gamma.to_string() + " is not of the form n0 + n1 alpha_1 + ... + nd alpha_d");
  // K in U: every corner of every K piece lies in the closure of some U piece.
  for (std::size_t p = 0; p < k.pieces().size(); ++p) {
    const auto corners = piece_corners(k.numeric_piece(p), d);
    for (const auto& c : corners.pts) {
      bool in = false;
      for (std::size_t q = 0; q < u.pieces().size() && !in; ++q) {
        const auto& un = u.numeric_piece(q);
        bool all = true;
        for (std::size_t r = 0; r < d && all; ++r) {
          double x = 0;
          for (std::size_t j = 0; j < d; ++j) x += un.inverse[r * d + j] * (c[j] - un.offset[j]);
          all = x >= -1e-9 && x <= 1 + 1e-9;
        }
        in = all;
      }
      if (!in) throw PreconditionError("K is not contained in U");
    }
  }
  return d == 1 ? construct_1d(k, u, gamma, alpha, epsilon) : construct_nd(k, u, gamma, alpha, epsilon, search_bound);
}

}  // namespace quasilab
