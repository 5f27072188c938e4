#include "quasilab/modelset.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace quasilab {

std::string to_string(PointKind k) {
  switch (k) {
    case PointKind::generic: return "generic";
    case PointKind::model_set: return "model_set";
    case PointKind::dual_model_set: return "dual_model_set";
    case PointKind::sequence: return "sequence";
    case PointKind::periodic: return "periodic";
    case PointKind::periodic_dual: return "periodic_dual";
  }
  return "generic";
}

std::int64_t PointSet::block(std::size_t i) const {
  if (!block_tag) throw PreconditionError("point set carries no block provenance");
  return tags[i * tag_width + *block_tag];
}

void PointSet::push(std::span<const double> x, std::span<const std::int64_t> t, std::optional<QVector> q) {
  if (x.size() != dim || t.size() != tag_width) throw PreconditionError("point or tag width mismatch");
  coords.insert(coords.end(), x.begin(), x.end());
  tags.insert(tags.end(), t.begin(), t.end());
  if (q) {
    if (exact.size() + 1 != size()) throw PreconditionError("exact coordinates must be given for every point");
    exact.push_back(std::move(*q));
  } else if (!exact.empty()) {
    throw PreconditionError("exact coordinates must be given for every point");
  }
}

void PointSet::sort_by_tags() {
  std::vector<std::size_t> idx(size());
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    const auto ta = tag(a);
    const auto tb = tag(b);
    return std::lexicographical_compare(ta.begin(), ta.end(), tb.begin(), tb.end());
  });
  PointSet out = *this;
  out.coords.clear();
  out.tags.clear();
  out.exact.clear();
  for (std::size_t i : idx)
    out.push(point(i), tag(i), exact.empty() ? std::nullopt : std::optional<QVector>(exact[i]));
  *this = std::move(out);
}

PointSet PointSet::truncate(double r) const {
  PointSet out = *this;
  out.coords.clear();
  out.tags.clear();
  out.exact.clear();
  for (std::size_t i = 0; i < size(); ++i) {
    const auto x = point(i);
    if (std::all_of(x.begin(), x.end(), [r](double v) { return std::abs(v) <= r; }))
      out.push(x, tag(i), exact.empty() ? std::nullopt : std::optional<QVector>(exact[i]));
  }
  return out;
}

namespace {

void check_box(const IntBox& box, std::size_t d) {
  if (box.dim() != d || box.hi.size() != d) throw PreconditionError("search box has the wrong dimension");
  for (std::size_t i = 0; i < d; ++i)
    if (box.lo[i] > box.hi[i]) throw PreconditionError("empty search box");
}

template <class F>
void for_each_in_box(const IntBox& box, F&& f) {
  const std::size_t d = box.dim();
  std::vector<std::int64_t> m = box.lo;
  while (true) {
    f(std::span<const std::int64_t>(m));
    std::size_t i = d;
    // last coordinate fastest so the visit order is lexicographic
    while (i > 0 && ++m[i - 1] > box.hi[i - 1]) {
      m[i - 1] = box.lo[i - 1];
      --i;
    }
    if (i == 0) break;
  }
}

std::string box_text(const IntBox& box) {
  std::string s;
  for (std::size_t i = 0; i < box.dim(); ++i) {
    if (i) s += " x ";
    s += "[" + std::to_string(box.lo[i]) + ", " + std::to_string(box.hi[i]) + "]";
  }
  return s;
}

}  // namespace

PointSet cut_and_project(const Lattice& gamma, const RegionSet& window, const IntBox& m_box) {
  const std::size_t d = gamma.dim_d();
  if (window.dim() != 1 || window.empty()) throw PreconditionError("window must be a nonempty union of intervals");
  check_box(m_box, d);
  const QMatrix& b = gamma.basis();
  const AlgebraPtr& alg = gamma.algebra();
  const QValue& g = b(d, d);
  if (g.is_zero()) throw PreconditionError("cut_and_project: the n generator has zero internal component");
  const long double g_ld = g.eval_ld();
  const long double wlo = window.bbox_lo()[0];
  const long double whi = window.bbox_hi()[0];

  PointSet out;
  out.dim = d;
  out.tag_width = d + 1;
  out.kind = PointKind::model_set;
  out.coverage = "m in " + box_text(m_box);
  std::vector<double> x(d);
  std::vector<std::int64_t> t(d + 1);
  for_each_in_box(m_box, [&](std::span<const std::int64_t> m) {
    QValue c(alg);
    for (std::size_t i = 0; i < d; ++i) c += b(d, i) * Rational(static_cast<long>(m[i]));
    const long double c_ld = c.eval_ld();
    long double n1 = (wlo - c_ld) / g_ld;
    long double n2 = (whi - c_ld) / g_ld;
    if (n1 > n2) std::swap(n1, n2);
    for (auto n = static_cast<std::int64_t>(std::floor(n1)) - 1; n <= static_cast<std::int64_t>(std::ceil(n2)) + 1; ++n) {
      const QValue p2 = c + g * Rational(static_cast<long>(n));
      if (!window.contains(QVector{p2})) continue;
      std::vector<Integer> coords;
      for (auto v : m) coords.emplace_back(static_cast<long>(v));
      coords.emplace_back(static_cast<long>(n));
      QVector full = gamma.point(coords);
      full.pop_back();
      for (std::size_t i = 0; i < d; ++i) {
        x[i] = full[i].eval();
        t[i] = m[i];
      }
      t[d] = n;
      out.push(x, t, std::move(full));
    }
  });
  return out;
}

PointSet dual_model_points(const QVector& alpha, const QVector& beta, const RegionSet& s, std::int64_t n_lo,
                           std::int64_t n_hi, bool keep_exact) {
  const std::size_t d = alpha.size();
  if (d == 0 || beta.size() != d || s.dim() != d) throw PreconditionError("alpha, beta and S must share dimension d");
  if (s.empty()) throw PreconditionError("S is empty");
  if (n_lo > n_hi) throw PreconditionError("empty n range");
  const AlgebraPtr& alg = alpha[0].algebra();
  const std::vector<double> lo = s.bbox_lo();
  const std::vector<double> hi = s.bbox_hi();
  std::vector<long double> a;
  std::vector<long double> bt;
  for (std::size_t i = 0; i < d; ++i) {
    a.push_back(alpha[i].eval_ld());
    bt.push_back(beta[i].eval_ld());
  }

  PointSet out;
  out.dim = 1;
  out.tag_width = d + 1;
  out.kind = PointKind::dual_model_set;
  out.block_tag = d;
  out.coverage = "n in [" + std::to_string(n_lo) + ", " + std::to_string(n_hi) + "]";
  std::vector<long double> y(d);
  std::vector<std::int64_t> t(d + 1);
  for (std::int64_t n = n_lo; n <= n_hi; ++n) {
    IntBox mb{std::vector<std::int64_t>(d), std::vector<std::int64_t>(d)};
    for (std::size_t i = 0; i < d; ++i) {
      const long double base = static_cast<long double>(n) * a[i];
      mb.lo[i] = static_cast<std::int64_t>(std::ceil(lo[i] - base)) - 1;
      mb.hi[i] = static_cast<std::int64_t>(std::floor(hi[i] - base)) + 1;
    }
    for_each_in_box(mb, [&](std::span<const std::int64_t> m) {
      for (std::size_t i = 0; i < d; ++i) y[i] = static_cast<long double>(n) * a[i] + static_cast<long double>(m[i]);
      auto exact_point = [&] {
        QVector v;
        for (std::size_t i = 0; i < d; ++i)
          v.push_back(alpha[i] * Rational(static_cast<long>(n)) + QValue(alg, Rational(static_cast<long>(m[i]))));
        return v;
      };
      if (!s.contains(y, exact_point)) return;
      long double lam = static_cast<long double>(n);
      for (std::size_t i = 0; i < d; ++i) lam += y[i] * bt[i];
      for (std::size_t i = 0; i < d; ++i) t[i] = m[i];
      t[d] = n;
      const double xv = static_cast<double>(lam);
      if (keep_exact) {
        const QVector v = exact_point();
        QValue l = QValue(alg, Rational(static_cast<long>(n))) + dot(v, beta);
        out.push(std::span<const double>(&xv, 1), t, QVector{std::move(l)});
      } else {
        out.push(std::span<const double>(&xv, 1), t);
      }
    });
  }
  return out;
}

PointSet sequence_points(const QVector& alpha, const QVector& beta, const IntBox& m_box) {
  SpecialFormData{alpha, beta}.validate();
  const std::size_t d = alpha.size();
  check_box(m_box, d);
  const AlgebraPtr& alg = alpha[0].algebra();
  PointSet out;
  out.dim = d;
  out.tag_width = d + 1;
  out.kind = PointKind::sequence;
  out.coverage = "m in " + box_text(m_box);
  std::vector<double> x(d);
  std::vector<std::int64_t> t(d + 1);
  for_each_in_box(m_box, [&](std::span<const std::int64_t> m) {
    QValue am(alg);
    for (std::size_t i = 0; i < d; ++i) am += alpha[i] * Rational(static_cast<long>(m[i]));
    const Integer fl = am.floor();
    const QValue fr = am - QValue(alg, Rational(fl));
    QVector p;
    for (std::size_t i = 0; i < d; ++i) {
      p.push_back(QValue(alg, Rational(static_cast<long>(m[i]))) + fr * beta[i]);
      x[i] = p.back().eval();
      t[i] = m[i];
    }
    t[d] = fl.get_si();
    out.push(x, t, std::move(p));
  });
  return out;
}

PointSet periodic_points(const QVector& alpha, const RegionSet& interval, const IntBox& n_box) {
  const std::size_t d = alpha.size();
  if (interval.dim() != 1 || interval.empty()) throw PreconditionError("periodic window must be a union of intervals");
  check_box(n_box, d);
  const QValue len = interval.volume();
  if (len.sign() <= 0 || compare(len, QValue(len.algebra(), Rational(1))) > 0)
    throw PreconditionError("degenerate circle interval: length must lie in (0, 1]");
  const AlgebraPtr& alg = alpha[0].algebra();
  std::vector<long double> a;
  for (const auto& v : alpha) a.push_back(v.eval_ld());
  PointSet out;
  out.dim = d;
  out.tag_width = d;
  out.kind = PointKind::periodic;
  out.coverage = "n in " + box_text(n_box);
  std::vector<double> x(d);
  for_each_in_box(n_box, [&](std::span<const std::int64_t> n) {
    long double s = 0;
    for (std::size_t i = 0; i < d; ++i) s += static_cast<long double>(n[i]) * a[i];
    const long double sv[1] = {s};
    const int mult = interval.multiplicity(sv, [&] {
      QValue e(alg);
      for (std::size_t i = 0; i < d; ++i) e += alpha[i] * Rational(static_cast<long>(n[i]));
      return QVector{e};
    });
    if (mult > 1) throw PreconditionError("circle interval covers some point more than once");
    if (mult == 0) return;
    for (std::size_t i = 0; i < d; ++i) x[i] = static_cast<double>(n[i]);
    out.push(x, n);
  });
  return out;
}

PointSet periodic_dual(const QVector& alpha, const RegionSet& s, std::int64_t m_lo, std::int64_t m_hi) {
  const std::size_t d = alpha.size();
  if (s.dim() != d || s.empty()) throw PreconditionError("S must be a nonempty region of dimension d");
  if (m_lo > m_hi) throw PreconditionError("empty m range");
  std::vector<long double> a;
  for (const auto& v : alpha) a.push_back(v.eval_ld());
  PointSet out;
  out.dim = 1;
  out.tag_width = 1;
  out.kind = PointKind::periodic_dual;
  out.coverage = "m in [" + std::to_string(m_lo) + ", " + std::to_string(m_hi) + "]";
  std::vector<long double> y(d);
  for (std::int64_t m = m_lo; m <= m_hi; ++m) {
    for (std::size_t i = 0; i < d; ++i) y[i] = -static_cast<long double>(m) * a[i];
    const int mult = s.multiplicity(y, [&] {
      QVector v;
      for (std::size_t i = 0; i < d; ++i) v.push_back(alpha[i] * Rational(-static_cast<long>(m)));
      return v;
    });
    if (mult > 1)
      throw PreconditionError("S is not a subset of the torus: multiplicity " + std::to_string(mult) +
                              " at m = " + std::to_string(m));
    if (mult == 0) continue;
    const double xv = static_cast<double>(m);
    out.push(std::span<const double>(&xv, 1), std::span<const std::int64_t>(&m, 1));
  }
  return out;
}

std::vector<DensityRow> density_estimate(const PointSet& p, std::span<const double> radii) {
  if (p.size() == 0) throw PreconditionError("density of an empty point set");
  for (std::size_t i = 1; i < radii.size(); ++i)
    if (!(radii[i] > radii[i - 1])) throw PreconditionError("radii must be increasing");
  std::vector<DensityRow> rows;
  const std::size_t d = p.dim;
  if (d == 1) {
    std::vector<double> xs(p.coords);
    std::sort(xs.begin(), xs.end());
    const double lo = xs.front();
    const double hi = xs.back();
    for (double r : radii) {
      const double w = 2 * r;
      if (w > hi - lo) throw PreconditionError("radius exceeds the generated range");
      std::size_t best = 0;
      std::size_t worst = xs.size();
      // closed windows [x_i, x_i + w] give the sup; open ones (x_i, x_i + w) the inf
      std::size_t j_closed = 0;
      std::size_t j_open = 0;
      for (std::size_t i = 0; i < xs.size() && xs[i] + w <= hi; ++i) {
        if (j_closed < i) j_closed = i;
        while (j_closed < xs.size() && xs[j_closed] <= xs[i] + w) ++j_closed;
        if (j_open < i + 1) j_open = i + 1;
        while (j_open < xs.size() && xs[j_open] < xs[i] + w) ++j_open;
        best = std::max(best, j_closed - i);
        std::size_t k = i + 1;
        while (k < xs.size() && xs[k] == xs[i]) ++k;
        worst = std::min(worst, j_open >= k ? j_open - k : 0);
      }
      rows.push_back({r, static_cast<double>(worst) / w, static_cast<double>(best) / w});
    }
    return rows;
  }
  std::vector<double> lo(d, HUGE_VAL);
  std::vector<double> hi(d, -HUGE_VAL);
  for (std::size_t i = 0; i < p.size(); ++i)
    for (std::size_t k = 0; k < d; ++k) {
      lo[k] = std::min(lo[k], p.coords[i * d + k]);
      hi[k] = std::max(hi[k], p.coords[i * d + k]);
    }
  for (double r : radii) {
    const double step = r / 4;
    std::vector<double> c(d);
    std::vector<long> idx(d, 0);
    std::vector<long> cnt(d);
    for (std::size_t k = 0; k < d; ++k) {
      if (hi[k] - lo[k] < 2 * r) throw PreconditionError("radius exceeds the generated range");
      cnt[k] = static_cast<long>(std::floor((hi[k] - lo[k] - 2 * r) / step));
    }
    std::size_t best = 0;
    std::size_t worst = p.size();
    while (true) {
      for (std::size_t k = 0; k < d; ++k) c[k] = lo[k] + r + static_cast<double>(idx[k]) * step;
      std::size_t count = 0;
      for (std::size_t i = 0; i < p.size(); ++i) {
        bool in = true;
        for (std::size_t k = 0; k < d && in; ++k) in = std::abs(p.coords[i * d + k] - c[k]) <= r;
        count += in;
      }
      best = std::max(best, count);
      worst = std::min(worst, count);
      std::size_t k = 0;
      while (k < d && ++idx[k] > cnt[k]) {
        idx[k] = 0;
        ++k;
      }
      if (k == d) break;
    }
    const double vol = std::pow(2 * r, static_cast<double>(d));
    rows.push_back({r, static_cast<double>(worst) / vol, static_cast<double>(best) / vol});
  }
  return rows;
}

double separation(const PointSet& p) {
  if (p.size() < 2) return HUGE_VAL;
  const std::size_t d = p.dim;
  std::vector<std::size_t> idx(p.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return p.coords[a * d] < p.coords[b * d]; });
  double best = HUGE_VAL;
  for (std::size_t a = 0; a < idx.size(); ++a)
    for (std::size_t b = a + 1; b < idx.size(); ++b) {
      const double dx = p.coords[idx[b] * d] - p.coords[idx[a] * d];
      if (dx >= best) break;
      double s = 0;
      for (std::size_t k = 0; k < d; ++k) {
        const double t = p.coords[idx[b] * d + k] - p.coords[idx[a] * d + k];
        s += t * t;
      }
      best = std::min(best, std::sqrt(s));
    }
  return best;
}

PointSet transform_pointset(const PointSet& p, const QMatrix& a) {
  if (!a.square() || a.rows() != p.dim) throw PreconditionError("transform dimension mismatch");
  if (exact_det(a).is_zero()) throw PreconditionError("transform matrix is singular");
  const Eigen::MatrixXd an = a.numeric();
  PointSet out = p;
  out.coords.clear();
  out.tags.clear();
  out.exact.clear();
  std::vector<double> y(p.dim);
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (!p.exact.empty()) {
      QVector q = a * p.exact[i];
      for (std::size_t k = 0; k < p.dim; ++k) y[k] = q[k].eval();
      out.push(y, p.tag(i), std::move(q));
    } else {
      const auto x = p.point(i);
      for (std::size_t k = 0; k < p.dim; ++k) {
        y[k] = 0;
        for (std::size_t j = 0; j < p.dim; ++j) y[k] += an(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(j)) * x[j];
      }
      out.push(y, p.tag(i));
    }
  }
  return out;
}

double provenance_error(const PointSet& p, const Lattice& gamma) {
  if (p.kind != PointKind::model_set || p.tag_width != gamma.ambient_dim())
    throw PreconditionError("provenance check needs a model set generated from this lattice");
  double worst = 0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    std::vector<Integer> c;
    for (auto v : p.tag(i)) c.emplace_back(static_cast<long>(v));
    const QVector q = gamma.point(c);
    for (std::size_t k = 0; k < p.dim; ++k) {
      if (!p.exact.empty() && !(p.exact[i][k] == q[k])) return HUGE_VAL;
      worst = std::max(worst, std::abs(q[k].eval() - p.point(i)[k]));
    }
  }
  return worst;
}

}  // namespace quasilab
