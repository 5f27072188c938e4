#include "quasilab/riesz.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>

#include "quasilab/dynamics.hpp"

namespace quasilab {

std::int64_t Enumeration::s_at(std::int64_t n) const {
  const auto i = n - n_first;
  if (i < 0 || i >= static_cast<std::int64_t>(s.size())) throw PreconditionError("block index outside the enumeration");
  return s[static_cast<std::size_t>(i)];
}

std::int64_t Enumeration::max_block() const {
  std::int64_t m = 0;
  for (std::size_t i = 1; i < s.size(); ++i) m = std::max(m, s[i] - s[i - 1]);
  return m;
}

Enumeration enumerate_blocks(const PointSet& p, std::int64_t n_lo, std::int64_t n_hi) {
  if (!p.block_tag) throw PreconditionError("enumeration needs block provenance");
  if (p.dim != 1) throw PreconditionError("enumeration needs a one-dimensional point set");
  if (n_lo > 0 || n_hi < 0) throw PreconditionError("block range must contain 0");
  std::map<std::int64_t, std::vector<double>> blocks;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const auto n = p.block(i);
    if (n < n_lo || n > n_hi) throw PreconditionError("point outside the declared block range");
    blocks[n].push_back(p.coords[i]);
  }
  Enumeration e;
  e.n_first = n_lo;
  e.s.assign(static_cast<std::size_t>(n_hi - n_lo + 2), 0);
  // sizes, then prefix sums anchored at s_0 = 0
  std::vector<std::int64_t> size(static_cast<std::size_t>(n_hi - n_lo + 1), 0);
  for (auto& [n, v] : blocks) {
    std::sort(v.begin(), v.end());
    size[static_cast<std::size_t>(n - n_lo)] = static_cast<std::int64_t>(v.size());
  }
  const auto zero = static_cast<std::size_t>(-n_lo);
  for (std::size_t i = zero; i + 1 < e.s.size(); ++i) e.s[i + 1] = e.s[i] + size[i];
  for (std::size_t i = zero; i > 0; --i) e.s[i - 1] = e.s[i] - size[i - 1];
  e.j_first = e.s.front();
  for (const auto& [n, v] : blocks)
    for (std::size_t r = 0; r < v.size(); ++r) {
      e.lambda.push_back(v[r]);
      e.block.push_back(n);
      e.rank.push_back(static_cast<std::int64_t>(r));
    }
  return e;
}

Enumeration enumerate_blocks(const PointSet& p) {
  if (!p.block_tag) throw PreconditionError("enumeration needs block provenance");
  std::int64_t lo = 0;
  std::int64_t hi = 0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    lo = std::min(lo, p.block(i));
    hi = std::max(hi, p.block(i));
  }
  return enumerate_blocks(p, lo, hi);
}

double DeltaSequence::lambda(std::int64_t j) const {
  return static_cast<double>(at(j) + static_cast<long double>(j) / mes_ld);
}

DeltaSequence delta_sequence(const Enumeration& e, const QValue& mes) {
  if (mes.sign() <= 0) throw PreconditionError("mes S must be positive");
  DeltaSequence d;
  d.j_first = e.j_first;
  d.mes = mes;
  d.mes_ld = mes.eval_ld();
  d.delta.reserve(e.size());
  for (std::size_t i = 0; i < e.size(); ++i) {
    const auto j = e.j_first + static_cast<std::int64_t>(i);
    d.delta.push_back(static_cast<double>(e.lambda[i] - static_cast<long double>(j) / d.mes_ld));
  }
  return d;
}

MeanRow window_deviation(const DeltaSequence& d, double c, std::size_t window, std::int64_t k_lo, std::int64_t k_hi) {
  const auto n = static_cast<std::int64_t>(window);
  if (window == 0 || k_lo > k_hi) throw PreconditionError("empty window family");
  if (k_lo + 1 < d.j_first || k_hi + n > d.j_last()) throw PreconditionError("windows outside the enumeration");
  // prefix sums over j in [k_lo+1, k_hi+N]
  std::vector<long double> pre{0};
  for (std::int64_t j = k_lo + 1; j <= k_hi + n; ++j) pre.push_back(pre.back() + d.at(j));
  MeanRow row;
  row.window = window;
  row.sup_deviation = -1;
  for (std::int64_t k = k_lo; k <= k_hi; ++k) {
    const auto a = static_cast<std::size_t>(k - k_lo);
    const long double mean = (pre[a + window] - pre[a]) / static_cast<long double>(n);
    const double dev = static_cast<double>(std::abs(mean - c));
    if (dev > row.sup_deviation) {
      row.sup_deviation = dev;
      row.argmax_k = k;
    }
  }
  return row;
}

DeltaMeans delta_and_means(const Enumeration& e, const QValue& mes, std::span<const std::size_t> windows,
                           std::int64_t k_lo, std::int64_t k_hi) {
  DeltaMeans m;
  m.delta = delta_sequence(e, mes);
  if (m.delta.delta.empty()) throw PreconditionError("empty enumeration");
  long double sum = 0;
  for (double v : m.delta.delta) sum += v;
  m.c_hat = static_cast<double>(sum / static_cast<long double>(m.delta.delta.size()));
  m.k_lo = k_lo;
  m.k_hi = k_hi;
  for (std::size_t n : windows) m.rows.push_back(window_deviation(m.delta, m.c_hat, n, k_lo, k_hi));
  return m;
}

AvdoninVerdict avdonin_check(const DeltaMeans& m, const QValue& interval_length, std::size_t n_max) {
  if (interval_length.sign() <= 0) throw PreconditionError("interval length must be positive");
  const auto& d = m.delta;
  std::vector<double> pts;
  pts.reserve(d.delta.size());
  for (std::int64_t j = d.j_first; j <= d.j_last(); ++j) pts.push_back(d.lambda(j));
  std::sort(pts.begin(), pts.end());
  AvdoninVerdict v;
  v.min_gap = std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i < pts.size(); ++i) v.min_gap = std::min(v.min_gap, pts[i] - pts[i - 1]);
  if (!(v.min_gap > 1e-12)) throw PreconditionError("sequence is not separated");
  for (double x : d.delta)
    if (!std::isfinite(x)) throw PreconditionError("displacements must be finite");

  v.threshold = static_cast<double>(1.0L / (4 * interval_length.eval_ld()));
  v.n_max = n_max;
  v.c_hat = m.c_hat;
  v.k_lo = m.k_lo;
  v.k_hi = m.k_hi;
  v.sup_deviation = std::numeric_limits<double>::infinity();
  for (std::size_t n = 1; n <= n_max; ++n) {
    const auto row = window_deviation(d, m.c_hat, n, m.k_lo, m.k_hi);
    if (row.sup_deviation < v.threshold) {
      v.satisfied = true;
      v.window = n;
      v.sup_deviation = row.sup_deviation;
      break;
    }
    v.sup_deviation = std::min(v.sup_deviation, row.sup_deviation);
  }
  v.margin = v.threshold - v.sup_deviation;
  return v;
}

Eigen::MatrixXcd gram_matrix(const PointSet& p, const RegionSet& s) {
  if (p.dim != s.dim()) throw PreconditionError("points and S must share dimension");
  const auto n = static_cast<Eigen::Index>(p.size());
  const double vol = s.volume().eval();
  Eigen::MatrixXcd g(n, n);
  std::vector<double> t(p.dim);
  for (Eigen::Index j = 0; j < n; ++j) {
    g(j, j) = vol;
    const auto pj = p.point(static_cast<std::size_t>(j));
    for (Eigen::Index k = j + 1; k < n; ++k) {
      const auto pk = p.point(static_cast<std::size_t>(k));
      for (std::size_t i = 0; i < p.dim; ++i) t[i] = pk[i] - pj[i];
      g(j, k) = ft_indicator(s, t);
      g(k, j) = std::conj(g(j, k));
    }
  }
  return g;
}

ExtremeEigs extreme_eigs(const Eigen::MatrixXcd& g) {
  if (g.rows() != g.cols()) throw PreconditionError("matrix must be square");
  if (g.rows() == 0) throw PreconditionError("matrix is empty");
  const double scale = std::max(1.0, g.cwiseAbs().maxCoeff());
  if ((g - g.adjoint()).cwiseAbs().maxCoeff() > 1e-12 * scale) throw PreconditionError("matrix is not Hermitian");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(g, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw Error("eigensolver did not converge");
  return {es.eigenvalues()(0), es.eigenvalues()(g.rows() - 1)};
}

std::vector<BoundRow> riesz_bound_trace(const PointSet& family, std::span<const double> radii, const RegionSet& s) {
  std::vector<BoundRow> out;
  for (std::size_t i = 0; i < radii.size(); ++i) {
    if (i > 0 && !(radii[i] > radii[i - 1])) throw PreconditionError("radii must be increasing");
    const auto part = family.truncate(radii[i]);
    BoundRow row;
    row.radius = radii[i];
    row.size = part.size();
    if (row.size > 0) {
      const auto e = extreme_eigs(gram_matrix(part, s));
      row.lambda_min = e.min;
      row.lambda_max = e.max;
    }
    if (!out.empty() && out.back().size > 0) {
      // interlacing for nested principal submatrices
      const double tol = 1e-8 * std::max(1.0, row.lambda_max);
      if (row.lambda_min > out.back().lambda_min + tol || row.lambda_max < out.back().lambda_max - tol)
        throw Error("nested sections violate eigenvalue interlacing");
    }
    out.push_back(row);
  }
  return out;
}

namespace {

double max_abs_coord(const RegionSet& r) {
  double m = 0;
  for (double v : r.bbox_lo()) m = std::max(m, std::abs(v));
  for (double v : r.bbox_hi()) m = std::max(m, std::abs(v));
  return m;
}

}  // namespace

DualityReport duality_experiment(const QVector& alpha, const QVector& beta, const RegionSet& interval,
                                 const RegionSet& s, const DualityOptions& opts) {
  if (interval.dim() != 1) throw PreconditionError("I must be one-dimensional");
  if (s.dim() != alpha.size()) throw PreconditionError("S must have dimension d");
  if (opts.radii.empty()) throw PreconditionError("no radii");
  const auto lat = make_special_lattice(alpha, beta);
  DualityReport rep;
  const QValue mes_s = s.volume();
  const QValue mes_i = interval.volume();
  rep.measures_match = mes_s == mes_i;
  if (!rep.measures_match)
    rep.warning = "mes S differs from |I|; the densities cannot match and a Riesz basis is impossible";

  const double r_max = opts.radii.back();
  double beta_max = 0;
  double beta_l1 = 0;
  for (const auto& b : beta) {
    beta_max = std::max(beta_max, std::abs(b.eval()));
    beta_l1 += std::abs(b.eval());
  }
  const auto pad = static_cast<std::int64_t>(std::ceil(r_max + beta_max * max_abs_coord(interval))) + 1;
  const auto primal = cut_and_project(lat.gamma, interval, IntBox::cube(alpha.size(), pad));
  rep.primal_points = primal.truncate(r_max).size();
  rep.primal = riesz_bound_trace(primal, opts.radii, s);

  const auto n_pad = static_cast<std::int64_t>(std::ceil(r_max + beta_l1 * max_abs_coord(s))) + 1;
  const auto dual = dual_model_points(alpha, beta, s, -n_pad, n_pad, false);
  rep.dual_points = dual.truncate(r_max).size();
  rep.dual = riesz_bound_trace(dual, opts.radii, interval);

  const auto e = enumerate_blocks(dual, -n_pad, n_pad);
  const auto n_win = static_cast<std::int64_t>(opts.avdonin_windows);
  const std::int64_t k_lo = e.j_first - 1;
  const std::int64_t k_hi = e.j_last() - n_win;
  if (k_hi < k_lo) throw PreconditionError("dual range too short for the Avdonin windows");
  const std::size_t w1 = 1;
  const auto means = delta_and_means(e, mes_s, std::span<const std::size_t>(&w1, 1), k_lo, k_hi);
  rep.avdonin = avdonin_check(means, mes_i, opts.avdonin_windows);
  if (opts.disc_n > 0) rep.dual_disc_max = discrepancy_trace(s, alpha, {}, opts.disc_n, false).max_abs;
  return rep;
}

}  // namespace quasilab
