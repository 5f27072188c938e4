#include "quasilab/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <map>

namespace quasilab {

Orbit::Orbit(const RegionSet& s, QVector alpha, QVector x0) : s_(&s), alpha_(std::move(alpha)), x0_(std::move(x0)) {
  if (alpha_.size() != s.dim()) throw PreconditionError("alpha and S must share dimension d");
  if (x0_.empty()) x0_ = QVector(alpha_.size(), QValue(alpha_[0].algebra()));
  if (x0_.size() != alpha_.size()) throw PreconditionError("x0 must have dimension d");
  for (std::size_t i = 0; i < alpha_.size(); ++i) {
    alpha_ld_.push_back(alpha_[i].eval_ld());
    x0_ld_.push_back(x0_[i].eval_ld());
  }
}

int Orbit::chi(std::int64_t k) const {
  const std::size_t d = alpha_.size();
  long double y[8];
  if (d > 8) throw PreconditionError("orbit dimension must be <= 8");
  for (std::size_t i = 0; i < d; ++i) y[i] = x0_ld_[i] + static_cast<long double>(k) * alpha_ld_[i];
  return s_->multiplicity(std::span<const long double>(y, d), [&] {
    QVector v;
    for (std::size_t i = 0; i < d; ++i) v.push_back(x0_[i] + alpha_[i] * Rational(static_cast<long>(k)));
    return v;
  });
}

DiscrepancyTrace discrepancy_trace(const RegionSet& s, const QVector& alpha, const QVector& x0, std::int64_t n_max,
                                   bool two_sided) {
  if (n_max < 0) throw PreconditionError("n_max must be >= 0");
  const Orbit orbit(s, alpha, x0);
  const long double mes = s.volume().eval_ld();
  DiscrepancyTrace t;
  t.two_sided = two_sided;
  const std::int64_t lo = two_sided ? -n_max : 0;
  t.n.reserve(static_cast<std::size_t>(n_max - lo + 1));
  t.values.reserve(t.n.capacity());
  // negative side first, built downward from 0
  std::vector<double> neg;
  if (two_sided) {
    std::int64_t hits = 0;
    neg.resize(static_cast<std::size_t>(n_max));
    for (std::int64_t n = -1; n >= -n_max; --n) {
      hits += orbit.chi(n);
      neg[static_cast<std::size_t>(-n - 1)] = static_cast<double>(-static_cast<long double>(hits) - n * mes);
    }
    for (std::int64_t n = -n_max; n <= -1; ++n) {
      t.n.push_back(n);
      t.values.push_back(neg[static_cast<std::size_t>(-n - 1)]);
    }
  }
  std::int64_t hits = 0;
  for (std::int64_t n = 0; n <= n_max; ++n) {
    t.n.push_back(n);
    t.values.push_back(static_cast<double>(static_cast<long double>(hits) - n * mes));
    if (n < n_max) hits += orbit.chi(n);
  }
  for (std::size_t i = 0; i < t.values.size(); ++i)
    if (std::abs(t.values[i]) > t.max_abs) {
      t.max_abs = std::abs(t.values[i]);
      t.argmax = t.n[i];
    }
  return t;
}

BrsStatistic brs_empirical(const RegionSet& s, const QVector& alpha, std::int64_t n_max, std::int64_t j_max) {
  if (n_max <= 0 || j_max < 0) throw PreconditionError("N must be positive and J non-negative");
  const Orbit orbit(s, alpha, {});
  const long double mes = s.volume().eval_ld();
  // P(t) = sum_{k=1}^t (chi(k alpha) - mes), P(0) = 0, t in [-J, J+N]
  const std::int64_t t_lo = -j_max;
  const std::int64_t t_hi = j_max + n_max;
  std::vector<std::int64_t> hits(static_cast<std::size_t>(t_hi - t_lo + 1));
  auto at = [&](std::int64_t t) -> std::int64_t& { return hits[static_cast<std::size_t>(t - t_lo)]; };
  at(0) = 0;
  for (std::int64_t t = 1; t <= t_hi; ++t) at(t) = at(t - 1) + orbit.chi(t);
  for (std::int64_t t = 0; t > t_lo; --t) at(t - 1) = at(t) - orbit.chi(t);
  auto p = [&](std::int64_t t) { return static_cast<long double>(at(t)) - static_cast<long double>(t) * mes; };

  BrsStatistic st;
  st.n_max = n_max;
  st.j_max = j_max;
  long double best = -1;
  std::deque<std::int64_t> maxq;
  std::deque<std::int64_t> minq;
  std::int64_t next = t_lo + 1;  // next t to enter the window
  for (std::int64_t j = -j_max; j <= j_max; ++j) {
    // window t in [j+1, j+N]
    while (next <= j + n_max) {
      while (!maxq.empty() && p(maxq.back()) <= p(next)) maxq.pop_back();
      maxq.push_back(next);
      while (!minq.empty() && p(minq.back()) >= p(next)) minq.pop_back();
      minq.push_back(next);
      ++next;
    }
    while (maxq.front() < j + 1) maxq.pop_front();
    while (minq.front() < j + 1) minq.pop_front();
    const long double base = p(j);
    const long double up = p(maxq.front()) - base;
    const long double down = base - p(minq.front());
    if (up > best) {
      best = up;
      st.argmax_j = j;
      st.argmax_n = maxq.front() - j;
    }
    if (down > best) {
      best = down;
      st.argmax_j = j;
      st.argmax_n = minq.front() - j;
    }
  }
  st.max_abs = static_cast<double>(best);
  return st;
}

DiscrepancyTrace orbit_transfer(const RegionSet& s, const QVector& alpha, std::int64_t n_max) {
  return discrepancy_trace(s, alpha, {}, n_max, true);
}

namespace {

class Fenwick {
 public:
  explicit Fenwick(std::size_t n) : cnt_(n + 1, 0), sum_(n + 1, 0) {}
  void add(std::size_t i, long c, long double v) {
    for (++i; i < cnt_.size(); i += i & (~i + 1)) {
      cnt_[i] += c;
      sum_[i] += v;
    }
  }
  // totals over ranks [0, i)
  std::pair<long, long double> prefix(std::size_t i) const {
    long c = 0;
    long double s = 0;
    for (; i > 0; i -= i & (~i + 1)) {
      c += cnt_[i];
      s += sum_[i];
    }
    return {c, s};
  }

 private:
  std::vector<long> cnt_;
  std::vector<long double> sum_;
};

}  // namespace

BmoResult bmo_stat(std::span<const double> seq, std::span<const std::size_t> lengths) {
  BmoResult r;
  r.lengths.assign(lengths.begin(), lengths.end());
  std::vector<double> sorted(seq.begin(), seq.end());
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  std::vector<std::size_t> rank(seq.size());
  for (std::size_t i = 0; i < seq.size(); ++i)
    rank[i] = static_cast<std::size_t>(std::lower_bound(sorted.begin(), sorted.end(), seq[i]) - sorted.begin());

  long double best = 0;
  for (std::size_t len : lengths) {
    if (len == 0 || len > seq.size()) throw PreconditionError("window length outside the sequence range");
    if (len == 1) continue;  // a single value never deviates from itself
    Fenwick fw(sorted.size());
    long double total = 0;
    for (std::size_t i = 0; i < len; ++i) {
      fw.add(rank[i], 1, seq[i]);
      total += seq[i];
    }
    for (std::size_t start = 0;; ++start) {
      const long double mean = total / static_cast<long double>(len);
      const std::size_t below =
          static_cast<std::size_t>(std::upper_bound(sorted.begin(), sorted.end(), static_cast<double>(mean)) - sorted.begin());
      const auto [cb, sb] = fw.prefix(below);
      const long double dev =
          (mean * cb - sb) + ((total - sb) - mean * static_cast<long double>(static_cast<long>(len) - cb));
      const long double avg = dev / static_cast<long double>(len);
      if (avg > best) {
        best = avg;
        r.argmax_length = len;
        r.argmax_start = start;
      }
      if (start + len >= seq.size()) break;
      fw.add(rank[start], -1, -seq[start]);
      fw.add(rank[start + len], 1, seq[start + len]);
      total += seq[start + len] - seq[start];
    }
  }
  r.value = static_cast<double>(best);
  return r;
}

std::vector<std::size_t> dyadic_lengths(unsigned max_exponent) {
  std::vector<std::size_t> out;
  for (unsigned e = 0; e <= max_exponent; ++e) out.push_back(std::size_t{1} << e);
  return out;
}

std::vector<double> counting_discrepancy(const PointSet& p, double density, std::span<const double> xs,
                                         bool block_mode) {
  if (p.dim != 1) throw PreconditionError("counting discrepancy needs a one-dimensional point set");
  if (!(density > 0)) throw PreconditionError("density must be positive");
  std::vector<double> out;
  out.reserve(xs.size());
  if (!block_mode) {
    std::vector<double> v(p.coords);
    std::sort(v.begin(), v.end());
    const auto below = [&](double x) { return static_cast<double>(std::lower_bound(v.begin(), v.end(), x) - v.begin()); };
    const double at0 = below(0);
    for (double x : xs) out.push_back(below(x) - at0 - density * x);
    return out;
  }
  if (!p.block_tag) throw PreconditionError("block mode needs block provenance");
  std::map<std::int64_t, std::int64_t> sizes;
  for (std::size_t i = 0; i < p.size(); ++i) ++sizes[p.block(i)];
  std::vector<std::int64_t> keys;
  std::vector<std::int64_t> cum{0};
  for (const auto& [k, c] : sizes) {
    keys.push_back(k);
    cum.push_back(cum.back() + c);
  }
  // mass strictly below x: blocks k < x
  const auto below = [&](double x) {
    const auto idx = std::lower_bound(keys.begin(), keys.end(), static_cast<std::int64_t>(std::ceil(x))) - keys.begin();
    return static_cast<double>(cum[static_cast<std::size_t>(idx)]);
  };
  const double at0 = below(0);
  for (double x : xs) out.push_back(below(x) - at0 - density * x);
  return out;
}

BlockComparison block_counting_comparison(const PointSet& p, std::span<const double> xs) {
  if (!p.block_tag) throw PreconditionError("block comparison needs block provenance");
  BlockComparison bc;
  std::map<std::int64_t, std::size_t> sizes;
  for (std::size_t i = 0; i < p.size(); ++i) {
    bc.radius = std::max(bc.radius, std::abs(p.coords[i] - static_cast<double>(p.block(i))));
    bc.max_block = std::max(bc.max_block, ++sizes[p.block(i)]);
  }
  const auto plain = counting_discrepancy(p, 1, xs, false);
  const auto block = counting_discrepancy(p, 1, xs, true);
  for (std::size_t i = 0; i < xs.size(); ++i) bc.sup_difference = std::max(bc.sup_difference, std::abs(plain[i] - block[i]));
  bc.bound = (2 * std::ceil(bc.radius) + 1) * static_cast<double>(bc.max_block);
  return bc;
}

}  // namespace quasilab
