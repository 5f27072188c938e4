#pragma once

// Block enumeration of dual model sets, displacement sequences, Avdonin's
// criterion, Gram matrices of exponential systems and their extreme
// eigenvalues.

#include <Eigen/Dense>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "quasilab/modelset.hpp"
#include "quasilab/regions.hpp"

namespace quasilab {

/// Points relabelled lambda_j, j = s_n + rank within block n, s_0 = 0.
struct Enumeration {
  std::vector<double> lambda;        // ordered by j
  std::vector<std::int64_t> block;   // block index per point
  std::vector<std::int64_t> rank;    // rank within the block (ascending values)
  std::int64_t j_first = 0;          // j of lambda[0]
  std::int64_t n_first = 0;          // s holds s_n for n in [n_first, n_first + s.size())
  std::vector<std::int64_t> s;

  std::size_t size() const { return lambda.size(); }
  std::int64_t j_last() const { return j_first + static_cast<std::int64_t>(lambda.size()) - 1; }
  std::int64_t s_at(std::int64_t n) const;
  std::int64_t max_block() const;
};

/// Blocks run over [n_lo, n_hi]; blocks without points are empty. The range
/// must contain 0.
Enumeration enumerate_blocks(const PointSet& p, std::int64_t n_lo, std::int64_t n_hi);
/// Block range taken from the points (and 0).
Enumeration enumerate_blocks(const PointSet& p);

struct DeltaSequence {
  std::int64_t j_first = 0;
  std::vector<double> delta;   // delta_j = lambda_j - j / mes
  QValue mes;
  long double mes_ld = 0;

  std::int64_t j_last() const { return j_first + static_cast<std::int64_t>(delta.size()) - 1; }
  double at(std::int64_t j) const { return delta[static_cast<std::size_t>(j - j_first)]; }
  double lambda(std::int64_t j) const;
};

DeltaSequence delta_sequence(const Enumeration& e, const QValue& mes);

struct MeanRow {
  std::size_t window = 0;
  double sup_deviation = 0;
  std::int64_t argmax_k = 0;
};

struct DeltaMeans {
  DeltaSequence delta;
  double c_hat = 0;
  std::int64_t k_lo = 0;
  std::int64_t k_hi = 0;
  std::vector<MeanRow> rows;
};

/// sup over k in [k_lo, k_hi] of |(1/N) sum_{j=k+1}^{k+N} delta_j - c|.
MeanRow window_deviation(const DeltaSequence& d, double c, std::size_t window, std::int64_t k_lo, std::int64_t k_hi);

/// c_hat is the mean of delta over the whole enumeration.
DeltaMeans delta_and_means(const Enumeration& e, const QValue& mes, std::span<const std::size_t> windows,
                           std::int64_t k_lo, std::int64_t k_hi);

struct AvdoninVerdict {
  bool satisfied = false;
  std::size_t window = 0;         // smallest N that works, 0 if none
  double sup_deviation = 0;       // at `window`, or the best seen
  double threshold = 0;           // 1 / (4 |I|)
  double margin = 0;              // threshold - sup_deviation
  double min_gap = 0;
  std::size_t n_max = 0;
  double c_hat = 0;
  std::int64_t k_lo = 0;
  std::int64_t k_hi = 0;
};

/// Smallest N <= n_max with sup deviation strictly below 1/(4|I|).
AvdoninVerdict avdonin_check(const DeltaMeans& m, const QValue& interval_length, std::size_t n_max);

/// entry(j, k) = ft_indicator(S, lambda_k - lambda_j).
Eigen::MatrixXcd gram_matrix(const PointSet& p, const RegionSet& s);

struct ExtremeEigs {
  double min = 0;
  double max = 0;
};

ExtremeEigs extreme_eigs(const Eigen::MatrixXcd& g);

struct BoundRow {
  double radius = 0;
  std::size_t size = 0;
  double lambda_min = 0;
  double lambda_max = 0;
};

/// Gram of the points in [-R, R]^d on S for each radius; throws if the
/// nested-section monotonicity fails.
std::vector<BoundRow> riesz_bound_trace(const PointSet& family, std::span<const double> radii, const RegionSet& s);

struct DualityOptions {
  std::vector<double> radii{25, 50, 100, 200};
  std::size_t avdonin_windows = 128;
  std::int64_t disc_n = 100000;
};

struct DualityReport {
  bool measures_match = true;
  std::string warning;
  std::size_t primal_points = 0;
  std::size_t dual_points = 0;
  std::vector<BoundRow> primal;
  std::vector<BoundRow> dual;
  AvdoninVerdict avdonin;
  double dual_disc_max = 0;
};

/// Primal trace for E(Lambda(Gamma, I)) on S next to the dual trace for
/// E(Lambda*(Gamma, S)) on I, plus Avdonin's check and the discrepancy of S
/// on the dual side.
DualityReport duality_experiment(const QVector& alpha, const QVector& beta, const RegionSet& interval,
                                 const RegionSet& s, const DualityOptions& opts = {});

}  // namespace quasilab
