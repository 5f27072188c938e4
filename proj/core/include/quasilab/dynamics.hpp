#pragma once

// Discrepancy of the rotation x -> x + alpha against the multiplicity
// function of a region.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "quasilab/modelset.hpp"
#include "quasilab/regions.hpp"

namespace quasilab {

/// Orbit x0 + k alpha with hybrid numeric/exact evaluation of chi_S.
class Orbit {
 public:
  Orbit(const RegionSet& s, QVector alpha, QVector x0);
  /// chi_S(x0 + k alpha).
  int chi(std::int64_t k) const;
  const RegionSet& region() const { return *s_; }

 private:
  const RegionSet* s_;
  QVector alpha_;
  QVector x0_;
  std::vector<long double> alpha_ld_;
  std::vector<long double> x0_ld_;
};

struct DiscrepancyTrace {
  std::vector<std::int64_t> n;
  std::vector<double> values;
  double max_abs = 0;
  std::int64_t argmax = 0;
  bool two_sided = false;
};

/// D_n(S, x0) = sum_{k=0}^{n-1} chi_S(x0 + k alpha) - n mes S for n in
/// [0, n_max]; with `two_sided`, n in [-n_max, n_max] and
/// D_n = -sum_{k=n}^{-1} chi_S(x0 + k alpha) - n mes S for n < 0.
DiscrepancyTrace discrepancy_trace(const RegionSet& s, const QVector& alpha, const QVector& x0,
                                   std::int64_t n_max, bool two_sided);

struct BrsStatistic {
  double max_abs = 0;
  std::int64_t argmax_n = 0;
  std::int64_t argmax_j = 0;
  std::int64_t n_max = 0;
  std::int64_t j_max = 0;
};

/// max over 1 <= n <= N, |j| <= J of |sum_{k=j+1}^{j+n} chi_S(k alpha) - n mes S|.
BrsStatistic brs_empirical(const RegionSet& s, const QVector& alpha, std::int64_t n_max, std::int64_t j_max);

/// g(n alpha) for n in [-n_max, n_max], normalized g(0) = 0; equal to the
/// two-sided trace at x0 = 0.
DiscrepancyTrace orbit_transfer(const RegionSet& s, const QVector& alpha, std::int64_t n_max);

struct BmoResult {
  double value = 0;
  std::size_t argmax_length = 0;
  std::size_t argmax_start = 0;
  std::vector<std::size_t> lengths;
};

/// max over windows [p, p+L) (all positions, L in `lengths`) of the mean
/// absolute deviation from the window mean.
BmoResult bmo_stat(std::span<const double> seq, std::span<const std::size_t> lengths);

/// 1, 2, 4, ..., 2^max_exponent.
std::vector<std::size_t> dyadic_lengths(unsigned max_exponent);

/// d(Lambda, x) = n_Lambda(x) - a x with n_Lambda(0) = 0. In block mode
/// the counting function puts mass #Lambda_k at the integer k.
std::vector<double> counting_discrepancy(const PointSet& p, double density, std::span<const double> xs,
                                         bool block_mode);

struct BlockComparison {
  double sup_difference = 0;
  double bound = 0;
  double radius = 0;
  std::size_t max_block = 0;
};

/// sup over xs of |n_Lambda - n~_Lambda| next to (2 ceil(R) + 1) max #Lambda_k,
/// with R = max |lambda - block index| over the set.
BlockComparison block_counting_comparison(const PointSet& p, std::span<const double> xs);

}  // namespace quasilab
