#pragma once

// Finite unions of half-open parallelepipeds  offset + E [0,1)^d.
//
// A one-dimensional piece with a negative edge is the interval (o+e, o]:
// the image of [0,1) under a negative scaling keeps the closed end at the
// offset. This is how left-open windows such as (-1,0] are stored.

#include <complex>
#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "quasilab/linalg.hpp"

namespace quasilab {

/// Guard band for numeric boundary decisions; inside it the exact path runs.
inline constexpr long double kBoundaryGuard = 1e-9L;

struct Piece {
  QVector offset;
  QMatrix edges;  // column k is edge k
};

/// Produces the exact coordinates of a point on demand (only called when a
/// numeric test lands inside the guard band).
using ExactPoint = std::function<QVector()>;

class RegionSet {
 public:
  RegionSet() = default;
  RegionSet(std::size_t dim, std::vector<Piece> pieces);

  /// [lo, hi) or (lo, hi]; requires lo < hi exactly.
  static RegionSet interval(const QValue& lo, const QValue& hi, bool closed_left = true);

  /// Union of semi-closed intervals: "[0, w1-1) u [1, 3-w1)", "(-1,0]".
  /// With `allow_any_brackets`, (a,b) and [a,b] are accepted too and stored
  /// as [a,b); callers that do so only use closures or interiors.
  static RegionSet parse_intervals(const AlgebraPtr& algebra, std::string_view text,
                                   bool allow_any_brackets = false);

  /// Axis-aligned box [lo_1,hi_1) x ... x [lo_d,hi_d).
  static RegionSet box(const QVector& lo, const QVector& hi);

  std::size_t dim() const { return dim_; }
  const std::vector<Piece>& pieces() const { return pieces_; }
  const AlgebraPtr& algebra() const;
  bool empty() const { return pieces_.empty(); }

  QValue volume() const;
  QValue piece_volume(std::size_t i) const;

  /// Exact membership.
  bool contains(const QVector& x) const;
  /// Numeric membership with exact fallback inside the guard band. Without
  /// an exact point, a guard-band hit throws AmbiguousBoundary.
  bool contains(std::span<const long double> x, const ExactPoint& exact = {}) const;

  /// chi_S(x) = sum over k in Z^d of 1_S(x + k), same hybrid rule.
  int multiplicity(std::span<const long double> x, const ExactPoint& exact = {}) const;
  int multiplicity(const QVector& x) const;

  /// Per-axis numeric bounding box of the closure.
  std::vector<double> bbox_lo() const;
  std::vector<double> bbox_hi() const;

  bool axis_aligned() const;

  /// Throws PreconditionError naming the first pair of pieces that overlap
  /// in positive measure. Exact for axis-aligned pieces, numeric otherwise.
  void check_disjoint() const;

  /// Cached numeric data of piece i.
  struct NumericPiece {
    std::vector<double> offset;
    std::vector<double> edges;    // row-major d x d
    std::vector<double> inverse;  // row-major d x d
    double abs_det = 0;
  };
  const NumericPiece& numeric_piece(std::size_t i) const { return numeric_[i]; }

  std::string to_string() const;

 private:
  /// Coordinates of x in piece i: c = E^{-1}(x - o); returns -1 outside,
  /// 1 inside, 0 when some coordinate is within the guard band.
  int classify_numeric(std::size_t i, std::span<const long double> x) const;
  bool contains_piece_exact(std::size_t i, const QVector& x) const;

  std::size_t dim_ = 0;
  std::vector<Piece> pieces_;
  std::vector<NumericPiece> numeric_;
  std::vector<std::optional<QMatrix>> exact_inverse_;  // adjugates
  std::vector<QValue> dets_;
  std::vector<std::vector<long double>> inverse_ld_;
};

/// Fourier transform of the indicator, f(t) = int_S exp(-2 pi i <t,x>) dx,
/// in closed form per piece.
std::complex<double> ft_indicator(const RegionSet& s, std::span<const double> t);

/// Image of S under x -> M x.
RegionSet transform_region(const RegionSet& s, const QMatrix& m);

/// Translate every piece by v.
RegionSet translate_region(const RegionSet& s, const QVector& v);

struct EquidecompCertificate {
  QVector alpha;
  RegionSet source;
  RegionSet target;
  std::vector<QVector> shifts;
  /// Optional per-piece witnesses; recomputed and compared when present.
  std::vector<ModuleWitness> witnesses;
};

struct EquidecompVerdict {
  bool valid = false;
  std::string violation;
  std::vector<ModuleWitness> witnesses;
};

EquidecompVerdict verify_equidecomposition(const EquidecompCertificate& cert);

// ---- bounded remainder set constructions ------------------------------

/// A single parallelepiped with each edge certified in Z alpha + Z^d.
struct BrsParallelepiped {
  RegionSet region;
  std::vector<ModuleWitness> edges;
};

/// Edges v_i = n_i alpha + m_i, offset 0.
BrsParallelepiped brs_parallelepiped(const QVector& alpha,
                                     const std::vector<ModuleWitness>& generators);

/// Parallelepiped of volume gamma with edges in Z alpha + Z^d, found by a
/// deterministic bounded search (|entries| <= search_bound).
BrsParallelepiped realize_measure(const QVector& alpha, const QValue& gamma, int search_bound);

/// Calls `accept` on every realization in search order until it returns
/// true; returns whether one was accepted.
bool for_each_measure_realization(const QVector& alpha, const QValue& gamma, int search_bound,
                                  const std::function<bool(const BrsParallelepiped&)>& accept);

struct BrsConstruction {
  RegionSet region;
  /// One certificate entry per piece of `region`.
  std::vector<std::vector<ModuleWitness>> piece_edges;
  std::size_t tiles_meeting_k = 0;
  std::size_t free_tiles = 0;
  bool has_residual = false;
  /// Tile edge vectors used for the grid.
  std::vector<ModuleWitness> tile;
};

/// A bounded remainder set S with K in S in U and mes S = gamma.
BrsConstruction construct_brs_between(const RegionSet& k, const RegionSet& u, const QValue& gamma,
                                      const QVector& alpha, double epsilon, int search_bound);

}  // namespace quasilab
