#pragma once

// Point sets: cut-and-project sets, dual model sets, the explicit
// sequences m + {alpha^T m} beta, periodic sets and their duals.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "quasilab/lattice.hpp"
#include "quasilab/regions.hpp"

namespace quasilab {

enum class PointKind { generic, model_set, dual_model_set, sequence, periodic, periodic_dual };

std::string to_string(PointKind k);

/// Finite list of points with integer provenance. Provenance rows are
/// (m_1..m_k, n); which lattice coordinates they hold depends on `kind`.
struct PointSet {
  std::size_t dim = 1;
  std::size_t tag_width = 0;
  PointKind kind = PointKind::generic;
  std::vector<double> coords;       // size() * dim
  std::vector<std::int64_t> tags;   // size() * tag_width
  std::vector<QVector> exact;       // empty or one per point
  /// Index of the tag holding the block number, if points are grouped in
  /// blocks (dual model sets).
  std::optional<std::size_t> block_tag;
  /// Human-readable description of the search range.
  std::string coverage;

  std::size_t size() const { return dim ? coords.size() / dim : 0; }
  std::span<const double> point(std::size_t i) const { return {coords.data() + i * dim, dim}; }
  std::span<const std::int64_t> tag(std::size_t i) const {
    return {tags.data() + i * tag_width, tag_width};
  }
  std::int64_t block(std::size_t i) const;

  void push(std::span<const double> x, std::span<const std::int64_t> t, std::optional<QVector> q = {});
  /// Stable lexicographic sort by provenance.
  void sort_by_tags();
  /// Points within [-r, r]^dim.
  PointSet truncate(double r) const;
};

/// Integer box [lo, hi] per coordinate.
struct IntBox {
  std::vector<std::int64_t> lo;
  std::vector<std::int64_t> hi;
  static IntBox cube(std::size_t d, std::int64_t r) {
    return IntBox{std::vector<std::int64_t>(d, -r), std::vector<std::int64_t>(d, r)};
  }
  static IntBox range(std::int64_t lo, std::int64_t hi) { return IntBox{{lo}, {hi}}; }
  std::size_t dim() const { return lo.size(); }
};

/// { p1(g) : g in Gamma, p2(g) in window } for g = basis (m, n), m in the
/// box; n is solved from the window. Membership is exact.
PointSet cut_and_project(const Lattice& gamma, const RegionSet& window, const IntBox& m_box);

/// { n + <n alpha + m, beta> : n alpha + m in S }, n in range; blocks by n.
PointSet dual_model_points(const QVector& alpha, const QVector& beta, const RegionSet& s,
                           std::int64_t n_lo, std::int64_t n_hi, bool keep_exact = true);

/// lambda(m) = m + {alpha^T m} beta over the box; rank checks enforced.
PointSet sequence_points(const QVector& alpha, const QVector& beta, const IntBox& m_box);

/// { n in Z^d : <n, alpha> in I mod 1 } over the box.
PointSet periodic_points(const QVector& alpha, const RegionSet& interval, const IntBox& n_box);

/// { m in Z : -m alpha in S mod Z^d } over the range.
PointSet periodic_dual(const QVector& alpha, const RegionSet& s, std::int64_t m_lo, std::int64_t m_hi);

struct DensityRow {
  double radius = 0;
  double lower = 0;
  double upper = 0;
};

/// Min and max of #(P in x + [-R,R]^d) / (2R)^d over windows inside the
/// generated range. Exact sweep in 1-D, grid of window centres otherwise.
std::vector<DensityRow> density_estimate(const PointSet& p, std::span<const double> radii);

/// Minimal distance between distinct points (Euclidean).
double separation(const PointSet& p);

/// Image under x -> A x. Exact coordinates are carried when present.
PointSet transform_pointset(const PointSet& p, const QMatrix& a);

/// Max over points of |p - basis(provenance)|; 0 when exact. Only for
/// model sets generated from `gamma`.
double provenance_error(const PointSet& p, const Lattice& gamma);

}  // namespace quasilab
