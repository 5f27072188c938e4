#pragma once

// Text formats: point-set CSV, region / lattice / certificate files and
// trace tables. Every exact file embeds its algebra as `basis` and
// `product` lines.

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "quasilab/dynamics.hpp"
#include "quasilab/lattice.hpp"
#include "quasilab/modelset.hpp"
#include "quasilab/regions.hpp"
#include "quasilab/riesz.hpp"

namespace quasilab {

/// %.17g, enough to round-trip a double.
std::string format_double(double x);

PointKind parse_point_kind(std::string_view s);

/// # quasilab pointset v1 dim=<d> kind=<k> tags=<w> block=<i|->
/// # coverage: ...
/// x1,..,xd,t1,..,tw
void write_pointset(std::ostream& os, const PointSet& p);
PointSet read_pointset(std::istream& is);
void save_pointset(const std::string& path, const PointSet& p);
PointSet load_pointset(const std::string& path);

/// Region file: algebra lines, `dim <d>`, then one `piece offset=(..)
/// edges=((row),..)` line per piece. `intervals <literal>` lines are also
/// accepted for hand-written 1-D files. Without algebra lines `fallback` is
/// used; with both they must agree.
std::string region_to_text(const RegionSet& s);
RegionSet region_from_text(std::string_view text, const AlgebraPtr& fallback);
void save_region(const std::string& path, const RegionSet& s);
RegionSet load_region(const std::string& path, const AlgebraPtr& fallback);

/// Algebra named by a file, or the algebra embedded in a region or
/// lattice file.
AlgebraPtr algebra_from_text(std::string_view text);

std::string lattice_to_text(const Lattice& l);
Lattice lattice_from_text(std::string_view text, const AlgebraPtr& fallback);

std::string certificate_to_text(const EquidecompCertificate& c);
EquidecompCertificate certificate_from_text(std::string_view text, const AlgebraPtr& fallback);

/// Parses `((a, b), (c, d))` as rows.
QMatrix parse_qmatrix(const AlgebraPtr& algebra, std::string_view text);

/// n,D_n
void write_trace_csv(std::ostream& os, const DiscrepancyTrace& t);
/// R,size,lambda_min,lambda_max
void write_bounds_csv(std::ostream& os, const std::vector<BoundRow>& rows);

std::string read_file(const std::string& path);
void write_file(const std::string& path, std::string_view content);

}  // namespace quasilab
