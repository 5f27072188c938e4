#include <gtest/gtest.h>

#include <filesystem>
#include <sstream>

#include "helpers.hpp"
#include "quasilab/io.hpp"

using namespace quasilab;
using namespace quasilab::testing;

TEST(Io, FormatDoubleRoundTrips) {
  for (double x : {0.1, 1.0 / 3, -2.5e-300, 1e17 + 2}) EXPECT_EQ(std::stod(format_double(x)), x);
}

TEST(Io, PointSetRoundTrip) {
  const auto p = dual_model_points({q("w1")}, {q("1")}, intervals("[0, w1 - 1) u [1, 3 - w1)"), -20, 20);
  std::stringstream ss;
  write_pointset(ss, p);
  const auto r = read_pointset(ss);
  EXPECT_EQ(r.dim, p.dim);
  EXPECT_EQ(r.tag_width, p.tag_width);
  EXPECT_EQ(r.kind, p.kind);
  EXPECT_EQ(r.coords, p.coords);
  EXPECT_EQ(r.tags, p.tags);
  EXPECT_EQ(r.block_tag, p.block_tag);
  EXPECT_EQ(r.coverage, p.coverage);
}

TEST(Io, PointSetRejectsMalformedRows) {
  std::stringstream ss("# quasilab pointset v1 dim=1 kind=generic tags=0 block=-\nx1\n1.5,2\n");
  EXPECT_THROW(read_pointset(ss), ParseError);
  std::stringstream bad("# something else\n");
  EXPECT_THROW(read_pointset(bad), ParseError);
}

TEST(Io, RegionRoundTrip) {
  const auto a = q23();
  const auto s = RegionSet::box({q(a, "0"), q(a, "1/2")}, {q(a, "w1 - 1"), q(a, "w2")});
  const auto text = region_to_text(s);
  const auto r = region_from_text(text, nullptr);
  EXPECT_EQ(region_to_text(r), text);
  EXPECT_TRUE(r.algebra()->same_as(*a));
  EXPECT_EQ(r.volume().to_string(), s.volume().to_string());
}

TEST(Io, HalfOpenOnTheLeftSurvivesRoundTrip) {
  const auto s = intervals("(-1, 0] u (1, w1]");
  const auto r = region_from_text(region_to_text(s), nullptr);
  EXPECT_TRUE(r.contains(QVector{q("0")}));
  EXPECT_FALSE(r.contains(QVector{q("-1")}));
  EXPECT_TRUE(r.contains(QVector{q("w1")}));
}

TEST(Io, IntervalLinesAndFallbackAlgebra) {
  const auto r = region_from_text("dim 1\nintervals [0, w1 - 1) u [1, 3 - w1)\n", q2());
  EXPECT_EQ(r.volume().to_string(), intervals("[0, w1 - 1) u [1, 3 - w1)").volume().to_string());
  EXPECT_THROW(region_from_text("dim 1\nintervals [0, 1)\n", nullptr), ParseError);
}

TEST(Io, AlgebraMismatchIsReported) {
  const auto text = region_to_text(intervals("[0, w1 - 1)"));
  EXPECT_THROW(region_from_text(text, q23()), AlgebraMismatch);
  EXPECT_NO_THROW(region_from_text(text, q2()));
  EXPECT_TRUE(algebra_from_text(text)->same_as(*q2()));
}

TEST(Io, LatticeRoundTrip) {
  const auto a = q23();
  const auto lat = make_special_lattice({q(a, "w1"), q(a, "w2")}, {q(a, "1/2"), q(a, "w1")});
  const auto text = lattice_to_text(lat.gamma);
  const auto r = lattice_from_text(text, nullptr);
  EXPECT_EQ(lattice_to_text(r), text);
  EXPECT_EQ(r.det().to_string(), lat.gamma.det().to_string());
}

TEST(Io, CertificateRoundTrip) {
  EquidecompCertificate c;
  c.alpha = {q("w1")};
  c.source = intervals("[0, w1 - 1) u [1, 3 - w1)");
  c.target = intervals("[0, w1 - 1) u [w1 - 1, 1)");
  c.shifts = {{q("0")}, {q("w1 - 2")}};
  c.witnesses = verify_equidecomposition(c).witnesses;
  const auto text = certificate_to_text(c);
  const auto r = certificate_from_text(text, nullptr);
  EXPECT_EQ(certificate_to_text(r), text);
  EXPECT_TRUE(verify_equidecomposition(r).valid);
}

TEST(Io, QMatrixParse) {
  const auto m = parse_qmatrix(q2(), "((1, w1), (0, 1/2))");
  ASSERT_EQ(m.rows(), 2u);
  EXPECT_EQ(m(0, 1).to_string(), q("w1").to_string());
  EXPECT_EQ(m(1, 1).to_string(), q("1/2").to_string());
  EXPECT_THROW(parse_qmatrix(q2(), "(1, 2"), ParseError);
}

TEST(Io, TraceCsv) {
  DiscrepancyTrace t;
  t.n = {0, 1};
  t.values = {0.0, 0.5};
  std::ostringstream os;
  write_trace_csv(os, t);
  EXPECT_EQ(os.str(), "n,D_n\n0,0\n1,0.5\n");
}

TEST(Io, MissingFile) {
  EXPECT_THROW(read_file("/nonexistent/quasilab/file"), IoError);
  const auto dir = std::filesystem::temp_directory_path() / "quasilab_io_test";
  std::filesystem::create_directories(dir);
  const auto path = (dir / "x.txt").string();
  write_file(path, "abc");
  EXPECT_EQ(read_file(path), "abc");
  std::filesystem::remove_all(dir);
}
