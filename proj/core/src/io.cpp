#include "quasilab/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace quasilab {

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

bool starts_with(std::string_view s, std::string_view p) { return s.substr(0, p.size()) == p; }

std::vector<std::string> lines_of(std::string_view text) {
  std::vector<std::string> out;
  std::istringstream is{std::string(text)};
  for (std::string line; std::getline(is, line);) out.push_back(trim(line));
  return out;
}

// Splits on commas outside parentheses.
std::vector<std::string> split_top(std::string_view s) {
  std::vector<std::string> out;
  int depth = 0;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= s.size(); ++i) {
    if (i == s.size() || (s[i] == ',' && depth == 0)) {
      out.push_back(trim(s.substr(start, i - start)));
      start = i + 1;
    } else if (s[i] == '(') {
      ++depth;
    } else if (s[i] == ')') {
      --depth;
    }
  }
  return out;
}

std::string strip_parens(std::string_view s) {
  std::string t = trim(s);
  if (t.size() < 2 || t.front() != '(' || t.back() != ')') throw ParseError("expected a parenthesized list: " + t);
  return t.substr(1, t.size() - 2);
}

// Algebra lines pulled out of a file; the rest is returned in `body`.
AlgebraPtr split_algebra(std::string_view text, const AlgebraPtr& fallback, std::vector<std::string>& body) {
  std::string alg_text;
  for (auto& line : lines_of(text)) {
    if (line.empty() || line[0] == '#') continue;
    if (starts_with(line, "basis ") || starts_with(line, "product "))
      alg_text += line + "\n";
    else
      body.push_back(line);
  }
  if (alg_text.empty()) {
    if (!fallback) throw ParseError("file declares no algebra and none was supplied");
    return fallback;
  }
  auto alg = AlgebraSpec::parse(alg_text);
  if (fallback) {
    if (!fallback->same_as(*alg)) throw AlgebraMismatch("file algebra differs from the requested algebra");
    return fallback;
  }
  return alg;
}

std::string after(std::string_view line, std::string_view key) { return trim(line.substr(key.size())); }

Piece parse_piece(const AlgebraPtr& alg, std::string_view spec) {
  const auto o = spec.find("offset=");
  const auto e = spec.find("edges=");
  if (o == std::string_view::npos || e == std::string_view::npos || e < o)
    throw ParseError("piece needs offset=(..) edges=((..)): " + std::string(spec));
  Piece p;
  p.offset = parse_qvector(alg, trim(spec.substr(o + 7, e - o - 7)));
  p.edges = parse_qmatrix(alg, spec.substr(e + 6));
  return p;
}

std::string piece_text(const Piece& p) {
  return "offset=" + to_string(p.offset) + " edges=" + p.edges.to_string();
}

std::size_t parse_size(const std::string& s) {
  try {
    std::size_t pos = 0;
    const auto v = std::stoul(s, &pos);
    if (pos != s.size()) throw ParseError("bad integer: " + s);
    return v;
  } catch (const std::logic_error&) {
    throw ParseError("bad integer: " + s);
  }
}

}  // namespace

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

PointKind parse_point_kind(std::string_view s) {
  for (auto k : {PointKind::generic, PointKind::model_set, PointKind::dual_model_set, PointKind::sequence,
                 PointKind::periodic, PointKind::periodic_dual})
    if (to_string(k) == s) return k;
  throw ParseError("unknown point-set kind: " + std::string(s));
}

QMatrix parse_qmatrix(const AlgebraPtr& algebra, std::string_view text) {
  std::vector<QVector> rows;
  for (const auto& r : split_top(strip_parens(text))) rows.push_back(parse_qvector(algebra, strip_parens(r)));
  if (rows.empty()) throw ParseError("empty matrix literal");
  return QMatrix::from_rows(rows);
}

void write_pointset(std::ostream& os, const PointSet& p) {
  os << "# quasilab pointset v1 dim=" << p.dim << " kind=" << to_string(p.kind) << " tags=" << p.tag_width
     << " block=" << (p.block_tag ? std::to_string(*p.block_tag) : std::string("-")) << "\n";
  os << "# coverage: " << p.coverage << "\n";
  for (std::size_t i = 0; i < p.dim; ++i) os << (i ? "," : "") << "x" << i + 1;
  for (std::size_t i = 0; i < p.tag_width; ++i) os << ",t" << i + 1;
  os << "\n";
  for (std::size_t k = 0; k < p.size(); ++k) {
    const auto x = p.point(k);
    for (std::size_t i = 0; i < p.dim; ++i) os << (i ? "," : "") << format_double(x[i]);
    for (auto t : p.tag(k)) os << "," << t;
    os << "\n";
  }
}

PointSet read_pointset(std::istream& is) {
  std::string line;
  if (!std::getline(is, line) || !starts_with(line, "# quasilab pointset v1"))
    throw ParseError("not a quasilab point-set file");
  PointSet p;
  std::istringstream hs(line.substr(22));
  for (std::string tok; hs >> tok;) {
    const auto eq = tok.find('=');
    if (eq == std::string::npos) continue;
    const auto key = tok.substr(0, eq);
    const auto val = tok.substr(eq + 1);
    if (key == "dim") p.dim = parse_size(val);
    else if (key == "kind") p.kind = parse_point_kind(val);
    else if (key == "tags") p.tag_width = parse_size(val);
    else if (key == "block" && val != "-") p.block_tag = parse_size(val);
  }
  if (p.dim == 0) throw ParseError("point-set dimension must be >= 1");
  if (p.block_tag && *p.block_tag >= p.tag_width) throw ParseError("block column outside the tags");
  bool header_seen = false;
  std::vector<double> x(p.dim);
  std::vector<std::int64_t> t(p.tag_width);
  while (std::getline(is, line)) {
    line = trim(line);
    if (line.empty()) continue;
    if (line[0] == '#') {
      if (starts_with(line, "# coverage:")) p.coverage = trim(line.substr(11));
      continue;
    }
    if (!header_seen) {
      header_seen = true;
      continue;
    }
    const auto cells = split_top(line);
    if (cells.size() != p.dim + p.tag_width) throw ParseError("wrong number of columns: " + line);
    try {
      for (std::size_t i = 0; i < p.dim; ++i) x[i] = std::stod(cells[i]);
      for (std::size_t i = 0; i < p.tag_width; ++i) t[i] = std::stoll(cells[p.dim + i]);
    } catch (const std::logic_error&) {
      throw ParseError("bad number in row: " + line);
    }
    p.push(x, t);
  }
  return p;
}

void save_pointset(const std::string& path, const PointSet& p) {
  std::ostringstream os;
  write_pointset(os, p);
  write_file(path, os.str());
}

PointSet load_pointset(const std::string& path) {
  std::istringstream is(read_file(path));
  return read_pointset(is);
}

std::string region_to_text(const RegionSet& s) {
  std::ostringstream os;
  os << "# quasilab region v1\n" << s.algebra()->to_text() << "dim " << s.dim() << "\n";
  for (const auto& p : s.pieces()) os << "piece " << piece_text(p) << "\n";
  return os.str();
}

RegionSet region_from_text(std::string_view text, const AlgebraPtr& fallback) {
  std::vector<std::string> body;
  const auto alg = split_algebra(text, fallback, body);
  std::size_t dim = 0;
  std::vector<Piece> pieces;
  std::optional<RegionSet> intervals;
  for (const auto& line : body) {
    if (starts_with(line, "dim ")) {
      dim = parse_size(after(line, "dim "));
    } else if (starts_with(line, "piece ")) {
      pieces.push_back(parse_piece(alg, after(line, "piece ")));
    } else if (starts_with(line, "intervals ")) {
      if (intervals) throw ParseError("more than one intervals line");
      intervals = RegionSet::parse_intervals(alg, after(line, "intervals "));
    } else {
      throw ParseError("unexpected line in region file: " + line);
    }
  }
  if (intervals) {
    if (!pieces.empty()) throw ParseError("region file mixes pieces and intervals");
    return *intervals;
  }
  if (pieces.empty()) throw ParseError("region file has no pieces");
  if (dim == 0) dim = pieces.front().offset.size();
  RegionSet s(dim, std::move(pieces));
  s.check_disjoint();
  return s;
}

void save_region(const std::string& path, const RegionSet& s) { write_file(path, region_to_text(s)); }

RegionSet load_region(const std::string& path, const AlgebraPtr& fallback) {
  return region_from_text(read_file(path), fallback);
}

AlgebraPtr algebra_from_text(std::string_view text) {
  std::vector<std::string> body;
  return split_algebra(text, nullptr, body);
}

std::string lattice_to_text(const Lattice& l) {
  std::ostringstream os;
  os << "# quasilab lattice v1\n" << l.algebra()->to_text();
  for (std::size_t j = 0; j < l.basis().cols(); ++j) os << "column " << to_string(l.basis().column(j)) << "\n";
  return os.str();
}

Lattice lattice_from_text(std::string_view text, const AlgebraPtr& fallback) {
  std::vector<std::string> body;
  const auto alg = split_algebra(text, fallback, body);
  std::vector<QVector> cols;
  for (const auto& line : body) {
    if (!starts_with(line, "column ")) throw ParseError("unexpected line in lattice file: " + line);
    cols.push_back(parse_qvector(alg, after(line, "column ")));
  }
  if (cols.empty()) throw ParseError("lattice file has no columns");
  return Lattice(QMatrix::from_columns(cols));
}

std::string certificate_to_text(const EquidecompCertificate& c) {
  std::ostringstream os;
  os << "# quasilab certificate v1\n" << c.alpha.front().algebra()->to_text();
  os << "dim " << c.source.dim() << "\n";
  os << "alpha " << to_string(c.alpha) << "\n";
  for (const auto& p : c.source.pieces()) os << "source " << piece_text(p) << "\n";
  for (const auto& p : c.target.pieces()) os << "target " << piece_text(p) << "\n";
  for (const auto& s : c.shifts) os << "shift " << to_string(s) << "\n";
  for (const auto& w : c.witnesses) {
    os << "witness n=" << w.n.get_str() << " m=(";
    for (std::size_t i = 0; i < w.m.size(); ++i) os << (i ? ", " : "") << w.m[i].get_str();
    os << ")\n";
  }
  return os.str();
}

EquidecompCertificate certificate_from_text(std::string_view text, const AlgebraPtr& fallback) {
  std::vector<std::string> body;
  const auto alg = split_algebra(text, fallback, body);
  std::size_t dim = 0;
  std::vector<Piece> src;
  std::vector<Piece> dst;
  EquidecompCertificate c;
  for (const auto& line : body) {
    if (starts_with(line, "dim ")) {
      dim = parse_size(after(line, "dim "));
    } else if (starts_with(line, "alpha ")) {
      c.alpha = parse_qvector(alg, after(line, "alpha "));
    } else if (starts_with(line, "source ")) {
      src.push_back(parse_piece(alg, after(line, "source ")));
    } else if (starts_with(line, "target ")) {
      dst.push_back(parse_piece(alg, after(line, "target ")));
    } else if (starts_with(line, "shift ")) {
      c.shifts.push_back(parse_qvector(alg, after(line, "shift ")));
    } else if (starts_with(line, "witness ")) {
      const auto rest = after(line, "witness ");
      const auto mpos = rest.find(" m=");
      if (!starts_with(rest, "n=") || mpos == std::string::npos) throw ParseError("bad witness line: " + line);
      ModuleWitness w;
      try {
        w.n = Integer(trim(rest.substr(2, mpos - 2)), 10);
        for (const auto& v : split_top(strip_parens(rest.substr(mpos + 3)))) w.m.emplace_back(v, 10);
      } catch (const std::invalid_argument&) {
        throw ParseError("bad integer in witness line: " + line);
      }
      c.witnesses.push_back(std::move(w));
    } else {
      throw ParseError("unexpected line in certificate file: " + line);
    }
  }
  if (c.alpha.empty() || src.empty() || dst.empty()) throw ParseError("certificate needs alpha, source and target");
  if (dim == 0) dim = c.alpha.size();
  c.source = RegionSet(dim, std::move(src));
  c.target = RegionSet(dim, std::move(dst));
  return c;
}

void write_trace_csv(std::ostream& os, const DiscrepancyTrace& t) {
  os << "n,D_n\n";
  for (std::size_t i = 0; i < t.n.size(); ++i) os << t.n[i] << "," << format_double(t.values[i]) << "\n";
}

void write_bounds_csv(std::ostream& os, const std::vector<BoundRow>& rows) {
  os << "R,size,lambda_min,lambda_max\n";
  for (const auto& r : rows)
    os << format_double(r.radius) << "," << r.size << "," << format_double(r.lambda_min) << ","
       << format_double(r.lambda_max) << "\n";
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_file(const std::string& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path);
  out << content;
  if (!out) throw IoError("write failed for " + path);
}

}  // namespace quasilab
