#include "quasilab/cli.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include "CLI11.hpp"
#include "quasilab/io.hpp"
#include "quasilab/lattice.hpp"
#include "quasilab/modelset.hpp"
#include "quasilab/regions.hpp"

namespace quasilab::cli {

namespace fs = std::filesystem;

namespace {

struct Global {
  std::string algebra_file;
  std::string out_dir = ".";
};

AlgebraPtr load_algebra(const Global& g) {
  if (g.algebra_file.empty()) return AlgebraSpec::sqrt2_sqrt3();
  return AlgebraSpec::parse_file(g.algebra_file);
}

std::string out_path(const Global& g, const std::string& file) {
  const fs::path p(file);
  if (p.is_absolute()) return file;
  fs::create_directories(g.out_dir);
  return (fs::path(g.out_dir) / p).string();
}

// A region argument is a file path when one exists, else an interval literal.
RegionSet region_arg(const AlgebraPtr& alg, const std::string& text) {
  std::error_code ec;
  if (fs::is_regular_file(text, ec)) return load_region(text, alg);
  return RegionSet::parse_intervals(alg, text);
}

Json region_json(const RegionSet& s) {
  return Json{{"pieces", s.pieces().size()}, {"volume", s.volume().to_string()}, {"text", s.to_string()}};
}

Json witness_json(const ModuleWitness& w) {
  Json m = Json::array();
  for (const auto& x : w.m) m.push_back(x.get_str());
  return Json{{"n", w.n.get_str()}, {"m", m}};
}

Json bounds_json(const std::vector<BoundRow>& rows) {
  Json a = Json::array();
  for (const auto& r : rows)
    a.push_back(Json{{"R", r.radius}, {"size", r.size}, {"lambda_min", r.lambda_min}, {"lambda_max", r.lambda_max}});
  return a;
}

Json avdonin_json(const AvdoninVerdict& v) {
  return Json{{"satisfied", v.satisfied},     {"window", v.window},       {"sup_deviation", v.sup_deviation},
              {"threshold", v.threshold},     {"margin", v.margin},       {"min_gap", v.min_gap},
              {"n_max", v.n_max},             {"c_hat", v.c_hat},         {"k_lo", v.k_lo},
              {"k_hi", v.k_hi},               {"within_block_order", "ascending"},
              {"anchor", "s_0 = 0"}};
}

Json density_json(const std::vector<DensityRow>& rows) {
  Json a = Json::array();
  for (const auto& r : rows) a.push_back(Json{{"R", r.radius}, {"lower", r.lower}, {"upper", r.upper}});
  return a;
}

void write_text(const std::string& path, const std::string& text) { write_file(path, text); }

std::string csv_of_trace(const DiscrepancyTrace& t) {
  std::ostringstream os;
  write_trace_csv(os, t);
  return os.str();
}

std::string csv_of_bounds(const std::vector<BoundRow>& rows) {
  std::ostringstream os;
  write_bounds_csv(os, rows);
  return os.str();
}

// Points for the analytic commands: a point-set file, or the dual model set
// of (alpha, beta, window) over blocks |n| <= range.
struct PointSource {
  std::string points;
  std::string alpha;
  std::string beta;
  std::string dual_window;
  std::int64_t range = 200;

  void add(CLI::App* app) {
    app->add_option("--points", points, "point-set CSV file");
    app->add_option("--alpha", alpha, "alpha literal");
    app->add_option("--beta", beta, "beta literal");
    app->add_option("--dual-window", dual_window, "window S of the dual model set (file or intervals)");
    app->add_option("--range", range, "block range |n| <= range")->capture_default_str();
  }

  PointSet load(const AlgebraPtr& alg) const {
    if (!points.empty()) return load_pointset(points);
    if (alpha.empty() || beta.empty() || dual_window.empty())
      throw PreconditionError("give --points or all of --alpha, --beta, --dual-window");
    return dual_model_points(parse_qvector(alg, alpha), parse_qvector(alg, beta), region_arg(alg, dual_window), -range,
                             range, false);
  }

  std::optional<QValue> window_measure(const AlgebraPtr& alg) const {
    if (dual_window.empty()) return std::nullopt;
    return region_arg(alg, dual_window).volume();
  }
};

QValue measure_arg(const AlgebraPtr& alg, const std::string& mes, const PointSource& src) {
  if (!mes.empty()) return QValue::parse(alg, mes);
  if (auto m = src.window_measure(alg)) return *m;
  throw PreconditionError("give --mes when the points come from a file");
}

Json enumeration_stats(const Enumeration& e, const DeltaSequence& d, double c_hat) {
  double sup_delta = 0;
  for (double x : d.delta) sup_delta = std::max(sup_delta, std::abs(x));
  double radius = 0;
  for (std::size_t i = 0; i < e.size(); ++i)
    radius = std::max(radius, std::abs(e.lambda[i] - static_cast<double>(e.block[i])));
  double s_dev = 0;
  for (std::size_t i = 0; i < e.s.size(); ++i) {
    const auto n = e.n_first + static_cast<std::int64_t>(i);
    s_dev = std::max(s_dev, static_cast<double>(std::abs(static_cast<long double>(e.s[i]) - n * d.mes_ld)));
  }
  const double mes = static_cast<double>(d.mes_ld);
  return Json{{"size", e.size()},
              {"j_first", e.j_first},
              {"j_last", e.j_last()},
              {"max_block", e.max_block()},
              {"c_hat", c_hat},
              {"sup_abs_delta", sup_delta},
              {"displacement_bound", radius + s_dev / mes + static_cast<double>(e.max_block()) / mes}};
}

QVector seeded_translate(const AlgebraPtr& alg, std::size_t dim, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<long> dist(0, 1023);
  QVector t;
  for (std::size_t i = 0; i < dim; ++i) t.emplace_back(alg, Rational(dist(rng), 1L << 20));
  return t;
}

class Runner {
 public:
  Runner(std::ostream& out) : out_(out) {}

  int run(const std::vector<std::string>& args, std::ostream& err);

 private:
  void emit(const Json& j) { out_ << j.dump(2) << "\n"; }

  void cmd_gen();
  void cmd_dual();
  void cmd_periodic();
  void cmd_disc();
  void cmd_brs_test();
  void cmd_brs_make();
  void cmd_enum();
  void cmd_avdonin();
  void cmd_gram();
  void cmd_bounds();
  void cmd_duality();
  void cmd_report();

  std::ostream& out_;
  Global g_;

  struct {
    std::string alpha, beta, window, output = "pointset.csv";
    std::int64_t range = 100;
    bool sequence = false;
  } gen_;
  struct {
    std::string alpha, beta, set, output = "dual.csv";
    std::int64_t range = 100;
  } dual_;
  struct {
    std::string alpha, interval, set, output = "periodic.csv";
    std::int64_t range = 100;
    bool dual = false;
  } periodic_;
  struct {
    std::string set, alpha, x0, output = "Dn.csv";
    std::int64_t n = 1000;
    bool two_sided = false;
    unsigned bmo = 0;
    bool plot = false;
  } disc_;
  struct {
    std::string set, alpha;
    std::int64_t n = 100000, j = 10000;
  } brs_test_;
  struct {
    std::string alpha, gamma, k, u, output = "brs.region";
    double epsilon = 0.5;
    int search_bound = 4;
  } brs_make_;
  struct {
    PointSource src;
    std::string mes, output = "enum.csv";
  } enum_;
  struct {
    PointSource src;
    std::string mes, interval_length;
    std::size_t n_max = 128;
    std::int64_t k = -1;
  } avdonin_;
  struct {
    PointSource src;
    std::string set, matrix;
  } gram_;
  struct {
    PointSource src;
    std::string set, output = "bounds.csv";
    std::vector<double> radii{25, 50, 100, 200};
    bool plot = false;
  } bounds_;
  struct {
    std::string alpha, beta, interval, set, output = "duality.json";
    std::vector<double> radii{25, 50, 100, 200};
    std::size_t n_max = 128;
    std::int64_t disc_n = 100000;
    std::uint64_t seed = 0;
    bool plot = false;
  } duality_;
  struct {
    std::string alpha, beta, interval, set, output = "report.json";
    std::int64_t range = 200;
    std::vector<double> radii{25, 50, 100, 200};
    std::vector<double> density_radii{10, 50};
    std::size_t n_max = 128;
    std::int64_t disc_n = 100000, brs_n = 100000, brs_j = 10000;
    unsigned bmo = 10;
    std::uint64_t seed = 0;
  } report_;
};

int Runner::run(const std::vector<std::string>& args, std::ostream& err) {
  CLI::App app{"quasilab: model sets, bounded remainder sets and exponential Riesz bases"};
  app.name("quasilab");
  app.require_subcommand(1);
  app.fallthrough();
  app.set_config("--config", "", "line-based key = value file with [section] headers");
  app.add_option("--algebra", g_.algebra_file, "algebra file (default: w1=sqrt2, w2=sqrt3, w3=sqrt6)");
  app.add_option("--out", g_.out_dir, "output directory")->capture_default_str();

  auto* gen = app.add_subcommand("gen", "cut-and-project set Lambda(Gamma, I)");
  gen->add_option("--alpha", gen_.alpha)->required();
  gen->add_option("--beta", gen_.beta)->required();
  gen->add_option("--window", gen_.window, "interval I (file or literal)");
  gen->add_option("--range", gen_.range, "m in [-range, range]^d")->capture_default_str();
  gen->add_flag("--sequence", gen_.sequence, "explicit points m + {alpha.m} beta instead");
  gen->add_option("-o,--output", gen_.output)->capture_default_str();
  gen->callback([this] { cmd_gen(); });

  auto* dual = app.add_subcommand("dual", "dual model set Lambda*(Gamma, S)");
  dual->add_option("--alpha", dual_.alpha)->required();
  dual->add_option("--beta", dual_.beta)->required();
  dual->add_option("--set", dual_.set, "window S (file or literal)")->required();
  dual->add_option("--range", dual_.range, "blocks n in [-range, range]")->capture_default_str();
  dual->add_option("-o,--output", dual_.output)->capture_default_str();
  dual->callback([this] { cmd_dual(); });

  auto* periodic = app.add_subcommand("periodic", "periodic sets and their duals");
  periodic->add_option("--alpha", periodic_.alpha)->required();
  periodic->add_option("--interval", periodic_.interval, "interval I");
  periodic->add_option("--set", periodic_.set, "region S (with --dual)");
  periodic->add_flag("--dual", periodic_.dual, "{m : -m alpha in S mod Z^d}");
  periodic->add_option("--range", periodic_.range)->capture_default_str();
  periodic->add_option("-o,--output", periodic_.output)->capture_default_str();
  periodic->callback([this] { cmd_periodic(); });

  auto* disc = app.add_subcommand("disc", "discrepancy trace D_n");
  disc->add_option("--set", disc_.set)->required();
  disc->add_option("--alpha", disc_.alpha)->required();
  disc->add_option("--x0", disc_.x0, "start point (default 0)");
  disc->add_option("--n", disc_.n, "n_max")->capture_default_str();
  disc->add_flag("--two-sided", disc_.two_sided);
  disc->add_option("--bmo", disc_.bmo, "also report BMO over windows up to 2^k (0: skip)")->capture_default_str();
  disc->add_flag("--plot", disc_.plot, "write Dn.dat");
  disc->add_option("-o,--output", disc_.output)->capture_default_str();
  disc->callback([this] { cmd_disc(); });

  auto* brs_test = app.add_subcommand("brs-test", "empirical bounded-remainder statistic");
  brs_test->add_option("--set", brs_test_.set)->required();
  brs_test->add_option("--alpha", brs_test_.alpha)->required();
  brs_test->add_option("--N", brs_test_.n)->capture_default_str();
  brs_test->add_option("--J", brs_test_.j)->capture_default_str();
  brs_test->callback([this] { cmd_brs_test(); });

  auto* brs_make = app.add_subcommand("brs-make", "construct a bounded remainder set");
  brs_make->add_option("--alpha", brs_make_.alpha)->required();
  brs_make->add_option("--gamma", brs_make_.gamma, "target measure")->required();
  brs_make->add_option("--K", brs_make_.k, "compact set to contain");
  brs_make->add_option("--U", brs_make_.u, "open set to stay inside");
  brs_make->add_option("--epsilon", brs_make_.epsilon)->capture_default_str();
  brs_make->add_option("--search-bound", brs_make_.search_bound)->capture_default_str();
  brs_make->add_option("-o,--output", brs_make_.output)->capture_default_str();
  brs_make->callback([this] { cmd_brs_make(); });

  auto* en = app.add_subcommand("enum", "block enumeration and displacements");
  enum_.src.add(en);
  en->add_option("--mes", enum_.mes, "mes S (default: volume of --dual-window)");
  en->add_option("-o,--output", enum_.output)->capture_default_str();
  en->callback([this] { cmd_enum(); });

  auto* av = app.add_subcommand("avdonin", "Avdonin's averaged quarter condition");
  avdonin_.src.add(av);
  av->add_option("--mes", avdonin_.mes, "mes S (default: volume of --dual-window)");
  av->add_option("--interval-length", avdonin_.interval_length, "|I| (default: mes S)");
  av->add_option("--n-max", avdonin_.n_max)->capture_default_str();
  av->add_option("--k", avdonin_.k, "k in [-k, k] (default: whole range)");
  av->callback([this] { cmd_avdonin(); });

  auto* gram = app.add_subcommand("gram", "Gram matrix extreme eigenvalues");
  gram_.src.add(gram);
  gram->add_option("--set", gram_.set, "region S")->required();
  gram->add_option("--matrix", gram_.matrix, "also write the matrix (CSV of re,im)");
  gram->callback([this] { cmd_gram(); });

  auto* bounds = app.add_subcommand("bounds", "lambda_min / lambda_max over radii");
  bounds_.src.add(bounds);
  bounds->add_option("--set", bounds_.set, "region S")->required();
  bounds->add_option("--radii", bounds_.radii)->delimiter(',')->capture_default_str();
  bounds->add_flag("--plot", bounds_.plot, "write lmin.dat");
  bounds->add_option("-o,--output", bounds_.output)->capture_default_str();
  bounds->callback([this] { cmd_bounds(); });

  auto* duality = app.add_subcommand("duality", "primal and dual traces side by side");
  duality->add_option("--alpha", duality_.alpha)->required();
  duality->add_option("--beta", duality_.beta)->required();
  duality->add_option("--interval", duality_.interval)->required();
  duality->add_option("--set", duality_.set)->required();
  duality->add_option("--radii", duality_.radii)->delimiter(',')->capture_default_str();
  duality->add_option("--n-max", duality_.n_max)->capture_default_str();
  duality->add_option("--disc-n", duality_.disc_n)->capture_default_str();
  duality->add_option("--seed", duality_.seed, "translate S by a seeded small rational (0: none)")
      ->capture_default_str();
  duality->add_flag("--plot", duality_.plot, "write lmin.dat and lmin_dual.dat");
  duality->add_option("-o,--output", duality_.output)->capture_default_str();
  duality->callback([this] { cmd_duality(); });

  auto* report = app.add_subcommand("report", "full experiment report");
  report->add_option("--alpha", report_.alpha)->required();
  report->add_option("--beta", report_.beta)->required();
  report->add_option("--interval", report_.interval)->required();
  report->add_option("--set", report_.set)->required();
  report->add_option("--range", report_.range)->capture_default_str();
  report->add_option("--radii", report_.radii)->delimiter(',')->capture_default_str();
  report->add_option("--density-radii", report_.density_radii)->delimiter(',')->capture_default_str();
  report->add_option("--n-max", report_.n_max)->capture_default_str();
  report->add_option("--disc-n", report_.disc_n)->capture_default_str();
  report->add_option("--brs-N", report_.brs_n)->capture_default_str();
  report->add_option("--brs-J", report_.brs_j)->capture_default_str();
  report->add_option("--bmo", report_.bmo)->capture_default_str();
  report->add_option("--seed", report_.seed)->capture_default_str();
  report->add_option("-o,--output", report_.output)->capture_default_str();
  report->callback([this] { cmd_report(); });

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::Success& e) {
    out_ << app.help();
    return kExitOk;
  } catch (const CLI::FileError& e) {
    err << "error: " << e.what() << "\n";
    return kExitNoInput;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const SearchExhausted& e) {
    err << "search exhausted: " << e.what() << "\n";
    return kExitSearchExhausted;
  } catch (const PreconditionError& e) {
    err << "precondition: " << e.what() << "\n";
    return kExitPrecondition;
  } catch (const IoError& e) {
    err << "io: " << e.what() << "\n";
    return kExitNoInput;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitFailure;
  }
  return kExitOk;
}

void Runner::cmd_gen() {
  const auto alg = load_algebra(g_);
  const auto alpha = parse_qvector(alg, gen_.alpha);
  const auto beta = parse_qvector(alg, gen_.beta);
  const auto box = IntBox::cube(alpha.size(), gen_.range);
  PointSet p;
  if (gen_.sequence) {
    p = sequence_points(alpha, beta, box);
  } else {
    if (gen_.window.empty()) throw PreconditionError("gen needs --window (or --sequence)");
    const auto lat = make_special_lattice(alpha, beta);
    p = cut_and_project(lat.gamma, region_arg(alg, gen_.window), box);
  }
  const auto path = out_path(g_, gen_.output);
  save_pointset(path, p);
  emit(Json{{"command", "gen"}, {"points", p.size()}, {"kind", to_string(p.kind)}, {"coverage", p.coverage},
            {"file", path}});
}

void Runner::cmd_dual() {
  const auto alg = load_algebra(g_);
  const auto p = dual_model_points(parse_qvector(alg, dual_.alpha), parse_qvector(alg, dual_.beta),
                                   region_arg(alg, dual_.set), -dual_.range, dual_.range, false);
  const auto path = out_path(g_, dual_.output);
  save_pointset(path, p);
  emit(Json{{"command", "dual"}, {"points", p.size()}, {"coverage", p.coverage}, {"file", path}});
}

void Runner::cmd_periodic() {
  const auto alg = load_algebra(g_);
  const auto alpha = parse_qvector(alg, periodic_.alpha);
  PointSet p;
  double cells = 0;
  if (periodic_.dual) {
    if (periodic_.set.empty()) throw PreconditionError("periodic --dual needs --set");
    p = periodic_dual(alpha, region_arg(alg, periodic_.set), -periodic_.range, periodic_.range);
    cells = static_cast<double>(2 * periodic_.range + 1);
  } else {
    if (periodic_.interval.empty()) throw PreconditionError("periodic needs --interval");
    p = periodic_points(alpha, region_arg(alg, periodic_.interval), IntBox::cube(alpha.size(), periodic_.range));
    cells = std::pow(static_cast<double>(2 * periodic_.range + 1), static_cast<double>(alpha.size()));
  }
  const auto path = out_path(g_, periodic_.output);
  save_pointset(path, p);
  emit(Json{{"command", "periodic"},
            {"points", p.size()},
            {"density", static_cast<double>(p.size()) / cells},
            {"coverage", p.coverage},
            {"file", path}});
}

void Runner::cmd_disc() {
  const auto alg = load_algebra(g_);
  const auto s = region_arg(alg, disc_.set);
  const auto alpha = parse_qvector(alg, disc_.alpha);
  const QVector x0 = disc_.x0.empty() ? QVector{} : parse_qvector(alg, disc_.x0);
  ExperimentReport rep;
  rep.trace = discrepancy_trace(s, alpha, x0, disc_.n, disc_.two_sided);
  const auto path = out_path(g_, disc_.output);
  write_text(path, csv_of_trace(*rep.trace));
  Json j{{"command", "disc"},        {"n_max", disc_.n},
         {"two_sided", disc_.two_sided}, {"max_abs", rep.trace->max_abs},
         {"argmax", rep.trace->argmax},  {"mes", s.volume().to_string()},
         {"file", path}};
  if (disc_.bmo > 0) {
    const auto lengths = dyadic_lengths(disc_.bmo);
    const auto b = bmo_stat(rep.trace->values, lengths);
    j["bmo"] = Json{{"value", b.value}, {"argmax_length", b.argmax_length}, {"argmax_start", b.argmax_start},
                    {"windows", "dyadic lengths 1..2^" + std::to_string(disc_.bmo) + ", all positions"}};
  }
  if (disc_.plot) j["plot"] = emit_plotdata(rep, PlotKind::discrepancy, g_.out_dir);
  emit(j);
}

void Runner::cmd_brs_test() {
  const auto alg = load_algebra(g_);
  const auto st = brs_empirical(region_arg(alg, brs_test_.set), parse_qvector(alg, brs_test_.alpha), brs_test_.n,
                                brs_test_.j);
  emit(Json{{"command", "brs-test"},
            {"max_abs", st.max_abs},
            {"argmax_n", st.argmax_n},
            {"argmax_j", st.argmax_j},
            {"windows", Json{{"N", st.n_max}, {"J", st.j_max}}}});
}

void Runner::cmd_brs_make() {
  const auto alg = load_algebra(g_);
  const auto alpha = parse_qvector(alg, brs_make_.alpha);
  const auto gamma = QValue::parse(alg, brs_make_.gamma);
  const auto path = out_path(g_, brs_make_.output);
  if (brs_make_.k.empty() && brs_make_.u.empty()) {
    const auto p = realize_measure(alpha, gamma, brs_make_.search_bound);
    save_region(path, p.region);
    Json edges = Json::array();
    for (const auto& w : p.edges) edges.push_back(witness_json(w));
    emit(Json{{"command", "brs-make"}, {"mode", "parallelepiped"}, {"region", region_json(p.region)},
              {"edges", edges}, {"file", path}});
    return;
  }
  if (brs_make_.k.empty() || brs_make_.u.empty()) throw PreconditionError("brs-make needs both --K and --U");
  const auto k = std::filesystem::exists(brs_make_.k) ? load_region(brs_make_.k, alg)
                                                      : RegionSet::parse_intervals(alg, brs_make_.k, true);
  const auto u = std::filesystem::exists(brs_make_.u) ? load_region(brs_make_.u, alg)
                                                      : RegionSet::parse_intervals(alg, brs_make_.u, true);
  const auto c = construct_brs_between(k, u, gamma, alpha, brs_make_.epsilon, brs_make_.search_bound);
  save_region(path, c.region);
  Json tile = Json::array();
  for (const auto& w : c.tile) tile.push_back(witness_json(w));
  emit(Json{{"command", "brs-make"},
            {"mode", "between"},
            {"region", region_json(c.region)},
            {"tiles_meeting_k", c.tiles_meeting_k},
            {"free_tiles", c.free_tiles},
            {"has_residual", c.has_residual},
            {"tile", tile},
            {"file", path}});
}

void Runner::cmd_enum() {
  const auto alg = load_algebra(g_);
  const auto p = enum_.src.load(alg);
  const auto mes = measure_arg(alg, enum_.mes, enum_.src);
  const auto e = enumerate_blocks(p);
  const auto d = delta_sequence(e, mes);
  long double sum = 0;
  for (double x : d.delta) sum += x;
  const double c_hat = d.delta.empty() ? 0 : static_cast<double>(sum / d.delta.size());
  std::ostringstream os;
  os << "j,block,rank,lambda,delta\n";
  for (std::size_t i = 0; i < e.size(); ++i)
    os << e.j_first + static_cast<std::int64_t>(i) << "," << e.block[i] << "," << e.rank[i] << ","
       << format_double(e.lambda[i]) << "," << format_double(d.delta[i]) << "\n";
  const auto path = out_path(g_, enum_.output);
  write_text(path, os.str());
  Json j = enumeration_stats(e, d, c_hat);
  j["command"] = "enum";
  j["within_block_order"] = "ascending";
  j["file"] = path;
  emit(j);
}

void Runner::cmd_avdonin() {
  const auto alg = load_algebra(g_);
  const auto p = avdonin_.src.load(alg);
  const auto mes = measure_arg(alg, avdonin_.mes, avdonin_.src);
  const auto len = avdonin_.interval_length.empty() ? mes : QValue::parse(alg, avdonin_.interval_length);
  const auto e = enumerate_blocks(p);
  const auto n = static_cast<std::int64_t>(avdonin_.n_max);
  std::int64_t k_lo = e.j_first - 1;
  std::int64_t k_hi = e.j_last() - n;
  if (avdonin_.k >= 0) {
    k_lo = -avdonin_.k;
    k_hi = avdonin_.k;
  }
  const std::size_t one = 1;
  const auto m = delta_and_means(e, mes, std::span<const std::size_t>(&one, 1), k_lo, k_hi);
  Json j{{"command", "avdonin"}, {"interval_length", len.to_string()}, {"mes", mes.to_string()}};
  j["verdict"] = avdonin_json(avdonin_check(m, len, avdonin_.n_max));
  emit(j);
}

void Runner::cmd_gram() {
  const auto alg = load_algebra(g_);
  const auto p = gram_.src.load(alg);
  const auto s = region_arg(alg, gram_.set);
  const auto g = gram_matrix(p, s);
  const auto e = extreme_eigs(g);
  Json j{{"command", "gram"}, {"size", p.size()}, {"lambda_min", e.min}, {"lambda_max", e.max},
         {"solver", "Hermitian eigensolver, relative tolerance 1e-8"}};
  if (!gram_.matrix.empty()) {
    std::ostringstream os;
    for (Eigen::Index r = 0; r < g.rows(); ++r) {
      for (Eigen::Index c = 0; c < g.cols(); ++c)
        os << (c ? "," : "") << format_double(g(r, c).real()) << "," << format_double(g(r, c).imag());
      os << "\n";
    }
    const auto path = out_path(g_, gram_.matrix);
    write_text(path, os.str());
    j["matrix"] = path;
  }
  emit(j);
}

void Runner::cmd_bounds() {
  const auto alg = load_algebra(g_);
  const auto p = bounds_.src.load(alg);
  ExperimentReport rep;
  rep.bounds = riesz_bound_trace(p, bounds_.radii, region_arg(alg, bounds_.set));
  const auto path = out_path(g_, bounds_.output);
  write_text(path, csv_of_bounds(rep.bounds));
  Json j{{"command", "bounds"}, {"trace", bounds_json(rep.bounds)}, {"file", path}};
  if (bounds_.plot) j["plot"] = emit_plotdata(rep, PlotKind::bounds, g_.out_dir);
  emit(j);
}

void Runner::cmd_duality() {
  const auto alg = load_algebra(g_);
  const auto alpha = parse_qvector(alg, duality_.alpha);
  auto s = region_arg(alg, duality_.set);
  Json j{{"command", "duality"}};
  if (duality_.seed != 0) {
    const auto t = seeded_translate(alg, s.dim(), duality_.seed);
    s = translate_region(s, t);
    j["translate"] = to_string(t);
  }
  DualityOptions opts;
  opts.radii = duality_.radii;
  opts.avdonin_windows = duality_.n_max;
  opts.disc_n = duality_.disc_n;
  const auto r = duality_experiment(alpha, parse_qvector(alg, duality_.beta), region_arg(alg, duality_.interval), s, opts);
  ExperimentReport rep;
  rep.bounds = r.primal;
  rep.dual_bounds = r.dual;
  j["schema_version"] = kReportSchemaVersion;
  j["measures_match"] = r.measures_match;
  if (!r.warning.empty()) j["warning"] = r.warning;
  j["primal_points"] = r.primal_points;
  j["dual_points"] = r.dual_points;
  j["primal"] = bounds_json(r.primal);
  j["dual"] = bounds_json(r.dual);
  j["avdonin"] = avdonin_json(r.avdonin);
  j["dual_disc_max"] = r.dual_disc_max;
  j["disc_n"] = duality_.disc_n;
  const auto path = out_path(g_, duality_.output);
  write_text(path, j.dump(2) + "\n");
  if (duality_.plot) j["plot"] = emit_plotdata(rep, PlotKind::bounds, g_.out_dir);
  j["file"] = path;
  emit(j);
}

void Runner::cmd_report() {
  const auto alg = load_algebra(g_);
  const auto alpha = parse_qvector(alg, report_.alpha);
  const auto beta = parse_qvector(alg, report_.beta);
  const auto interval = region_arg(alg, report_.interval);
  auto s = region_arg(alg, report_.set);

  ExperimentReport rep;
  Json& j = rep.summary;
  j["schema_version"] = kReportSchemaVersion;
  j["config"] = Json{{"algebra", g_.algebra_file.empty() ? "default" : g_.algebra_file},
                     {"alpha", report_.alpha},
                     {"beta", report_.beta},
                     {"interval", report_.interval},
                     {"set", report_.set},
                     {"range", report_.range},
                     {"radii", report_.radii},
                     {"density_radii", report_.density_radii},
                     {"n_max", report_.n_max},
                     {"disc_n", report_.disc_n},
                     {"brs_N", report_.brs_n},
                     {"brs_J", report_.brs_j},
                     {"bmo", report_.bmo},
                     {"seed", report_.seed}};
  if (report_.seed != 0) {
    const auto t = seeded_translate(alg, s.dim(), report_.seed);
    s = translate_region(s, t);
    j["config"]["translate"] = to_string(t);
  }

  const auto lat = make_special_lattice(alpha, beta);
  const auto primal = cut_and_project(lat.gamma, interval, IntBox::cube(alpha.size(), report_.range));
  j["primal"] = Json{{"points", primal.size()},
                     {"coverage", primal.coverage},
                     {"separation", separation(primal)},
                     {"density", density_json(density_estimate(primal, report_.density_radii))}};
  const auto dual = dual_model_points(alpha, beta, s, -report_.range, report_.range, false);
  j["dual"] = Json{{"points", dual.size()},
                   {"coverage", dual.coverage},
                   {"separation", separation(dual)},
                   {"density", density_json(density_estimate(dual, report_.density_radii))}};

  rep.trace = discrepancy_trace(s, alpha, {}, report_.disc_n, false);
  Json disc{{"n_max", report_.disc_n}, {"max_abs", rep.trace->max_abs}, {"argmax", rep.trace->argmax}};
  if (report_.bmo > 0) {
    const auto lengths = dyadic_lengths(report_.bmo);
    const auto b = bmo_stat(rep.trace->values, lengths);
    disc["bmo"] = Json{{"value", b.value}, {"argmax_length", b.argmax_length},
                       {"windows", "dyadic lengths 1..2^" + std::to_string(report_.bmo) + ", all positions"}};
  }
  const auto st = brs_empirical(s, alpha, report_.brs_n, report_.brs_j);
  disc["brs"] = Json{{"max_abs", st.max_abs}, {"argmax_n", st.argmax_n}, {"argmax_j", st.argmax_j},
                     {"windows", Json{{"N", st.n_max}, {"J", st.j_max}}}};
  j["discrepancy"] = disc;

  const auto e = enumerate_blocks(dual, -report_.range, report_.range);
  const std::size_t one = 1;
  const auto n = static_cast<std::int64_t>(report_.n_max);
  const auto m = delta_and_means(e, s.volume(), std::span<const std::size_t>(&one, 1), e.j_first - 1, e.j_last() - n);
  j["enumeration"] = enumeration_stats(e, m.delta, m.c_hat);
  j["avdonin"] = avdonin_json(avdonin_check(m, interval.volume(), report_.n_max));

  DualityOptions opts;
  opts.radii = report_.radii;
  opts.avdonin_windows = report_.n_max;
  opts.disc_n = 0;
  const auto r = duality_experiment(alpha, beta, interval, s, opts);
  rep.bounds = r.primal;
  rep.dual_bounds = r.dual;
  j["duality"] = Json{{"measures_match", r.measures_match},
                      {"primal", bounds_json(r.primal)},
                      {"dual", bounds_json(r.dual)}};
  if (!r.warning.empty()) j["duality"]["warning"] = r.warning;
  j["evidence"] = "finite-range statistics only; no basis property is asserted";

  const auto path = out_path(g_, report_.output);
  write_text(path, j.dump(2) + "\n");
  auto files = emit_plotdata(rep, PlotKind::discrepancy, g_.out_dir);
  for (auto& f : emit_plotdata(rep, PlotKind::bounds, g_.out_dir)) files.push_back(f);
  emit(Json{{"command", "report"}, {"file", path}, {"plot", files}});
}

void write_series(const std::string& dir, const std::string& stem, const std::string& x, const std::string& y,
                  const std::string& rows, std::size_t count, std::vector<std::string>& files) {
  fs::create_directories(dir);
  const auto dat = (fs::path(dir) / (stem + ".dat")).string();
  const auto meta = (fs::path(dir) / (stem + ".json")).string();
  write_file(dat, "# " + x + " " + y + "\n" + rows);
  const Json desc{{"file", stem + ".dat"}, {"columns", {x, y}}, {"rows", count}, {"format", "whitespace-separated"}};
  write_file(meta, desc.dump(2) + "\n");
  files.push_back(dat);
  files.push_back(meta);
}

}  // namespace

std::vector<std::string> emit_plotdata(const ExperimentReport& report, PlotKind kind, const std::string& dir) {
  std::vector<std::string> files;
  if (kind == PlotKind::discrepancy) {
    if (!report.trace || report.trace->n.empty()) throw PreconditionError("report has no discrepancy series");
    std::ostringstream os;
    for (std::size_t i = 0; i < report.trace->n.size(); ++i)
      os << report.trace->n[i] << " " << format_double(report.trace->values[i]) << "\n";
    write_series(dir, "Dn", "n", "D_n", os.str(), report.trace->n.size(), files);
    return files;
  }
  if (report.bounds.empty() && report.dual_bounds.empty()) throw PreconditionError("report has no bounds series");
  auto rows = [](const std::vector<BoundRow>& b) {
    std::ostringstream os;
    for (const auto& r : b) os << format_double(r.radius) << " " << format_double(r.lambda_min) << "\n";
    return os.str();
  };
  if (!report.bounds.empty()) write_series(dir, "lmin", "R", "lambda_min", rows(report.bounds), report.bounds.size(), files);
  if (!report.dual_bounds.empty())
    write_series(dir, "lmin_dual", "R", "lambda_min", rows(report.dual_bounds), report.dual_bounds.size(), files);
  return files;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Runner r(out);
  return r.run(args, err);
}

int run(int argc, const char* const* argv) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run(args, std::cout, std::cerr);
}

}  // namespace quasilab::cli
