#include "cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <variant>

#include "josephson/adjacency.hpp"
#include "josephson/lax.hpp"
#include "josephson/monodromy.hpp"
#include "josephson/painleve.hpp"
#include "josephson/rotation.hpp"

namespace josephson::cli {
namespace {

using json = nlohmann::ordered_json;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Config {
  std::string command;
  std::optional<double> b, a, omega, tol, radius, seed_a, seed_omega, y0;
  std::optional<int> r, k_max;
  std::optional<std::string> grid_b, grid_a, a_range, side, out;
  std::string format = "csv";
};

using Cell = std::variant<double, long, std::string>;

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
  json extra = json::object();  // command-specific metadata
};

std::string num17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

json cell_json(const Cell& c) {
  if (const double* d = std::get_if<double>(&c)) return std::isfinite(*d) ? json(*d) : json(nullptr);
  if (const long* l = std::get_if<long>(&c)) return *l;
  return std::get<std::string>(c);
}

std::string cell_csv(const Cell& c) {
  if (const double* d = std::get_if<double>(&c)) return num17(*d);
  if (const long* l = std::get_if<long>(&c)) return std::to_string(*l);
  return std::get<std::string>(c);
}

template <class T>
T need(const std::optional<T>& v, const char* flag) {
  if (!v) throw UsageError(std::string("missing required option ") + flag);
  return *v;
}

Axis parse_axis(const std::string& spec, const char* flag) {
  Axis ax;
  char c1 = 0, c2 = 0;
  std::istringstream is(spec);
  if (!(is >> ax.lo >> c1 >> ax.hi >> c2 >> ax.n) || c1 != ':' || c2 != ':' || !is.eof())
    throw UsageError(std::string(flag) + " expects lo:hi:n");
  if (ax.n < 2 || !(ax.hi >= ax.lo)) throw UsageError(std::string(flag) + " needs n >= 2 and lo <= hi");
  return ax;
}

std::pair<double, double> parse_range(const std::string& spec, const char* flag) {
  double lo = 0.0, hi = 0.0;
  char c = 0;
  std::istringstream is(spec);
  if (!(is >> lo >> c >> hi) || c != ':' || !is.eof()) throw UsageError(std::string(flag) + " expects lo:hi");
  if (!(hi > lo)) throw UsageError(std::string(flag) + " needs lo < hi");
  return {lo, hi};
}

Tolerances tolerances(const Config& cfg, const Tolerances& base) {
  Tolerances t = base;
  if (cfg.tol) {
    if (!(*cfg.tol > 0.0)) throw UsageError("--tol must be positive");
    t.abs_tol = t.rel_tol = *cfg.tol;
  }
  return t;
}

double check_omega(const Config& cfg) {
  const double w = need(cfg.omega, "--omega");
  if (!(w >= kMinOmega)) throw UsageError("--omega must be at least 1e-3");
  return w;
}

json tol_json(const Tolerances& t) {
  return {{"abs_tol", t.abs_tol}, {"rel_tol", t.rel_tol}, {"max_steps", t.max_steps}};
}

// Every command fills `params` with its effective inputs (defaults included).
using Command = std::function<Table(const Config&, json& params, Tolerances& tol)>;

Table cmd_rotnum(const Config& cfg, json& params, Tolerances& tol) {
  const JosephsonParams p{need(cfg.b, "--b"), need(cfg.a, "--a"), check_omega(cfg)};
  tol = tolerances(cfg, Tolerances{});
  params = {{"b", p.b}, {"a", p.a}, {"omega", p.omega}, {"max_periods", 1024}};
  const RotationEstimate e = rotation_number(p, 1024, tol);
  Table t{{"b", "a", "omega", "rho", "err"}, {}, {}};
  t.rows.push_back({p.b, p.a, p.omega, e.rho, e.error_estimate});
  t.extra = {{"periods_used", e.periods_used}, {"converged", e.converged}};
  return t;
}

Table cmd_scan(const Config& cfg, json& params, Tolerances& tol) {
  const Axis bx = parse_axis(need(cfg.grid_b, "--grid-b"), "--grid-b");
  const Axis ax = parse_axis(need(cfg.grid_a, "--grid-a"), "--grid-a");
  const double w = check_omega(cfg);
  tol = tolerances(cfg, Tolerances{});
  params = {{"grid_b", {bx.lo, bx.hi, bx.n}}, {"grid_a", {ax.lo, ax.hi, ax.n}}, {"omega", w}, {"max_periods", 1024}};
  const TongueGrid g = scan_grid(bx, ax, w, 1024, tol);
  Table t{{"b", "a", "omega", "rho", "err"}, {}, {}};
  for (std::size_t ia = 0; ia < g.a_axis.size(); ++ia)
    for (std::size_t ib = 0; ib < g.b_axis.size(); ++ib)
      t.rows.push_back({g.b_axis[ib], g.a_axis[ia], w, g.at(ib, ia).rho, g.at(ib, ia).error_estimate});
  return t;
}

Table cmd_boundary(const Config& cfg, json& params, Tolerances& tol) {
  const int r = need(cfg.r, "--r");
  const std::string side_s = need(cfg.side, "--side");
  if (side_s != "plus" && side_s != "minus") throw UsageError("--side must be plus or minus");
  const Axis ax = parse_axis(need(cfg.grid_a, "--grid-a"), "--grid-a");
  const double w = check_omega(cfg);
  if (r < 0) throw UsageError("--r must be non-negative");
  if (ax.lo < 0.0) throw UsageError("--grid-a must be non-negative");
  tol = tolerances(cfg, Tolerances{});
  params = {{"r", r}, {"side", side_s}, {"grid_a", {ax.lo, ax.hi, ax.n}}, {"omega", w}, {"b_tol", 1e-6}};
  const std::vector<double> as = ax.nodes();
  const BoundaryCurve c = trace_boundary(r, side_s == "plus" ? Side::Plus : Side::Minus, as, w, tol);
  Table t{{"r", "side", "a", "b"}, {}, {}};
  for (auto [a, b] : c.samples) t.rows.push_back({static_cast<long>(r), side_s, a, b});
  t.extra = {{"omitted_a", c.omitted_a}};
  return t;
}

Table cmd_monodromy(const Config& cfg, json& params, Tolerances& tol) {
  const JosephsonParams p{need(cfg.b, "--b"), need(cfg.a, "--a"), check_omega(cfg)};
  const double radius = cfg.radius.value_or(kDefaultLoopRadius);
  if (!(radius > 0.0)) throw UsageError("--radius must be positive");
  tol = tolerances(cfg, monodromy_tolerances());
  params = {{"b", p.b}, {"a", p.a}, {"omega", p.omega}, {"radius", radius}};
  const MonodromyResult m = monodromy_loop(p, radius, tol);
  Table t{{"b", "a", "omega", "m11_re", "m11_im", "m12_re", "m12_im", "m21_re", "m21_im", "m22_re", "m22_im",
           "identity_residual", "det_residual", "disc_re", "disc_im"},
          {},
          {}};
  std::vector<Cell> row{p.b, p.a, p.omega};
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      row.emplace_back(m.matrix(i, j).real());
      row.emplace_back(m.matrix(i, j).imag());
    }
  row.insert(row.end(), {m.identity_residual, m.det_residual, m.eig_discriminant.real(), m.eig_discriminant.imag()});
  t.rows.push_back(row);
  return t;
}

Table cmd_adjacency_seed(const Config& cfg, json& params, Tolerances& tol) {
  const double b = need(cfg.b, "--b");
  const double w = check_omega(cfg);
  const auto [lo, hi] = parse_range(need(cfg.a_range, "--a-range"), "--a-range");
  if (lo < 0.0) throw UsageError("--a-range must be non-negative");
  SeedSearch s;
  s.tol = tolerances(cfg, monodromy_tolerances());
  tol = s.tol;
  params = {{"b", b}, {"omega", w}, {"a_range", {lo, hi}}, {"step", s.step}, {"certify", s.certify},
            {"polish", s.polish}};
  const AdjacencySeed seed = find_seed(b, w, lo, hi, s);
  Table t{{"b", "a0", "omega0", "residual"}, {}, {}};
  t.rows.push_back({seed.b, seed.a0, seed.omega0, seed.residual});
  return t;
}

Table cmd_adjacency_chain(const Config& cfg, json& params, Tolerances& tol) {
  const double a0 = need(cfg.seed_a, "--seed-a");
  const double w0 = need(cfg.seed_omega, "--seed-omega");
  const double b = need(cfg.b, "--b");
  const int k_max = cfg.k_max.value_or(4);
  if (k_max < 0) throw UsageError("--k-max must be non-negative");
  if (!(a0 > 0.0) || !(w0 >= kMinOmega)) throw UsageError("seed needs a > 0 and omega >= 1e-3");
  ChainOptions o;
  o.tol = tolerances(cfg, monodromy_tolerances());
  tol = o.tol;
  const AdjacencySeed seed{b, a0, w0, verify_point(b, a0, w0, o.tol)};
  params = {{"b", b}, {"seed_a", a0}, {"seed_omega", w0}, {"k_max", k_max}, {"formula", "zero_ratio"}};
  Table t{{"k", "a_star", "omega_star", "residual"}, {}, {}};
  for (const ChainPoint& p : chain(seed, k_max, o))
    t.rows.push_back({static_cast<long>(p.k), p.a_star, p.omega_star, p.verify_residual});
  t.extra = {{"seed_residual", seed.residual}};
  return t;
}

Table cmd_painleve_verify(const Config& cfg, json& params, Tolerances& tol) {
  const double b = need(cfg.b, "--b");
  const double y0 = cfg.y0.value_or(0.0);
  tol = tolerances(cfg, Tolerances{});
  params = {{"b", b}, {"y0", y0}, {"tau_range", {0.5, 20.0}}, {"t_range", {0.25, 9.0}}, {"exclusion", 0.05}};
  const BesselP3Solution sol = bessel_w({b, y0});
  const std::vector<double> sing = sol.singular_points();  // poles, then zeros of w
  std::vector<double> taus, ts, tsing;
  for (int i = 0; i <= 1950; ++i) taus.push_back(0.5 + 0.01 * i);
  for (int i = 0; i <= 875; ++i) ts.push_back(0.25 + 0.01 * i);
  for (double s : sing) tsing.push_back(s * s);
  Table t{{"check", "value"}, {}, {}};
  const ResidualReport p3 = p3_residual(sol, params_from_b(b), taus);
  t.rows.push_back({std::string("p3_residual"), p3.max_residual});
  const ScalarFn yfn = [&](double tt) { return y_of_t(sol, tt); };
  t.rows.push_back({std::string("p3_tilde_residual"), p3_tilde_residual(yfn, b, ts, tsing).max_residual});
  t.rows.push_back({std::string("riccati_derivative_mismatch"), p3.derivative_mismatch});
  for (std::size_t k = 0; k < 3 && k < sol.poles().size(); ++k) {
    t.rows.push_back({"pole_" + std::to_string(k + 1), sol.poles()[k]});
    t.rows.push_back({"residue_" + std::to_string(k + 1), pole_residue(sol, sol.poles()[k]).value});
  }
  return t;
}

Table cmd_lax_verify(const Config& cfg, json& params, Tolerances& tol) {
  const double b = need(cfg.b, "--b");
  const double y0 = cfg.y0.value_or(0.0);
  tol = tolerances(cfg, monodromy_tolerances());
  IsoFamilyParams p;
  p.b = b;
  p.combo = {b, y0};
  params = {{"b", b},           {"y0", y0},         {"b2_0", p.b2_0},       {"C1_tilde", p.C1_tilde},
            {"t_ref", p.t_ref}, {"z", "1, 2i, -1.5"}, {"t", {1.0, 2.0, 3.0}}, {"drift_t", {1.0, 2.0, 4.0, 7.0, 10.0}}};
  const IsoFamily fam(p);
  const cplx zs[] = {{1.0, 0.0}, {0.0, 2.0}, {-1.5, 0.0}};
  const double ts[] = {1.0, 2.0, 3.0};
  const double tl[] = {1.0, 2.0, 4.0, 7.0, 10.0};
  double eig = 0.0, trb = 0.0;
  for (double t : ts) {
    const FamilyCoeffs c = family_at(fam, t);
    eig = std::max(eig, std::abs(c.A.trace() - 0.5) + std::abs(c.A.determinant()));
    trb = std::max(trb, std::abs(c.B.trace() + b));
  }
  Table t{{"check", "value"}, {}, {}};
  t.rows.push_back({std::string("A_spectrum_error"), eig});
  t.rows.push_back({std::string("B_trace_error"), trb});
  t.rows.push_back({std::string("zero_curvature_residual"), zero_curvature_residual(fam, zs, ts).max_residual});
  t.rows.push_back({std::string("isomonodromy_drift"), isomonodromy_drift(fam, tl, 1.0, tol)});
  return t;
}

const std::map<std::string, Command>& commands() {
  static const std::map<std::string, Command> m = {
      {"rotnum", cmd_rotnum},
      {"scan", cmd_scan},
      {"boundary", cmd_boundary},
      {"monodromy", cmd_monodromy},
      {"adjacency-seed", cmd_adjacency_seed},
      {"adjacency-chain", cmd_adjacency_chain},
      {"painleve-verify", cmd_painleve_verify},
      {"lax-verify", cmd_lax_verify},
  };
  return m;
}

void add_options(CLI::App& app, Config& cfg) {
  app.add_option("--b", cfg.b, "b parameter");
  app.add_option("--a", cfg.a, "a parameter");
  app.add_option("--omega", cfg.omega, "omega parameter");
  app.add_option("--tol", cfg.tol, "absolute and relative integrator tolerance");
  app.add_option("--radius", cfg.radius, "monodromy loop radius");
  app.add_option("--grid-b", cfg.grid_b, "b grid lo:hi:n");
  app.add_option("--grid-a", cfg.grid_a, "a grid lo:hi:n");
  app.add_option("--r", cfg.r, "tongue index");
  app.add_option("--side", cfg.side, "plus|minus");
  app.add_option("--a-range", cfg.a_range, "a range lo:hi");
  app.add_option("--k-max", cfg.k_max, "chain length");
  app.add_option("--seed-a", cfg.seed_a, "seed a0");
  app.add_option("--seed-omega", cfg.seed_omega, "seed omega0");
  app.add_option("--y0", cfg.y0, "Bessel mixing constant");
  app.add_option("--out", cfg.out, "output path (default stdout)");
  app.add_option("--format", cfg.format, "csv|json")->check(CLI::IsMember({"csv", "json"}));
}

void write_artifact(std::ostream& os, const Config& cfg, const Table& t, const json& meta) {
  if (cfg.format == "json") {
    json doc;
    doc["metadata"] = meta;
    doc["rows"] = json::array();
    for (const auto& row : t.rows) {
      json rec = json::object();
      for (std::size_t i = 0; i < t.columns.size(); ++i) rec[t.columns[i]] = cell_json(row[i]);
      doc["rows"].push_back(rec);
    }
    os << doc.dump(2) << '\n';
    return;
  }
  os << "# " << meta.dump() << '\n';
  for (std::size_t i = 0; i < t.columns.size(); ++i) os << (i ? "," : "") << t.columns[i];
  os << '\n';
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << cell_csv(row[i]);
    os << '\n';
  }
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Josephson junction tongues, monodromy and Painleve checks"};
  app.require_subcommand(1);
  Config cfg;
  for (const auto& [name, _] : commands()) {
    CLI::App* sub = app.add_subcommand(name);
    add_options(*sub, cfg);
    sub->callback([&cfg, name = name] { cfg.command = name; });
  }

  std::vector<std::string> rev(args.rbegin(), args.rend() - (args.empty() ? 0 : 1));
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << e.what() << '\n';
    return kExitUsage;
  }

  const auto t0 = std::chrono::steady_clock::now();
  json params;
  Tolerances tol;
  Table table;
  try {
    table = commands().at(cfg.command)(cfg, params, tol);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const DomainError& e) {
    err << "invalid input: " << e.what() << '\n';
    return kExitUsage;
  } catch (const NotFoundError& e) {
    err << "not found: " << e.what() << '\n';
    return kExitNotFound;
  } catch (const NumericalError& e) {
    err << "numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  }
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  json meta;
  meta["command"] = cfg.command;
  meta["parameters"] = params;
  meta["tolerances"] = tol_json(tol);
  meta["format"] = cfg.format;
  meta["version"] = kVersion;
  meta["wall_time_s"] = wall;
  for (auto& [k, v] : table.extra.items()) meta[k] = v;

  if (cfg.out) {
    std::ofstream f(*cfg.out);
    if (!f) {
      err << "cannot open " << *cfg.out << '\n';
      return kExitUsage;
    }
    write_artifact(f, cfg, table, meta);
  } else {
    write_artifact(out, cfg, table, meta);
  }
  return kExitOk;
}

}  // namespace josephson::cli
