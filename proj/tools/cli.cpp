#include "cli.hpp"

#include <CLI11.hpp>
#include <cmath>
#include <filesystem>
#include <functional>
#include <json.hpp>
#include <optional>
#include <ostream>
#include <sstream>

#include "sspf/ellipticity.hpp"
#include "sspf/error.hpp"
#include "sspf/exact.hpp"
#include "sspf/field.hpp"
#include "sspf/gas.hpp"
#include "sspf/io.hpp"
#include "sspf/solver.hpp"

namespace sspf::cli {
namespace {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) out.push_back(cur);
  return out;
}

double number(const std::string& s) {
  try {
    return io::parse_double(s);
  } catch (const FormatError&) {
    throw UsageError("expected a number, got '" + s + "'");
  }
}

std::vector<double> numbers(const std::string& s) {
  std::vector<double> out;
  for (const std::string& p : split(s, ',')) out.push_back(number(p));
  return out;
}

std::pair<double, double> interval(const std::string& s) {
  const auto parts = split(s, ':');
  if (parts.size() != 2) throw UsageError("expected lo:hi, got '" + s + "'");
  return {number(parts[0]), number(parts[1])};
}

GridSpec parse_grid(const std::string& dims, const std::string& extent, const std::string& walls) {
  const auto d = split(dims, 'x');
  const auto e = split(extent, ',');
  if (d.empty() || d.size() > 2 || d.size() != e.size()) {
    throw UsageError("--grid and --extent must both be 1D (N, lo:hi) or 2D (NxM, a:b,c:d)");
  }
  std::array<int, 2> n{1, 1};
  for (std::size_t a = 0; a < d.size(); ++a) {
    const double v = number(d[a]);
    if (v != std::floor(v) || v < 1) throw UsageError("bad node count '" + d[a] + "'");
    n[a] = static_cast<int>(v);
  }
  GridSpec g;
  if (d.size() == 1) {
    const auto [lo, hi] = interval(e[0]);
    g = GridSpec::line(n[0], lo, hi);
  } else {
    const auto [x0, x1] = interval(e[0]);
    const auto [y0, y1] = interval(e[1]);
    g = GridSpec::from_extent(n, {x0, y0}, {x1, y1});
  }
  if (!walls.empty()) {
    for (const std::string& w : split(walls, ',')) {
      const auto edge = parse_edge(w);
      if (!edge) throw UsageError("unknown edge '" + w + "'");
      g.walls[static_cast<int>(*edge)] = true;
    }
  }
  g.validate();
  return g;
}

Edge parse_edge_or_throw(const std::string& s) {
  const auto e = parse_edge(s);
  if (!e) throw UsageError("unknown edge '" + s + "'");
  return *e;
}

struct GasOptions {
  double gamma = 1.4;
  double c0 = 1.0;
  double rho0 = 1.0;
  double A = 0.0;

  void add(CLI::App* app) {
    app->add_option("--gamma", gamma, "Polytropic exponent")->capture_default_str();
    app->add_option("--c0", c0, "Reference sound speed")->capture_default_str();
    app->add_option("--rho0", rho0, "Reference density")->capture_default_str();
    app->add_option("--A", A, "Bernoulli constant")->capture_default_str();
  }
  GasModel model() const {
    GasModel g{gamma, c0, rho0, A};
    g.validate();
    return g;
  }
};

fs::path manifest_path(const fs::path& out) {
  fs::path p = out;
  p.replace_extension(".manifest.json");
  return p;
}

struct Manifest {
  std::string command;
  std::vector<std::string> args;
  std::optional<GasModel> gas;
  std::optional<GridSpec> grid;
  std::optional<SolverConfig> config;
  std::vector<std::string> outputs;

  void write(const fs::path& primary) const {
    ordered_json j{{"tool", "sspf"}, {"version", std::string(io::version())}, {"command", command}};
    j["arguments"] = args;
    j["gas"] = gas ? ordered_json::parse(io::gas_json(*gas)) : ordered_json(nullptr);
    j["grid"] = grid ? ordered_json::parse(io::grid_json(*grid)) : ordered_json(nullptr);
    j["config"] =
        config ? ordered_json::parse(io::solver_config_json(*config)) : ordered_json(nullptr);
    j["outputs"] = outputs;
    j["warnings"] = warnings();
    io::write_text_atomic(manifest_path(primary), j.dump(2) + "\n");
  }

  std::vector<std::string> warnings() const {
    std::vector<std::string> w;
    if (gas && gas->gamma < 0.0 && gas->gamma > -1.0) {
      w.emplace_back("gamma in (-1, 0): formulas apply but the gas is physically unusual");
    }
    return w;
  }
};

std::optional<double> parse_chat(const std::string& s) {
  if (s == "auto") return std::nullopt;
  const double v = number(s);
  if (!(v > 0.0)) throw UsageError("--chat must be 'auto' or a positive number");
  return v;
}

struct Runner {
  std::ostream& out;
  std::ostream& err;
  std::vector<std::string> args;
  Manifest manifest;

  void finish(const fs::path& primary) {
    manifest.args = args;
    manifest.write(primary);
    for (const std::string& w : manifest.warnings()) err << "warning: " << w << "\n";
  }
};

// ---- exact ---------------------------------------------------------------

struct UniformCmd {
  GasOptions gas;
  std::string v = "0,0";
  double a_prime = 0.0;
  std::string grid = "33x33";
  std::string extent = "-0.5:0.5,-0.5:0.5";
  std::string walls;
  std::string variable = "chi";
  std::string out;

  int operator()(Runner& r) const {
    const GasModel g = gas.model();
    const GridSpec grid_spec = parse_grid(grid, extent, walls);
    const std::vector<double> vel = numbers(v);
    if (vel.size() != static_cast<std::size_t>(grid_spec.dim)) {
      throw UsageError("--v needs one component per grid dimension");
    }
    ScalarField f = uniform_flow(vel, a_prime, g, grid_spec);
    if (variable == "psi") f = to_psi(f);
    io::write_field(out, f, g);
    r.out << "wrote " << out << " (c^2 = " << io::format_double(uniform_flow_c2(g, vel, a_prime))
          << ")\n";
    r.manifest = {"exact uniform", {}, g, grid_spec, std::nullopt,
                  {out, io::sidecar_path(out).string()}};
    r.finish(out);
    return kExitOk;
  }
};

struct OneDCmd {
  GasOptions gas;
  std::string branch = "affine";
  double xi0 = 0.0;
  double chi0 = 0.0;
  double dchi0 = 0.0;
  std::string range = "-1:1";
  int n = 65;
  std::string out;

  int operator()(Runner& r) const {
    const GasModel g = gas.model();
    OneDBranch b;
    if (branch == "affine") {
      b = OneDBranch::Affine;
    } else if (branch == "rarefaction+" || branch == "rarefaction-plus") {
      b = OneDBranch::RarefactionPlus;
    } else if (branch == "rarefaction-" || branch == "rarefaction-minus") {
      b = OneDBranch::RarefactionMinus;
    } else {
      throw UsageError("unknown branch '" + branch + "'");
    }
    const auto [lo, hi] = interval(range);
    const Profile1D p = solve_1d(g, b, {xi0, chi0, dchi0}, lo, hi, n);
    const ScalarField f = to_field(p);
    io::write_text_atomic(out, io::profile_csv(p));
    io::write_text_atomic(io::sidecar_path(out), io::field_metadata_json(f, g));
    r.out << "wrote " << out << " (" << p.xi.size() << " nodes";
    if (p.truncated) r.out << ", truncated at a sonic point";
    r.out << ")\n";
    r.manifest = {"exact oned", {}, g, f.grid(), std::nullopt,
                  {out, io::sidecar_path(out).string()}};
    r.finish(out);
    return kExitOk;
  }
};

struct RadialCmd {
  GasOptions gas;
  int dim = 2;
  double r0 = 1.0;
  double chi0 = 0.0;
  double dchi0 = 0.0;
  double r1 = 2.0;
  int n = 101;
  std::string grid;
  std::string extent;
  std::string walls;
  std::string center = "0,0";
  double tolerance = 1e-10;
  std::string out;

  int operator()(Runner& r) const {
    const GasModel g = gas.model();
    const InitialCondition ic{r0, chi0, dchi0};
    RadialOptions opt;
    opt.tolerance = tolerance;
    if (!grid.empty()) {
      const GridSpec gs = parse_grid(grid, extent, walls);
      const std::vector<double> c = numbers(center);
      if (c.size() != 2) throw UsageError("--center needs two components");
      const ScalarField f = sample_radial(g, ic, gs, {c[0], c[1]}, opt);
      io::write_field(out, f, g);
      r.out << "wrote " << out << "\n";
      r.manifest = {"exact radial", {}, g, gs, std::nullopt,
                    {out, io::sidecar_path(out).string()}};
      r.finish(out);
      return kExitOk;
    }
    const RadialProfile p = solve_radial(g, dim, ic, r1, n, opt);
    io::write_text_atomic(out, io::profile_csv(p));
    r.out << "wrote " << out << " (" << p.r.size() << " samples";
    if (p.sonic_stop) r.out << ", sonic at r = " << io::format_double(*p.sonic_radius);
    r.out << ")\n";
    r.manifest = {"exact radial", {}, g, std::nullopt, std::nullopt, {out}};
    r.finish(out);
    return kExitOk;
  }
};

// ---- solve ---------------------------------------------------------------

struct SolveCmd {
  std::string boundary;
  std::string config;
  std::string initial;
  std::optional<int> max_iters;
  std::optional<double> residual_tol;
  bool strict = false;
  std::string out;
  std::string report;

  int operator()(Runner& r) const {
    const io::LoadedField b = io::read_field(boundary);
    SolverConfig cfg = config.empty() ? SolverConfig{} : io::read_solver_config(config);
    if (max_iters) cfg.max_newton_iters = *max_iters;
    if (residual_tol) cfg.residual_tol = *residual_tol;
    std::optional<ScalarField> guess;
    if (!initial.empty()) guess = io::read_field(initial).field;
    const SolveResult res = solve_dirichlet(b.field.grid(), b.field, b.gas, cfg, guess);
    io::write_field(out, res.solution, b.gas);
    const fs::path rep = report.empty() ? fs::path(out).replace_extension(".report.json")
                                        : fs::path(report);
    io::write_text_atomic(rep, io::solve_report_json(res.report));
    r.out << (res.report.converged ? "converged" : "not converged") << " after "
          << res.report.iterations << " iterations, residual "
          << io::format_double(res.report.residual_history.back()) << "\n";
    if (res.report.guard_activations > 0 || !res.report.uniformly_elliptic) {
      r.err << "warning: ellipticity guard activated (" << res.report.guard_activations
            << " line-search reductions, " << res.report.guard_nodes << " nodes at the guard)\n";
    }
    r.manifest = {"solve", {}, b.gas, b.field.grid(), cfg,
                  {out, io::sidecar_path(out).string(), rep.string()}};
    r.finish(out);
    if (!res.report.converged) return kExitFailure;
    if (strict && !res.report.uniformly_elliptic) return kExitFailure;
    return kExitOk;
  }
};

// ---- classify / residual / transform / reflect / export -----------------

struct ClassifyCmd {
  std::string field;
  double tol_L = kDefaultTolL;
  std::string out;

  int operator()(Runner& r) const {
    const io::LoadedField f = io::read_field(field);
    const std::vector<PointState> states = point_states(f.field, f.gas, tol_L);
    const GridSpec& g = f.field.grid();
    std::string csv = g.dim == 2 ? "xi1,xi2,L,type\n" : "xi,L,type\n";
    std::array<std::size_t, 3> counts{};
    for (const PointState& s : states) {
      csv += io::format_double(s.xi[0]) + ',';
      if (g.dim == 2) csv += io::format_double(s.xi[1]) + ',';
      csv += io::format_double(s.L) + ',' + std::string(to_string(s.type)) + '\n';
      ++counts[static_cast<int>(s.type)];
    }
    io::write_text_atomic(out, csv);
    r.out << "elliptic " << counts[0] << ", parabolic " << counts[1] << ", hyperbolic "
          << counts[2] << "\n";
    r.manifest = {"classify", {}, f.gas, g, std::nullopt, {out}};
    r.finish(out);
    return kExitOk;
  }
};

struct ResidualCmd {
  std::string field;
  std::string form = "chi";
  std::string out;

  int operator()(Runner& r) const {
    const io::LoadedField f = io::read_field(field);
    ScalarField res = form == "psi"   ? residual_psi(to_psi(f.field), f.gas)
                      : form == "chi" ? residual_chi(to_chi(f.field), f.gas)
                                      : throw UsageError("--form must be chi or psi");
    const ResidualNorms n = residual_norms(res);
    io::write_field(out, res, f.gas);
    r.out << "max " << io::format_double(n.max_abs) << " l2 " << io::format_double(n.l2) << "\n";
    r.manifest = {"residual", {}, f.gas, f.field.grid(), std::nullopt,
                  {out, io::sidecar_path(out).string()}};
    r.finish(out);
    return kExitOk;
  }
};

struct TransformCmd {
  std::string field;
  std::string translate;
  std::optional<int> rotate;
  std::optional<double> scale;
  std::string out;

  int operator()(Runner& r) const {
    const int chosen = (!translate.empty()) + rotate.has_value() + scale.has_value();
    if (chosen != 1) throw UsageError("give exactly one of --translate, --rotate, --scale");
    const io::LoadedField f = io::read_field(field);
    Symmetry op = Scale{1.0};
    if (!translate.empty()) {
      const auto v = numbers(translate);
      if (v.size() != 2) throw UsageError("--translate needs two components");
      op = Translate{{v[0], v[1]}};
    } else if (rotate) {
      op = Rotate{*rotate};
    } else {
      op = Scale{*scale};
    }
    const TransformResult t = transform(f.field, f.gas, op);
    io::write_field(out, t.field, t.gas);
    r.out << "wrote " << out << "\n";
    r.manifest = {"transform", {}, t.gas, t.field.grid(), std::nullopt,
                  {out, io::sidecar_path(out).string()}};
    r.finish(out);
    return kExitOk;
  }
};

struct ReflectCmd {
  std::string field;
  std::string edge;
  std::optional<double> slip_tol;
  bool restrict_mode = false;
  std::string out;

  int operator()(Runner& r) const {
    const io::LoadedField f = io::read_field(field);
    const Edge e = parse_edge_or_throw(edge);
    const ScalarField g = restrict_mode ? restrict_half(f.field, e)
                                        : reflect_even(f.field, e, slip_tol);
    io::write_field(out, g, f.gas);
    r.out << "wrote " << out << "\n";
    r.manifest = {restrict_mode ? "reflect --restrict" : "reflect", {}, f.gas, g.grid(),
                  std::nullopt, {out, io::sidecar_path(out).string()}};
    r.finish(out);
    return kExitOk;
  }
};

struct ExportCmd {
  std::string field;
  std::string as = "states";
  std::string out;

  int operator()(Runner& r) const {
    const io::LoadedField f = io::read_field(field);
    const GridSpec& g = f.field.grid();
    std::vector<std::string> outputs{out};
    if (as == "chi" || as == "psi") {
      io::write_field(out, as == "chi" ? to_chi(f.field) : to_psi(f.field), f.gas);
      outputs.push_back(io::sidecar_path(out).string());
    } else if (as == "states") {
      const std::vector<PointState> states = point_states(f.field, f.gas);
      std::string csv = g.dim == 2 ? "xi1,xi2,chi,psi,c2,rho,L,type,v1,v2\n"
                                   : "xi,chi,psi,c2,rho,L,type,v\n";
      for (const PointState& s : states) {
        const double psi = s.chi + 0.5 * (s.xi[0] * s.xi[0] + s.xi[1] * s.xi[1]);
        csv += io::format_double(s.xi[0]) + ',';
        if (g.dim == 2) csv += io::format_double(s.xi[1]) + ',';
        csv += io::format_double(s.chi) + ',' + io::format_double(psi) + ',' +
               io::format_double(s.c2) + ',' + io::format_double(s.rho) + ',' +
               io::format_double(s.L) + ',' + std::string(to_string(s.type)) + ',' +
               io::format_double(s.velocity[0]);
        if (g.dim == 2) csv += ',' + io::format_double(s.velocity[1]);
        csv += '\n';
      }
      io::write_text_atomic(out, csv);
    } else {
      throw UsageError("--as must be chi, psi or states");
    }
    r.out << "wrote " << out << "\n";
    r.manifest = {"export", {}, f.gas, g, std::nullopt, outputs};
    r.finish(out);
    return kExitOk;
  }
};

// ---- verification --------------------------------------------------------

std::optional<NodeIndex> parse_node(const std::string& s) {
  if (s.empty()) return std::nullopt;
  const auto v = numbers(s);
  if (v.size() != 2) throw UsageError("--maxpoint needs i,j");
  return NodeIndex{static_cast<int>(v[0]), static_cast<int>(v[1])};
}

struct VerifyCmd {
  std::string field;
  double delta = 0.05;
  std::string chat = "auto";
  double k_ver = 10.0;
  std::string maxpoint;
  bool strict = false;
  std::string out;

  int operator()(Runner& r) const {
    const io::LoadedField f = io::read_field(field);
    const double c_hat = parse_chat(chat).value_or(auto_c_hat(f.field, f.gas));
    const BarrierSpec b = make_barrier(f.field.grid(), c_hat, delta);
    const EllipticityReport rep = verify_max_principle(f.field, f.gas, b, delta, k_ver);
    ordered_json j = ordered_json::parse(io::ellipticity_report_json(rep));
    if (const auto node = parse_node(maxpoint)) {
      j["diagnostics"] = ordered_json::parse(io::diagnostics_json(
          maxpoint_diagnostics(f.field, f.gas, b, *node)));
    }
    io::write_text_atomic(out, j.dump(2) + "\n");
    r.out << to_string(rep.verdict) << "\n";
    r.manifest = {"verify", {}, f.gas, f.field.grid(), std::nullopt, {out}};
    r.finish(out);
    return strict && rep.verdict == Verdict::ViolationCandidate ? kExitFailure : kExitOk;
  }
};

struct SweepCmd {
  std::string field;
  std::string deltas = "0.001,0.01,0.05,0.1";
  std::string chat = "auto";
  double k_ver = 10.0;
  bool strict = false;
  std::string out;

  int operator()(Runner& r) const {
    const io::LoadedField f = io::read_field(field);
    const double c_hat = parse_chat(chat).value_or(auto_c_hat(f.field, f.gas));
    const std::vector<double> ds = numbers(deltas);
    const DeltaSweep s = sweep_delta(f.field, f.gas, c_hat, ds, k_ver);
    io::write_text_atomic(out, io::delta_sweep_json(s));
    bool violation = false;
    for (const DeltaSweepEntry& e : s.entries) {
      r.out << "delta " << io::format_double(e.delta) << ": " << to_string(e.report.verdict)
            << "\n";
      violation = violation || e.report.verdict == Verdict::ViolationCandidate;
    }
    if (s.empirical_delta_margin) {
      r.out << "empirical delta margin " << io::format_double(*s.empirical_delta_margin) << "\n";
    } else {
      r.out << "no tested delta is free of violation candidates\n";
    }
    r.manifest = {"sweep-delta", {}, f.gas, f.field.grid(), std::nullopt, {out}};
    r.finish(out);
    return strict && violation ? kExitFailure : kExitOk;
  }
};

struct WallCheckCmd {
  std::string field;
  std::string edge;
  std::optional<double> slip_tol;
  bool strict = false;
  std::string out;

  int operator()(Runner& r) const {
    const io::LoadedField f = io::read_field(field);
    const WallNorms w = check_wall_conditions(f.field, f.gas, parse_edge_or_throw(edge), slip_tol);
    io::write_text_atomic(out, io::wall_norms_json(w));
    r.out << (w.slip_violated ? "slip violated" : "slip holds") << ": max |chi_n| "
          << io::format_double(w.chi_n) << "\n";
    r.manifest = {"wall-check", {}, f.gas, f.field.grid(), std::nullopt, {out}};
    r.finish(out);
    return strict && w.slip_violated ? kExitFailure : kExitOk;
  }
};

template <typename Cmd>
void bind(CLI::App* sub, Cmd& cmd, std::function<int(Runner&)>& action) {
  sub->callback([&cmd, &action] { action = [&cmd](Runner& r) { return cmd(r); }; });
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Self-similar potential flow: exact solutions, solver and ellipticity checks",
               "sspf"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(io::version()));
  std::function<int(Runner&)> action;

  UniformCmd uniform;
  OneDCmd oned;
  RadialCmd radial;
  SolveCmd solve;
  ClassifyCmd classify;
  ResidualCmd residual;
  TransformCmd transform_cmd;
  ReflectCmd reflect;
  VerifyCmd verify;
  SweepCmd sweep;
  WallCheckCmd wall;
  ExportCmd export_cmd;

  CLI::App* exact = app.add_subcommand("exact", "Exact solutions");
  exact->require_subcommand(1);
  {
    CLI::App* s = exact->add_subcommand("uniform", "Constant-velocity state on a grid");
    uniform.gas.add(s);
    s->add_option("--v", uniform.v, "Velocity components, comma separated")->capture_default_str();
    s->add_option("--aprime", uniform.a_prime, "Additive constant")->capture_default_str();
    s->add_option("--grid", uniform.grid, "Node counts NxM (or N)")->capture_default_str();
    s->add_option("--extent", uniform.extent, "a:b,c:d (or a:b)")->capture_default_str();
    s->add_option("--walls", uniform.walls, "Wall edges, comma separated");
    s->add_option("--variable", uniform.variable, "chi or psi")
        ->check(CLI::IsMember({"chi", "psi"}))
        ->capture_default_str();
    s->add_option("--out", uniform.out, "Output CSV")->required();
    bind(s, uniform, action);
  }
  {
    CLI::App* s = exact->add_subcommand("oned", "One-dimensional branches");
    oned.gas.add(s);
    s->add_option("--branch", oned.branch, "affine, rarefaction+ or rarefaction-")
        ->capture_default_str();
    s->add_option("--xi0", oned.xi0)->capture_default_str();
    s->add_option("--chi0", oned.chi0)->capture_default_str();
    s->add_option("--dchi0", oned.dchi0)->capture_default_str();
    s->add_option("--interval", oned.range, "lo:hi")->capture_default_str();
    s->add_option("--n", oned.n, "Samples")->capture_default_str();
    s->add_option("--out", oned.out, "Output CSV")->required();
    bind(s, oned, action);
  }
  {
    CLI::App* s = exact->add_subcommand("radial", "Radial reduction (profile or sampled field)");
    radial.gas.add(s);
    s->add_option("--dim", radial.dim, "Spatial dimension")->capture_default_str();
    s->add_option("--r0", radial.r0)->capture_default_str();
    s->add_option("--chi0", radial.chi0)->capture_default_str();
    s->add_option("--dchi0", radial.dchi0)->capture_default_str();
    s->add_option("--r1", radial.r1)->capture_default_str();
    s->add_option("--n", radial.n)->capture_default_str();
    s->add_option("--grid", radial.grid, "Sample onto a grid NxM instead of a profile");
    s->add_option("--extent", radial.extent, "a:b,c:d");
    s->add_option("--walls", radial.walls);
    s->add_option("--center", radial.center)->capture_default_str();
    s->add_option("--tolerance", radial.tolerance)->capture_default_str();
    s->add_option("--out", radial.out, "Output CSV")->required();
    bind(s, radial, action);
  }
  {
    CLI::App* s = app.add_subcommand("solve", "Dirichlet solve on a rectangle");
    s->add_option("--boundary", solve.boundary, "Field CSV carrying boundary data")->required();
    s->add_option("--config", solve.config, "key=value solver config file");
    s->add_option("--initial", solve.initial, "Initial guess field CSV");
    s->add_option("--max-iters", solve.max_iters);
    s->add_option("--residual-tol", solve.residual_tol);
    s->add_flag("--strict", solve.strict, "Fail when the guard fired at convergence");
    s->add_option("--out", solve.out, "Solution CSV")->required();
    s->add_option("--report", solve.report, "Report JSON (default <out>.report.json)");
    bind(s, solve, action);
  }
  {
    CLI::App* s = app.add_subcommand("classify", "Pseudo-Mach number and type per node");
    s->add_option("--field", classify.field)->required();
    s->add_option("--tol-L", classify.tol_L)->capture_default_str();
    s->add_option("--out", classify.out)->required();
    bind(s, classify, action);
  }
  {
    CLI::App* s = app.add_subcommand("residual", "Nodal residual of the potential equation");
    s->add_option("--field", residual.field)->required();
    s->add_option("--form", residual.form, "chi or psi")->capture_default_str();
    s->add_option("--out", residual.out)->required();
    bind(s, residual, action);
  }
  {
    CLI::App* s = app.add_subcommand("transform", "Translate, rotate or scale a field");
    s->add_option("--field", transform_cmd.field)->required();
    s->add_option("--translate", transform_cmd.translate, "v1,v2 (grid aligned)");
    s->add_option("--rotate", transform_cmd.rotate, "Quarter turns counter-clockwise");
    s->add_option("--scale", transform_cmd.scale, "Velocity scale s > 0");
    s->add_option("--out", transform_cmd.out)->required();
    bind(s, transform_cmd, action);
  }
  {
    CLI::App* s = app.add_subcommand("reflect", "Even reflection across a wall edge");
    s->add_option("--field", reflect.field)->required();
    s->add_option("--edge", reflect.edge, "left, right, bottom or top")->required();
    s->add_option("--slip-tol", reflect.slip_tol);
    s->add_flag("--restrict", reflect.restrict_mode, "Keep the half next to --edge instead");
    s->add_option("--out", reflect.out)->required();
    bind(s, reflect, action);
  }
  {
    CLI::App* s = app.add_subcommand("verify", "Discrete maximum check of L^2 + b");
    s->add_option("--field", verify.field)->required();
    s->add_option("--delta", verify.delta)->capture_default_str();
    s->add_option("--chat", verify.chat, "'auto' or an upper bound on c")->capture_default_str();
    s->add_option("--k-ver", verify.k_ver)->capture_default_str();
    s->add_option("--maxpoint", verify.maxpoint, "i,j: add max-point diagnostics");
    s->add_flag("--strict", verify.strict, "Exit 1 on ViolationCandidate");
    s->add_option("--out", verify.out, "Report JSON")->required();
    bind(s, verify, action);
  }
  {
    CLI::App* s = app.add_subcommand("sweep-delta", "Verify over a list of delta values");
    s->add_option("--field", sweep.field)->required();
    s->add_option("--deltas", sweep.deltas)->capture_default_str();
    s->add_option("--chat", sweep.chat)->capture_default_str();
    s->add_option("--k-ver", sweep.k_ver)->capture_default_str();
    s->add_flag("--strict", sweep.strict);
    s->add_option("--out", sweep.out)->required();
    bind(s, sweep, action);
  }
  {
    CLI::App* s = app.add_subcommand("wall-check", "Slip-wall identities on one edge");
    s->add_option("--field", wall.field)->required();
    s->add_option("--edge", wall.edge)->required();
    s->add_option("--slip-tol", wall.slip_tol);
    s->add_flag("--strict", wall.strict);
    s->add_option("--out", wall.out)->required();
    bind(s, wall, action);
  }
  {
    CLI::App* s = app.add_subcommand("export", "Convert a field or dump point states");
    s->add_option("--field", export_cmd.field)->required();
    s->add_option("--as", export_cmd.as, "chi, psi or states")->capture_default_str();
    s->add_option("--out", export_cmd.out)->required();
    bind(s, export_cmd, action);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::CallForVersion&) {
    out << io::version() << "\n";
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return kExitUsage;
  }

  Runner runner{out, err, {}, {}};
  for (int k = 1; k < argc; ++k) runner.args.emplace_back(argv[k]);
  try {
    return action(runner);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return kExitUsage;
  } catch (const FormatError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitFailure;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitFailure;
  }
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  std::vector<const char*> argv{"sspf"};
  for (const std::string& a : args) argv.push_back(a.c_str());
  return run(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace sspf::cli
