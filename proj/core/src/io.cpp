#include "sspf/io.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <system_error>

#include "json.hpp"
#include "sspf/error.hpp"

namespace sspf::io {

using nlohmann::ordered_json;

std::string_view version() noexcept { return SSPF_VERSION; }

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, r.ptr);
}

double parse_double(std::string_view text) {
  while (!text.empty() && (text.front() == ' ' || text.front() == '\t')) text.remove_prefix(1);
  while (!text.empty() && (text.back() == ' ' || text.back() == '\t' || text.back() == '\r')) {
    text.remove_suffix(1);
  }
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  double v = 0.0;
  const auto r = std::from_chars(text.data(), text.data() + text.size(), v);
  if (r.ec != std::errc() || r.ptr != text.data() + text.size() || text.empty()) {
    throw FormatError("not a number: '" + std::string(text) + "'");
  }
  return v;
}

void write_text_atomic(const std::filesystem::path& path, std::string_view content) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw FormatError("cannot open " + tmp.string() + " for writing");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw FormatError("write failed: " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw FormatError("cannot rename onto " + path.string());
  }
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::filesystem::path sidecar_path(const std::filesystem::path& csv) {
  std::filesystem::path p = csv;
  p.replace_extension(".json");
  return p;
}

namespace {

ordered_json num(double x) {
  if (!std::isfinite(x)) return nullptr;
  return x;
}

ordered_json gas_obj(const GasModel& g) {
  return {{"gamma", g.gamma}, {"c0", g.c0}, {"rho0", g.rho0}, {"bernoulli_A", g.bernoulli_A}};
}

ordered_json grid_obj(const GridSpec& g) {
  ordered_json walls = ordered_json::array();
  for (Edge e : kAllEdges) {
    if (g.has_wall(e)) walls.push_back(std::string(to_string(e)));
  }
  ordered_json o{{"dim", g.dim}};
  if (g.dim == 2) {
    o["origin"] = {g.origin[0], g.origin[1]};
    o["spacing"] = {g.spacing[0], g.spacing[1]};
    o["dims"] = {g.dims[0], g.dims[1]};
  } else {
    o["origin"] = {g.origin[0]};
    o["spacing"] = {g.spacing[0]};
    o["dims"] = {g.dims[0]};
  }
  o["walls"] = walls;
  return o;
}

ordered_json config_obj(const SolverConfig& c) {
  ordered_json o{{"max_newton_iters", c.max_newton_iters}};
  o["residual_tol"] = c.residual_tol ? ordered_json(*c.residual_tol) : ordered_json(nullptr);
  o["backtrack"] = c.backtrack;
  o["min_step"] = c.min_step;
  o["picard_warmup_iters"] = c.picard_warmup_iters;
  o["c2_floor"] = c.c2_floor ? ordered_json(*c.c2_floor) : ordered_json(nullptr);
  o["L_guard"] = c.L_guard;
  return o;
}

ordered_json node_obj(const NodeLocation& n) {
  return {{"i", n.node.i}, {"j", n.node.j}, {"xi", {num(n.xi[0]), num(n.xi[1])}}};
}

ordered_json barrier_obj(const BarrierSpec& b) {
  return {{"center", {b.center[0], b.center[1]}},
          {"delta", b.delta},
          {"c_hat", b.c_hat},
          {"beta", b.beta},
          {"coefficient", b.coefficient()}};
}

ordered_json walls_obj(const WallNorms& w) {
  return {{"edge", std::string(to_string(w.edge))},
          {"chi_n", num(w.chi_n)},
          {"chi_nt", num(w.chi_nt)},
          {"chi_ntt", num(w.chi_ntt)},
          {"c2_n", num(w.c2_n)},
          {"chi_nnn", num(w.chi_nnn)},
          {"slip_tol", num(w.slip_tol)},
          {"slip_violated", w.slip_violated}};
}

ordered_json report_obj(const EllipticityReport& r) {
  ordered_json walls = ordered_json::array();
  for (const WallNorms& w : r.walls) walls.push_back(walls_obj(w));
  return {{"verdict", std::string(to_string(r.verdict))},
          {"argmax_interior", node_obj(r.argmax_interior)},
          {"max_interior_F", num(r.max_interior_F)},
          {"argmax_boundary", node_obj(r.argmax_boundary)},
          {"max_boundary_F", num(r.max_boundary_F)},
          {"max_interior_L2", num(r.max_interior_L2)},
          {"max_L", num(r.max_L)},
          {"delta", r.delta},
          {"k_ver", r.k_ver},
          {"tolerance", num(r.tolerance)},
          {"hess_F_scale", num(r.hess_F_scale)},
          {"barrier", barrier_obj(r.barrier)},
          {"residual", {{"max_abs", num(r.residual.max_abs)}, {"l2", num(r.residual.l2)}}},
          {"solution_residual_tol", num(r.solution_residual_tol)},
          {"walls", walls}};
}

std::string dump(const ordered_json& j) { return j.dump(2) + "\n"; }

template <typename T>
T get_or(const ordered_json& j, const char* key) {
  if (!j.contains(key)) throw FormatError(std::string("metadata lacks '") + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("metadata key '") + key + "': " + e.what());
  }
}

std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t p = line.find(sep, start);
    out.push_back(line.substr(start, p == std::string_view::npos ? std::string_view::npos : p - start));
    if (p == std::string_view::npos) break;
    start = p + 1;
  }
  return out;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

}  // namespace

std::string field_csv(const ScalarField& field) {
  const GridSpec& g = field.grid();
  std::string out = g.dim == 2 ? "xi1,xi2,value\n" : "xi,value\n";
  for (int i = 0; i < g.dims[0]; ++i) {
    for (int j = 0; j < g.dims[1]; ++j) {
      const Point xi = g.xi(i, j);
      out += format_double(xi[0]);
      out += ',';
      if (g.dim == 2) {
        out += format_double(xi[1]);
        out += ',';
      }
      out += format_double(field(i, j));
      out += '\n';
    }
  }
  return out;
}

std::string field_metadata_json(const ScalarField& field, const GasModel& gas) {
  ordered_json j{{"variable", std::string(to_string(field.variable()))},
                 {"grid", grid_obj(field.grid())},
                 {"gas", gas_obj(gas)}};
  return dump(j);
}

void write_field(const std::filesystem::path& csv, const ScalarField& field, const GasModel& gas) {
  write_text_atomic(csv, field_csv(field));
  write_text_atomic(sidecar_path(csv), field_metadata_json(field, gas));
}

LoadedField read_field(const std::filesystem::path& csv) {
  ordered_json meta;
  try {
    meta = ordered_json::parse(read_text(sidecar_path(csv)));
  } catch (const nlohmann::json::exception& e) {
    throw FormatError("bad field metadata: " + std::string(e.what()));
  }
  GasModel gas;
  const ordered_json& jg = meta.contains("gas") ? meta["gas"] : ordered_json::object();
  if (jg.contains("gamma")) gas.gamma = get_or<double>(jg, "gamma");
  if (jg.contains("c0")) gas.c0 = get_or<double>(jg, "c0");
  if (jg.contains("rho0")) gas.rho0 = get_or<double>(jg, "rho0");
  if (jg.contains("bernoulli_A")) gas.bernoulli_A = get_or<double>(jg, "bernoulli_A");

  if (!meta.contains("grid")) throw FormatError("metadata lacks 'grid'");
  const ordered_json& jgrid = meta["grid"];
  GridSpec g;
  g.dim = get_or<int>(jgrid, "dim");
  if (g.dim != 1 && g.dim != 2) throw FormatError("grid dim must be 1 or 2");
  const auto origin = get_or<std::vector<double>>(jgrid, "origin");
  const auto spacing = get_or<std::vector<double>>(jgrid, "spacing");
  const auto dims = get_or<std::vector<int>>(jgrid, "dims");
  const std::size_t nd = static_cast<std::size_t>(g.dim);
  if (origin.size() != nd || spacing.size() != nd || dims.size() != nd) {
    throw FormatError("grid arrays do not match dim");
  }
  for (std::size_t a = 0; a < nd; ++a) {
    g.origin[a] = origin[a];
    g.spacing[a] = spacing[a];
    g.dims[a] = dims[a];
  }
  if (g.dim == 1) {
    g.origin[1] = 0.0;
    g.spacing[1] = 1.0;
    g.dims[1] = 1;
  }
  for (const std::string& w : get_or<std::vector<std::string>>(jgrid, "walls")) {
    const auto e = parse_edge(w);
    if (!e) throw FormatError("unknown wall edge '" + w + "'");
    g.walls[static_cast<int>(*e)] = true;
  }
  try {
    g.validate();
  } catch (const PreconditionError& e) {
    throw FormatError(std::string("invalid grid metadata: ") + e.what());
  }
  const std::string var = meta.value("variable", std::string("chi"));
  Variable variable;
  if (var == to_string(Variable::Chi)) {
    variable = Variable::Chi;
  } else if (var == to_string(Variable::Psi)) {
    variable = Variable::Psi;
  } else {
    throw FormatError("unknown variable '" + var + "'");
  }

  const std::string text = read_text(csv);
  std::vector<double> values;
  values.reserve(g.size());
  std::size_t pos = 0;
  bool header = true;
  const std::size_t cols = g.dim == 2 ? 3 : 2;
  std::size_t line_no = 0;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string::npos) end = text.size();
    std::string_view line = trim(std::string_view(text).substr(pos, end - pos));
    pos = end + 1;
    ++line_no;
    if (line.empty()) continue;
    if (header) {
      header = false;
      continue;
    }
    const auto parts = split(line, ',');
    // 1D files may also be profiles (xi,chi,dchi); chi is the value column.
    const bool profile_row = g.dim == 1 && parts.size() == 3;
    if (parts.size() != cols && !profile_row) {
      throw FormatError("line " + std::to_string(line_no) + ": expected " + std::to_string(cols) +
                        " columns");
    }
    const std::size_t k = values.size();
    if (k >= g.size()) throw FormatError("more rows than grid nodes");
    const Point xi = g.xi(g.node(k));
    for (std::size_t a = 0; a < nd; ++a) {
      const double x = parse_double(parts[a]);
      const double scale = std::max({1.0, std::abs(xi[a]), g.spacing[a]});
      if (std::abs(x - xi[a]) > 1e-9 * scale) {
        throw FormatError("line " + std::to_string(line_no) + ": coordinate does not match grid");
      }
    }
    values.push_back(parse_double(parts[profile_row ? 1 : cols - 1]));
  }
  if (values.size() != g.size()) {
    throw FormatError("expected " + std::to_string(g.size()) + " rows, found " +
                      std::to_string(values.size()));
  }
  return {ScalarField(g, std::move(values), variable), gas};
}

std::string profile_csv(const Profile1D& p) {
  std::string out = "xi,chi,dchi\n";
  for (std::size_t k = 0; k < p.xi.size(); ++k) {
    out += format_double(p.xi[k]) + ',' + format_double(p.chi[k]) + ',' +
           format_double(p.dchi[k]) + '\n';
  }
  return out;
}

std::string profile_csv(const RadialProfile& p) {
  std::string out = "r,chi,dchi\n";
  for (std::size_t k = 0; k < p.r.size(); ++k) {
    out += format_double(p.r[k]) + ',' + format_double(p.chi[k]) + ',' +
           format_double(p.dchi[k]) + '\n';
  }
  return out;
}

SolverConfig parse_solver_config(std::string_view text) {
  SolverConfig c;
  std::size_t pos = 0;
  std::size_t line_no = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (const std::size_t h = line.find('#'); h != std::string_view::npos) line = line.substr(0, h);
    line = trim(line);
    if (line.empty()) continue;
    const std::size_t eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw FormatError("config line " + std::to_string(line_no) + ": expected key=value");
    }
    const std::string key(trim(line.substr(0, eq)));
    const std::string_view val = trim(line.substr(eq + 1));
    auto as_int = [&]() {
      const double v = parse_double(val);
      if (v != std::floor(v)) throw FormatError("config key '" + key + "' needs an integer");
      return static_cast<int>(v);
    };
    if (key == "max_newton_iters") {
      c.max_newton_iters = as_int();
    } else if (key == "residual_tol") {
      c.residual_tol = parse_double(val);
    } else if (key == "backtrack") {
      c.backtrack = parse_double(val);
    } else if (key == "min_step") {
      c.min_step = parse_double(val);
    } else if (key == "picard_warmup_iters") {
      c.picard_warmup_iters = as_int();
    } else if (key == "c2_floor") {
      c.c2_floor = parse_double(val);
    } else if (key == "L_guard") {
      c.L_guard = parse_double(val);
    } else {
      throw FormatError("unknown config key '" + key + "'");
    }
    if (pos > text.size()) break;
  }
  try {
    c.validate();
  } catch (const PreconditionError& e) {
    throw FormatError(std::string("invalid solver config: ") + e.what());
  }
  return c;
}

SolverConfig read_solver_config(const std::filesystem::path& path) {
  return parse_solver_config(read_text(path));
}

std::string solver_config_text(const SolverConfig& c) {
  std::string out;
  out += "max_newton_iters=" + std::to_string(c.max_newton_iters) + "\n";
  if (c.residual_tol) out += "residual_tol=" + format_double(*c.residual_tol) + "\n";
  out += "backtrack=" + format_double(c.backtrack) + "\n";
  out += "min_step=" + format_double(c.min_step) + "\n";
  out += "picard_warmup_iters=" + std::to_string(c.picard_warmup_iters) + "\n";
  if (c.c2_floor) out += "c2_floor=" + format_double(*c.c2_floor) + "\n";
  out += "L_guard=" + format_double(c.L_guard) + "\n";
  return out;
}

std::string gas_json(const GasModel& gas) { return dump(gas_obj(gas)); }
std::string grid_json(const GridSpec& grid) { return dump(grid_obj(grid)); }
std::string solver_config_json(const SolverConfig& config) { return dump(config_obj(config)); }

std::string solve_report_json(const SolveReport& r) {
  ordered_json hist = ordered_json::array();
  for (double v : r.residual_history) hist.push_back(num(v));
  ordered_json steps = ordered_json::array();
  for (const IterationRecord& s : r.steps) {
    steps.push_back({{"kind", s.kind == StepKind::Newton ? "newton" : "picard"},
                     {"step_length", s.step_length},
                     {"residual", num(s.residual)}});
  }
  ordered_json j{{"converged", r.converged},
                 {"iterations", r.iterations},
                 {"message", r.message},
                 {"residual_tol", r.residual_tol},
                 {"c2_floor", r.c2_floor},
                 {"max_interior_L", num(r.max_interior_L)},
                 {"clamped_nodes", r.clamped_nodes},
                 {"guard_nodes", r.guard_nodes},
                 {"guard_activations", r.guard_activations},
                 {"uniformly_elliptic", r.uniformly_elliptic},
                 {"residual_history", hist},
                 {"steps", steps}};
  j["wall_slip_norm"] = r.wall_slip_norm ? num(*r.wall_slip_norm) : ordered_json(nullptr);
  return dump(j);
}

std::string ellipticity_report_json(const EllipticityReport& report) {
  return dump(report_obj(report));
}

std::string delta_sweep_json(const DeltaSweep& sweep) {
  ordered_json entries = ordered_json::array();
  for (const DeltaSweepEntry& e : sweep.entries) {
    entries.push_back({{"delta", e.delta}, {"report", report_obj(e.report)}});
  }
  ordered_json j{{"entries", entries}};
  j["empirical_delta_margin"] =
      sweep.empirical_delta_margin ? ordered_json(*sweep.empirical_delta_margin)
                                   : ordered_json(nullptr);
  return dump(j);
}

std::string wall_norms_json(const WallNorms& norms) { return dump(walls_obj(norms)); }

std::string diagnostics_json(const MaxPointDiagnostics& d) {
  ordered_json j{{"location", node_obj(d.location)},
                 {"L", d.L},
                 {"c", d.c},
                 {"axis", {d.axis[0], d.axis[1]}},
                 {"chi_11", d.chi_11},
                 {"chi_12", d.chi_12},
                 {"chi_22", d.chi_22},
                 {"barrier_gradient", {d.barrier_gradient[0], d.barrier_gradient[1]}},
                 {"stationarity", {d.stationarity[0], d.stationarity[1]}},
                 {"chi_11_predicted", d.chi_11_predicted},
                 {"gap_a", d.gap_a},
                 {"chi_12_predicted", d.chi_12_predicted},
                 {"gap_b", d.gap_b},
                 {"tangential_sum", d.tangential_sum},
                 {"tangential_sum_predicted", d.tangential_sum_predicted},
                 {"gap_c", d.gap_c},
                 {"tangential_sum_near_sonic", d.tangential_sum_near_sonic},
                 {"fd_error_scale", d.fd_error_scale},
                 {"bound", d.bound},
                 {"residual", d.residual}};
  return dump(j);
}

}  // namespace sspf::io
