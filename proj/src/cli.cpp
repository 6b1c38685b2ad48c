#include "hubbard_brg/cli.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <iostream>
#include <limits>
#include <map>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "hubbard_brg/errors.hpp"
#include "hubbard_brg/observables.hpp"
#include "hubbard_brg/rg.hpp"
#include "hubbard_brg/spectra.hpp"
#include "hubbard_brg/version.hpp"

namespace hbrg::cli {
namespace {

using ordered_json = nlohmann::ordered_json;

constexpr const char* kSymbolMapping =
    "E1 = (e_minus + e_plus)/2, E2 = e_zero; U' = 2(E1 - E2) = e_plus + e_minus - 2 e_zero; "
    "K' = (E1 + E2)/2; t' = nu lambda^2 t";

std::string_view command_name(Command c) {
  switch (c) {
    case Command::sector_spectrum:
      return "sector-spectrum";
    case Command::flow:
      return "flow";
    case Command::critical:
      return "critical";
    case Command::gap:
      return "gap";
    case Command::sweep:
      break;
  }
  return "sweep";
}

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = s.find(sep, start);
    out.emplace_back(s.substr(start, pos - start));
    if (pos == std::string_view::npos) {
      return out;
    }
    start = pos + 1;
  }
}

double to_double(const std::string& s) {
  std::size_t used = 0;
  double v = 0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != s.size() || !std::isfinite(v)) {
    throw std::invalid_argument("not a number: '" + s + "'");
  }
  return v;
}

int to_int(const std::string& s) {
  std::size_t used = 0;
  int v = 0;
  try {
    v = std::stoi(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != s.size()) {
    throw std::invalid_argument("not an integer: '" + s + "'");
  }
  return v;
}

std::string timestamp_now() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

// JSON numbers: NaN is not representable, so failed rows carry null.
ordered_json number(double x) { return std::isfinite(x) ? ordered_json(x) : ordered_json(); }

ordered_json params_json(const HubbardParams& p) {
  return {{"t", p.t}, {"u", p.U}, {"mu", p.mu}, {"k", p.K}};
}

ordered_json header(const RunConfig& c, const BlockGeometry& geom) {
  ordered_json j;
  j["artifact"] = {{"name", "hubbard-brg"}, {"version", kVersion}};
  if (c.timestamp) {
    j["timestamp"] = timestamp_now();
  }
  ordered_json cfg;
  cfg["command"] = command_name(c.command);
  cfg["block"] = to_string(c.block);
  cfg["u0"] = c.u0;
  cfg["t0"] = c.t0;
  cfg["levels"] = c.levels;
  cfg["tol"] = c.tol;
  cfg["u0_grid"] = c.u0_grid;
  cfg["n_list"] = c.n_list;
  j["config"] = cfg;
  ordered_json bonds = ordered_json::array();
  for (const Bond& b : geom.bonds) {
    bonds.push_back({b.a, b.b});
  }
  j["geometry"] = {{"kind", to_string(geom.kind)},
                   {"description", describe(geom)},
                   {"n_sites", geom.n_sites},
                   {"bonds", bonds},
                   {"border_sites", geom.border_sites},
                   {"rotation", geom.rotation}};
  j["nu"] = geom.nu;
  j["retention_policy"] = "multiplet_average";
  j["symbol_mapping"] = kSymbolMapping;
  return j;
}

void write_csv(std::ostream& out, std::string_view head,
               const std::vector<std::vector<std::string>>& rows) {
  out << head << '\n';
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      out << (i ? "," : "") << row[i];
    }
    out << '\n';
  }
}

int cmd_sector_spectrum(const RunConfig& c, const BlockGeometry& geom, std::ostream& out) {
  const HubbardParams p = initial_params(c.t0, c.u0);
  std::vector<Sector> sectors;
  for (int up = 0; up <= geom.n_sites; ++up) {
    for (int dn = 0; dn <= geom.n_sites; ++dn) {
      sectors.push_back({up, dn});
    }
  }
  const auto spectra = block_ground_energies(p, geom, sectors, false);
  if (c.format == Format::csv) {
    std::vector<std::vector<std::string>> rows;
    for (Sector s : sectors) {
      const auto& sp = spectra.at(s);
      rows.push_back({std::to_string(s.n_up), std::to_string(s.n_dn),
                      std::to_string(binomial(geom.n_sites, s.n_up) *
                                     binomial(geom.n_sites, s.n_dn)),
                      format_number(sp.energies.front()), sp.degenerate ? "1" : "0"});
    }
    write_csv(out, "n_up,n_dn,dim,e0,degenerate", rows);
    return kSuccess;
  }
  ordered_json j = header(c, geom);
  j["params"] = params_json(p);
  ordered_json rows = ordered_json::array();
  for (Sector s : sectors) {
    const auto& sp = spectra.at(s);
    rows.push_back({{"n_up", s.n_up},
                    {"n_dn", s.n_dn},
                    {"dim", binomial(geom.n_sites, s.n_up) * binomial(geom.n_sites, s.n_dn)},
                    {"e0", sp.energies.front()},
                    {"degenerate", sp.degenerate},
                    {"multiplet", sp.multiplet}});
  }
  j["sectors"] = rows;
  out << j.dump(2) << '\n';
  return kSuccess;
}

int cmd_flow(const RunConfig& c, const BlockGeometry& geom, std::ostream& out) {
  const FlowResult flow = run_flow(initial_params(c.t0, c.u0), geom, c.levels);
  if (c.format == Format::csv) {
    std::vector<std::vector<std::string>> rows;
    for (const FlowLevel& l : flow.levels) {
      rows.push_back({std::to_string(l.level), format_number(l.params.t),
                      format_number(l.params.U), format_number(l.params.K),
                      format_number(l.params.mu), format_number(l.retained.lambda),
                      format_number(l.u_over_t)});
    }
    write_csv(out, "level,t,u,k,mu,lambda,u_over_t", rows);
    return kSuccess;
  }
  ordered_json j = header(c, geom);
  ordered_json levels = ordered_json::array();
  for (const FlowLevel& l : flow.levels) {
    const auto& r = l.retained;
    const auto [lo, hi] =
        std::minmax_element(r.lambda_per_border.begin(), r.lambda_per_border.end());
    levels.push_back({{"level", l.level},
                      {"params", params_json(l.params)},
                      {"u_over_t", l.u_over_t},
                      {"lambda", r.lambda},
                      {"lambda_per_border", r.lambda_per_border},
                      {"e_minus", r.e_minus},
                      {"e_zero", r.e_zero},
                      {"e_plus", r.e_plus},
                      {"gap", r.gap},
                      {"diagnostics",
                       {{"ph_asymmetry", r.ph_asymmetry},
                        {"lambda_spread", *hi - *lo},
                        {"lambda_tolerance", r.lambda_tolerance},
                        {"doublet_split", r.e_zero - r.e_zero_mirror},
                        {"multiplets", {r.multiplet_minus, r.multiplet_zero, r.multiplet_plus}}}}});
  }
  j["levels"] = levels;
  j["classification"] = to_string(flow.classification);
  j["gap"] = flow.gap;
  out << j.dump(2) << '\n';
  return kSuccess;
}

int cmd_critical(const RunConfig& c, const BlockGeometry& geom, std::ostream& out) {
  CriticalSearch search;
  search.max_levels = c.levels;
  const CriticalResult r = find_critical(geom, c.tol, search);
  if (c.format == Format::csv) {
    write_csv(out, "block,u_c_over_t,lower,upper,iterations,tol",
              {{std::string(to_string(geom.kind)), format_number(r.u_c_over_t),
                format_number(r.lower), format_number(r.upper), std::to_string(r.iterations),
                format_number(c.tol)}});
    return kSuccess;
  }
  ordered_json j = header(c, geom);
  j["bracket"] = {search.lower, search.upper};
  j["u_c_over_t"] = r.u_c_over_t;
  j["interval"] = {r.lower, r.upper};
  j["iterations"] = r.iterations;
  out << j.dump(2) << '\n';
  return kSuccess;
}

template <class Row>
int report_row_errors(const std::vector<Row>& rows, std::ostream& err) {
  int failed = 0;
  for (const Row& r : rows) {
    if (r.error) {
      ++failed;
    }
  }
  if (failed > 0) {
    err << "warning: " << failed << " row(s) failed; first error: "
        << *std::find_if(rows.begin(), rows.end(), [](const Row& r) { return bool(r.error); })
               ->error
        << '\n';
    return kNumerical;
  }
  return kSuccess;
}

int cmd_gap(const RunConfig& c, const BlockGeometry& geom, std::ostream& out, std::ostream& err) {
  const auto rows = gap_table(c.u0_grid, c.n_list, geom, c.threads);
  const double nan = std::numeric_limits<double>::quiet_NaN();
  if (c.format == Format::csv) {
    std::vector<std::vector<std::string>> text;
    for (const GapPoint& g : rows) {
      const bool ok = !g.error;
      text.push_back({format_number(g.u0_over_t0), std::to_string(g.n_levels),
                      format_number(ok ? g.u_over_t_renormalized : nan),
                      format_number(ok ? g.gap : nan), format_number(ok ? g.gap_over_t : nan)});
    }
    write_csv(out, "u0,n,u_over_t,gap,gap_over_t", text);
  } else {
    ordered_json j = header(c, geom);
    ordered_json arr = ordered_json::array();
    for (const GapPoint& g : rows) {
      ordered_json row = {{"u0", g.u0_over_t0}, {"n", g.n_levels}};
      if (g.error) {
        row["error"] = *g.error;
      } else {
        row["u_over_t"] = number(g.u_over_t_renormalized);
        row["t"] = g.t;
        row["gap"] = g.gap;
        row["gap_over_t"] = number(g.gap_over_t);
      }
      arr.push_back(row);
    }
    j["rows"] = arr;
    out << j.dump(2) << '\n';
  }
  return report_row_errors(rows, err);
}

int cmd_sweep(const RunConfig& c, const BlockGeometry& geom, std::ostream& out,
              std::ostream& err) {
  const auto rows = sweep_renormalized_coupling(c.u0_grid, c.n_list, geom, c.threads);
  if (c.format == Format::csv) {
    std::vector<std::vector<std::string>> text;
    for (const SweepRow& r : rows) {
      text.push_back({format_number(r.u0), std::to_string(r.n),
                      format_number(r.error ? std::numeric_limits<double>::quiet_NaN()
                                            : r.u_over_t)});
    }
    write_csv(out, "u0,n,u_over_t", text);
  } else {
    ordered_json j = header(c, geom);
    ordered_json arr = ordered_json::array();
    for (const SweepRow& r : rows) {
      ordered_json row = {{"u0", r.u0}, {"n", r.n}};
      if (r.error) {
        row["error"] = *r.error;
      } else {
        row["u_over_t"] = number(r.u_over_t);
      }
      arr.push_back(row);
    }
    j["rows"] = arr;
    out << j.dump(2) << '\n';
  }
  return report_row_errors(rows, err);
}

int dispatch(const RunConfig& c, std::ostream& out, std::ostream& err) {
  const BlockGeometry geom = make_block(c.block);
  switch (c.command) {
    case Command::sector_spectrum:
      return cmd_sector_spectrum(c, geom, out);
    case Command::flow:
      return cmd_flow(c, geom, out);
    case Command::critical:
      return cmd_critical(c, geom, out);
    case Command::gap:
      return cmd_gap(c, geom, out, err);
    case Command::sweep:
      break;
  }
  return cmd_sweep(c, geom, out, err);
}

void validate(const RunConfig& c) {
  if (!(c.t0 > 0)) {
    throw std::invalid_argument("--t0 must be positive");
  }
  if (c.u0 < 0) {
    throw std::invalid_argument("--u0 must be nonnegative");
  }
  if (c.levels < 1) {
    throw std::invalid_argument("--levels must be >= 1");
  }
  if (!(c.tol > 0)) {
    throw std::invalid_argument("--tol must be positive");
  }
  if ((c.command == Command::gap || c.command == Command::sweep) &&
      (c.u0_grid.empty() || c.n_list.empty())) {
    throw std::invalid_argument("grid must be nonempty");
  }
  for (double u : c.u0_grid) {
    if (u < 0) {
      throw std::invalid_argument("u0 grid values must be nonnegative");
    }
  }
  for (int n : c.n_list) {
    if (n < 1) {
      throw std::invalid_argument("n list values must be >= 1");
    }
  }
}

}  // namespace

std::vector<double> parse_u0_grid(std::string_view spec) {
  if (spec.find(':') != std::string_view::npos) {
    const auto parts = split(spec, ':');
    if (parts.size() != 3) {
      throw std::invalid_argument("range grid must be min:max:count");
    }
    const double lo = to_double(parts[0]);
    const double hi = to_double(parts[1]);
    const int count = to_int(parts[2]);
    if (count < 1 || (count == 1 && lo != hi) || hi < lo) {
      throw std::invalid_argument("invalid range grid '" + std::string(spec) + "'");
    }
    std::vector<double> out;
    for (int k = 0; k < count; ++k) {
      out.push_back(count == 1 ? lo : lo + (hi - lo) * k / (count - 1));
    }
    return out;
  }
  std::vector<double> out;
  for (const auto& p : split(spec, ',')) {
    out.push_back(to_double(p));
  }
  return out;
}

std::vector<int> parse_n_list(std::string_view spec) {
  std::vector<int> out;
  for (const auto& p : split(spec, ',')) {
    out.push_back(to_int(p));
  }
  return out;
}

std::string format_number(double x) {
  if (std::isnan(x)) {
    return "nan";
  }
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

int run(const RunConfig& config, std::ostream& out, std::ostream& err) {
  try {
    validate(config);
    if (config.out) {
      std::ostringstream buffer;
      const int code = dispatch(config, buffer, err);
      std::ofstream file(*config.out, std::ios::binary);
      if (!file) {
        err << "error: cannot open " << *config.out << " for writing\n";
        return kUsage;
      }
      file << buffer.str();
      return code;
    }
    return dispatch(config, out, err);
  } catch (const NumericalFailure& e) {
    err << "numerical failure";
    if (e.level() >= 0) {
      err << " at level " << e.level();
    }
    err << ": " << e.what() << '\n';
    return kNumerical;
  } catch (const BracketFailure& e) {
    err << "bracket failure: " << e.what() << '\n';
    return kNonConvergence;
  } catch (const NonConvergence& e) {
    err << "non-convergence: " << e.what() << '\n';
    return kNonConvergence;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }
}

int main_with_args(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Block renormalization group for the triangular-lattice Hubbard model",
               "hubbard-brg"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kVersion));

  RunConfig config;
  std::string block = "hex7";
  std::string format = "csv";
  std::string grid;
  std::string n_list;
  std::string out_path;
  bool no_timestamp = false;
  int threads = 0;

  struct Spec {
    Command command;
    const char* name;
    const char* help;
  };
  const Spec specs[] = {
      {Command::sector_spectrum, "sector-spectrum", "Ground energy of every (n_up, n_dn) sector"},
      {Command::flow, "flow", "RG flow from (t0, u0)"},
      {Command::critical, "critical", "Bisect the metal-insulator critical coupling"},
      {Command::gap, "gap", "Charge gap table over u0 grid and array sizes"},
      {Command::sweep, "sweep", "Renormalized U/t over u0 grid and array sizes"},
  };
  std::map<CLI::App*, Command> commands;
  std::map<Command, CLI::Option*> levels_opt;
  for (const Spec& s : specs) {
    CLI::App* sub = app.add_subcommand(s.name, s.help);
    commands[sub] = s.command;
    sub->add_option("--block", block, "Block kind")->check(CLI::IsMember({"hex7", "tri3"}));
    sub->add_option("--u0", config.u0, "Initial on-site repulsion U0");
    sub->add_option("--t0", config.t0, "Initial hopping t0");
    levels_opt[s.command] = sub->add_option("--levels", config.levels, "Number of RG levels n");
    sub->add_option("--tol", config.tol, "Bisection tolerance");
    sub->add_option("--u0-grid", grid, "u0 values: comma list or min:max:count");
    sub->add_option("--n-list", n_list, "Array exponents n (comma list)");
    sub->add_option("--format", format, "Output format")->check(CLI::IsMember({"csv", "json"}));
    sub->add_option("--out", out_path, "Output file (default: standard output)");
    sub->add_flag("--no-timestamp", no_timestamp, "Omit the timestamp from JSON output");
    sub->add_option("--threads", threads, "Worker threads for grid commands")
        ->check(CLI::PositiveNumber);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kSuccess : kUsage;
  }

  CLI::App* chosen = app.get_subcommands().front();
  config.command = commands.at(chosen);
  if (config.command == Command::critical && levels_opt.at(config.command)->count() == 0) {
    config.levels = 50;
  }
  try {
    config.block = parse_block_kind(block);
    config.format = format == "json" ? Format::json : Format::csv;
    if (!grid.empty()) {
      config.u0_grid = parse_u0_grid(grid);
    } else if (chosen->get_option("--u0")->count() > 0) {
      config.u0_grid = {config.u0};
    } else {
      config.u0_grid = default_u0_grid();
    }
    config.n_list = n_list.empty() ? default_n_list() : parse_n_list(n_list);
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }
  if (!out_path.empty()) {
    config.out = out_path;
  }
  config.timestamp = !no_timestamp;
  if (threads > 0) {
    config.threads = threads;
  } else if (const char* env = std::getenv("HUBBARD_BRG_THREADS")) {
    try {
      config.threads = std::max(1, to_int(env));
    } catch (const std::invalid_argument&) {
      err << "error: HUBBARD_BRG_THREADS is not an integer\n";
      return kUsage;
    }
  }
  return run(config, out, err);
}

}  // namespace hbrg::cli
