// wgqed: command-line front end for the waveguide emitter-pair library.
//
//   wgqed <subcommand> [options]
//   subcommands: poles | trajectory | concurrence-scan | energy-density | offres | simulate
//
// Exit codes: 0 success, 2 invalid configuration, 3 solver non-convergence,
// 4 partial results.
#include <CLI11.hpp>
#include <json.hpp>

#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <variant>
#include <vector>

#include "wgqed/boundstates.hpp"
#include "wgqed/dispersion.hpp"
#include "wgqed/oracle.hpp"
#include "wgqed/spectral.hpp"

namespace {

using namespace wgqed;

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitConvergence = 3;
constexpr int kExitPartial = 4;

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string fmt_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

using Cell = std::variant<std::monostate, double, long long, std::string, bool>;

std::string cell_text(const Cell& c) {
  if (std::holds_alternative<double>(c)) return fmt_double(std::get<double>(c));
  if (std::holds_alternative<long long>(c)) return std::to_string(std::get<long long>(c));
  if (std::holds_alternative<std::string>(c)) return std::get<std::string>(c);
  if (std::holds_alternative<bool>(c)) return std::get<bool>(c) ? "true" : "false";
  return "";
}

// Flat ordered key/value report; doubles as CSV header metadata or JSON body.
struct Report {
  std::vector<std::pair<std::string, Cell>> entries;
  void add(std::string key, Cell v) { entries.emplace_back(std::move(key), std::move(v)); }
};

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
};

struct Settings {
  std::string subcommand;
  double omega0 = 1.25;
  double lambda = 1e-2;
  double mass = 1.0;
  std::string distance = "auto:n=1";
  std::string out;
  std::string format;
  int jobs = 1;
  bool exact = false;
  bool no_header = false;
  bool verbose = false;
  // Tolerances.
  double rel_tol = 1e-12;
  double abs_tol = 1e-15;
  int max_iterations = 100;
  double acceptance = 1e-10;
  // Sweeps.
  std::string sweep = "omega0";
  std::optional<double> start, stop;
  int steps = 161;
  std::string sector = "both";
  std::vector<int> n_list{1, 2, 3};
  int n = 1;
  // Energy density.
  int points = 401;
  double margin = -1.0;
  // Oracle.
  int modes = 4001;
  std::optional<double> box_length;
  double t_max = 0.0;
  int t_steps = 301;
  std::string initial = "eA";
  int snapshots = 0;
};

ModelParams base_params(const Settings& s) {
  ModelParams p{s.omega0, s.lambda, s.mass, 0.0};
  p.validate();
  return p;
}

// "1.5", "auto" or "auto:n=K".
double resolve_distance(const std::string& spec, const ModelParams& p) {
  if (spec.rfind("auto", 0) == 0) {
    int n = 1;
    const std::string rest = spec.substr(4);
    if (!rest.empty()) {
      if (rest.rfind(":n=", 0) != 0) throw ConfigError("--distance: expected auto or auto:n=K");
      try {
        std::size_t used = 0;
        n = std::stoi(rest.substr(3), &used);
        if (used != rest.size() - 3) throw std::invalid_argument("trailing");
      } catch (const std::exception&) {
        throw ConfigError("--distance: malformed resonance index in '" + spec + "'");
      }
    }
    if (n < 1) throw ConfigError("--distance: resonance index must be positive");
    const auto d = resonant_distance(p, n);
    if (!d) {
      std::ostringstream msg;
      msg << "--distance " << spec << ": no resonant wavenumber (omega0 = " << p.omega0
          << " <= M - 2 lambda^2/M = " << p.mass - 2.0 * p.lambda * p.lambda / p.mass << ")";
      throw ConfigError(msg.str());
    }
    return *d;
  }
  try {
    std::size_t used = 0;
    const double d = std::stod(spec, &used);
    if (used != spec.size()) throw std::invalid_argument("trailing");
    return d;
  } catch (const std::exception&) {
    throw ConfigError("--distance: expected a number or auto:n=K, got '" + spec + "'");
  }
}

ModelParams full_params(const Settings& s) {
  ModelParams p = base_params(s);
  p.distance = resolve_distance(s.distance, p);
  p.validate();
  return p;
}

SolverOptions solver_options(const Settings& s) {
  SolverOptions o;
  o.max_iterations = s.max_iterations;
  o.acceptance = s.acceptance;
  o.quadrature.rel_tol = s.rel_tol;
  o.quadrature.abs_tol = s.abs_tol;
  return o;
}

std::vector<Sector> sectors(const Settings& s) {
  if (s.sector == "plus") return {Sector::plus};
  if (s.sector == "minus") return {Sector::minus};
  return {Sector::plus, Sector::minus};
}

std::vector<double> sweep_grid(const Settings& s, double default_start, double default_stop) {
  if (s.steps < 2) throw ConfigError("sweep needs --steps >= 2");
  const double a = s.start.value_or(default_start);
  const double b = s.stop.value_or(default_stop);
  if (a == b) throw ConfigError("sweep needs --start != --stop");
  std::vector<double> g(s.steps);
  for (int i = 0; i < s.steps; ++i) g[i] = a + (b - a) * i / (s.steps - 1);
  return g;
}

// Runs body(i) for i in [0, count) on up to `jobs` threads.
template <typename Body>
void parallel_for(int count, int jobs, Body body) {
  jobs = std::max(1, std::min(jobs, count));
  if (jobs == 1) {
    for (int i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<int> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> pool;
  for (int t = 0; t < jobs; ++t)
    pool.emplace_back([&] {
      for (int i = next++; i < count; i = next++) {
        try {
          body(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(failure_mutex);
          if (!failure) failure = std::current_exception();
        }
      }
    });
  for (auto& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);
}

void describe_config(Report& meta, const Settings& s, const std::optional<ModelParams>& p) {
  meta.add("command", s.subcommand);
  meta.add("config.omega0", s.omega0);
  meta.add("config.lambda", s.lambda);
  meta.add("config.mass", s.mass);
  meta.add("config.distance_spec", s.distance);
  if (p) meta.add("config.distance", p->distance);
  meta.add("tolerance.rel_tol", s.rel_tol);
  meta.add("tolerance.abs_tol", s.abs_tol);
  meta.add("tolerance.max_iterations", static_cast<long long>(s.max_iterations));
  meta.add("tolerance.acceptance", s.acceptance);
}

std::string render_csv(const Report& meta, const Table& table, bool header) {
  std::ostringstream os;
  if (header)
    for (const auto& [k, v] : meta.entries) os << "# " << k << " = " << cell_text(v) << '\n';
  for (std::size_t i = 0; i < table.columns.size(); ++i)
    os << (i ? "," : "") << table.columns[i];
  os << '\n';
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << cell_text(row[i]);
    os << '\n';
  }
  return os.str();
}

nlohmann::ordered_json json_value(const Cell& c, bool exact) {
  if (std::holds_alternative<double>(c)) {
    const double v = std::get<double>(c);
    if (exact || !std::isfinite(v)) return fmt_double(v);
    return v;
  }
  if (std::holds_alternative<long long>(c)) return std::get<long long>(c);
  if (std::holds_alternative<std::string>(c)) return std::get<std::string>(c);
  if (std::holds_alternative<bool>(c)) return std::get<bool>(c);
  return nullptr;
}

std::string render_json(const Report& meta, const Report& body, const Table* table, bool exact) {
  nlohmann::ordered_json j = nlohmann::ordered_json::object();
  for (const auto& [k, v] : meta.entries) j[k] = json_value(v, exact);
  for (const auto& [k, v] : body.entries) j[k] = json_value(v, exact);
  if (table) {
    for (std::size_t r = 0; r < table->rows.size(); ++r)
      for (std::size_t c = 0; c < table->columns.size(); ++c)
        j["rows." + std::to_string(r) + "." + table->columns[c]] = json_value(table->rows[r][c], exact);
  }
  return j.dump(2) + "\n";
}

// Temp file + rename so readers never see a half-written file.
void write_output(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    std::cout.flush();
    return;
  }
  const std::filesystem::path target(path);
  std::filesystem::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw ConfigError("cannot open output file " + tmp.string());
    f << text;
    f.flush();
    if (!f) throw ConfigError("failed writing output file " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, target, ec);
  if (ec) {
    std::filesystem::remove(tmp);
    throw ConfigError("cannot move output into place: " + ec.message());
  }
}

void emit(const Settings& s, const std::string& default_format, const Report& meta, const Report& body,
          const Table* table) {
  const std::string format = s.format.empty() ? default_format : s.format;
  std::string text;
  if (format == "json") {
    text = render_json(meta, body, table, s.exact);
  } else {
    Report all = meta;
    for (const auto& e : body.entries) all.entries.push_back(e);
    text = render_csv(all, table ? *table : Table{}, !s.no_header);
  }
  write_output(s.out, text);
}

// poles -------------------------------------------------------------------

int cmd_poles(const Settings& s) {
  const ModelParams p = full_params(s);
  Report meta, body;
  describe_config(meta, s, p);
  const auto opt = solver_options(s);
  const auto k_bar = resonant_wavenumber(p);
  Table table{{"sector", "E_p", "gamma_p", "defect", "iterations", "E_perturbative",
               "gamma_perturbative", "gamma_eq31_32"},
              {}};
  int code = kExitOk;
  for (Sector sec : sectors(s)) {
    const std::string tag = to_string(sec);
    std::vector<Cell> row{tag};
    try {
      const PoleResult r = find_pole(p, sec, std::nullopt, opt);
      body.add(tag + ".E_p", r.energy());
      body.add(tag + ".gamma_p", r.gamma());
      body.add(tag + ".defect", r.defect);
      body.add(tag + ".iterations", static_cast<long long>(r.iterations));
      row.insert(row.end(), {r.energy(), r.gamma(), r.defect, static_cast<long long>(r.iterations)});
    } catch (const ConvergenceError& e) {
      body.add(tag + ".error", std::string(e.what()));
      row.insert(row.end(), {Cell{}, Cell{}, Cell{}, Cell{}});
      code = kExitConvergence;
    }
    Cell e_pert, g_pert, g_eq;
    try {
      const PoleResult q = perturbative_pole(p, sec);
      e_pert = q.energy();
      g_pert = q.gamma();
      body.add(tag + ".perturbative.E_p", q.energy());
      body.add(tag + ".perturbative.gamma_p", q.gamma());
    } catch (const std::exception& e) {
      body.add(tag + ".perturbative.error", std::string(e.what()));
    }
    if (k_bar) {
      // Leading-order rates: 8 pi lambda^2 / k_bar for the decaying sector,
      // 2 pi lambda^2 k_bar (d - d_n)^2 for the surviving one.
      const int n = std::max(1, static_cast<int>(std::lround(*k_bar * p.distance / kPi)));
      const bool survives = resonant_sector(n) == sec;
      const double dn = n * kPi / *k_bar;
      const double l2 = p.lambda * p.lambda;
      const double pred = survives ? 2.0 * kPi * l2 * *k_bar * (p.distance - dn) * (p.distance - dn)
                                   : 8.0 * kPi * l2 / *k_bar;
      g_eq = pred;
      body.add(tag + (survives ? ".gamma_eq32" : ".gamma_eq31"), pred);
    }
    row.insert(row.end(), {e_pert, g_pert, g_eq});
    table.rows.push_back(std::move(row));
  }
  if (k_bar) body.add("k_bar", *k_bar);
  emit(s, "json", meta, body, s.format == "csv" ? &table : nullptr);
  return code;
}

// trajectory --------------------------------------------------------------

int cmd_trajectory(const Settings& s) {
  const ModelParams p0 = base_params(s);
  const bool by_omega = s.sweep == "omega0";
  if (!by_omega && s.sweep != "distance") throw ConfigError("--sweep must be omega0 or distance");
  ModelParams p = p0;
  if (by_omega) {
    p.distance = resolve_distance(s.distance, p0);
  }
  const std::vector<double> grid =
      by_omega ? sweep_grid(s, 0.95 * s.mass, 1.35 * s.mass) : sweep_grid(s, 1.0 / s.mass, 20.0 / s.mass);
  const auto secs = sectors(s);
  std::vector<PoleTrajectory> trajs(secs.size());
  const auto opt = solver_options(s);
  parallel_for(static_cast<int>(secs.size()), s.jobs, [&](int i) {
    trajs[i] = trace_trajectory(p, secs[i], by_omega ? SweepParameter::omega0 : SweepParameter::distance,
                                grid, opt);
  });
  Report meta, body;
  describe_config(meta, s, by_omega ? std::optional<ModelParams>(p) : std::nullopt);
  meta.add("sweep.parameter", s.sweep);
  meta.add("sweep.start", grid.front());
  meta.add("sweep.stop", grid.back());
  meta.add("sweep.steps", static_cast<long long>(grid.size()));
  Table table{{"sweep_value", "sector", "E_p", "gamma_p", "defect"}, {}};
  int code = kExitOk;
  for (const auto& t : trajs) {
    for (std::size_t i = 0; i < t.poles.size(); ++i)
      table.rows.push_back({t.grid[i], std::string(to_string(t.sector)), t.poles[i].energy(),
                            t.poles[i].gamma(), t.poles[i].defect});
    if (!t.complete()) {
      std::string tag = std::string(to_string(t.sector)) + ".failure";
      body.add(tag + ".index", static_cast<long long>(*t.failure_index));
      body.add(tag + ".value", t.grid[*t.failure_index]);
      body.add(tag + ".message", t.failure_message);
      std::cerr << "warning: " << to_string(t.sector) << " trajectory stopped at "
                << s.sweep << " = " << fmt_double(t.grid[*t.failure_index]) << ": "
                << t.failure_message << '\n';
      code = kExitPartial;
    }
  }
  emit(s, "csv", meta, body, &table);
  return code;
}

// concurrence-scan --------------------------------------------------------

int cmd_concurrence_scan(const Settings& s) {
  const ModelParams p0 = base_params(s);
  const std::vector<double> grid = sweep_grid(s, 1.0 * s.mass, 1.35 * s.mass);
  for (int n : s.n_list)
    if (n < 1) throw ConfigError("--n-list entries must be positive");
  struct Row {
    bool ok = false;
    ResonantBoundState st;
    std::string error;
  };
  const int nn = static_cast<int>(s.n_list.size());
  std::vector<Row> rows(grid.size() * nn);
  quad::Options q;
  q.rel_tol = s.rel_tol;
  q.abs_tol = s.abs_tol;
  parallel_for(static_cast<int>(rows.size()), s.jobs, [&](int i) {
    const double w = grid[i / nn];
    const int n = s.n_list[i % nn];
    try {
      rows[i].st = solve_resonant_state(p0.with_omega0(w), n, q);
      rows[i].ok = true;
    } catch (const DomainError& e) {
      rows[i].error = e.what();
    }
  });
  Report meta, body;
  describe_config(meta, s, std::nullopt);
  meta.add("sweep.parameter", std::string("omega0"));
  meta.add("sweep.start", grid.front());
  meta.add("sweep.stop", grid.back());
  meta.add("sweep.steps", static_cast<long long>(grid.size()));
  Table table{{"omega0", "n", "k_bar", "d_n", "p_n", "concurrence"}, {}};
  if (s.verbose) {
    table.columns.push_back("p_n_quadrature");
    table.columns.push_back("concurrence_quadrature");
  }
  table.columns.push_back("status");
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const double w = grid[i / nn];
    const long long n = s.n_list[i % nn];
    const auto& r = rows[i];
    std::vector<Cell> row{w, n};
    if (r.ok) {
      row.insert(row.end(), {r.st.k_bar, r.st.d_n, r.st.p_n, r.st.concurrence()});
      if (s.verbose) row.insert(row.end(), {r.st.p_n_quadrature, r.st.concurrence_quadrature()});
      row.push_back(std::string("ok"));
    } else {
      row.insert(row.end(), {Cell{}, Cell{}, Cell{}, Cell{}});
      if (s.verbose) row.insert(row.end(), {Cell{}, Cell{}});
      row.push_back(std::string("absent"));
    }
    table.rows.push_back(std::move(row));
  }
  emit(s, "csv", meta, body, &table);
  return kExitOk;
}

// energy-density ----------------------------------------------------------

int cmd_energy_density(const Settings& s) {
  const ModelParams p0 = base_params(s);
  quad::Options q;
  q.rel_tol = s.rel_tol;
  q.abs_tol = s.abs_tol;
  const ResonantBoundState st = solve_resonant_state(p0, s.n, q);
  const EnergyDensityProfile prof = energy_density(st, s.points, s.margin);
  Report meta, body;
  describe_config(meta, s, std::nullopt);
  meta.add("n", static_cast<long long>(s.n));
  body.add("k_bar", st.k_bar);
  body.add("d_n", st.d_n);
  body.add("energy", st.energy);
  body.add("p_n", st.p_n);
  body.add("prefactor", prof.prefactor);
  Table table{{"x", "energy_density"}, {}};
  for (std::size_t i = 0; i < prof.x.size(); ++i) table.rows.push_back({prof.x[i], prof.density[i]});
  emit(s, "csv", meta, body, &table);
  return kExitOk;
}

// offres ------------------------------------------------------------------

int cmd_offres(const Settings& s) {
  ModelParams p = base_params(s);
  if (s.distance.rfind("auto", 0) == 0)
    throw ConfigError("offres needs an explicit numeric --distance (no resonance below threshold)");
  p.distance = resolve_distance(s.distance, p);
  p.validate();
  const OffResonantState st = off_resonant_states(p);
  const ThresholdReport th = threshold_states(p);
  Report meta, body;
  describe_config(meta, s, p);
  body.add("alpha", st.alpha);
  body.add("beta", st.beta);
  body.add("q", st.q);
  body.add("E_plus", st.e_plus);
  body.add("E_minus", st.e_minus);
  body.add("splitting", st.e_plus - st.e_minus);
  body.add("period", st.period);
  body.add("nonperturbative", st.nonperturbative);
  body.add("threshold.singlet_omega0", th.singlet_omega0);
  body.add("threshold.triplet_suppressed", th.triplet_suppressed);
  if (st.nonperturbative)
    std::cerr << "warning: omega0 close to threshold, the effective 2x2 description is nonperturbative\n";
  if (s.format == "csv") {
    Table table{{}, {{}}};
    for (const auto& [k, v] : body.entries) {
      table.columns.push_back(k);
      table.rows[0].push_back(v);
    }
    emit(s, "csv", meta, Report{}, &table);
  } else {
    emit(s, "json", meta, body, nullptr);
  }
  return kExitOk;
}

// simulate ----------------------------------------------------------------

int cmd_simulate(const Settings& s) {
  const ModelParams p = full_params(s);
  oracle::BuildOptions bo;
  bo.modes = s.modes;
  bo.box_length = s.box_length;
  const oracle::DiscretizedModel model = oracle::build(p, bo);
  const double r = 1.0 / std::sqrt(2.0);
  oracle::SingleExcitationState init;
  if (s.initial == "eA")
    init = model.localized(1.0, 0.0);
  else if (s.initial == "eB")
    init = model.localized(0.0, 1.0);
  else if (s.initial == "singlet")
    init = model.localized(r, -r);
  else if (s.initial == "triplet")
    init = model.localized(r, r);
  else
    throw ConfigError("--initial must be eA, eB, singlet or triplet");

  double t_max = s.t_max;
  if (!(t_max > 0.0)) {
    // Default: five unstable lifetimes when a resonance exists, else half the recurrence time.
    const auto k = resonant_wavenumber(p);
    t_max = k ? 5.0 * *k / (8.0 * kPi * p.lambda * p.lambda) : 0.5 * model.recurrence_time(init);
    if (!std::isfinite(t_max)) t_max = 0.5 * model.recurrence_time(init);
  }
  if (s.t_steps < 2) throw ConfigError("--t-steps must be >= 2");
  std::vector<double> times(s.t_steps);
  for (int i = 0; i < s.t_steps; ++i) times[i] = t_max * i / (s.t_steps - 1);
  const oracle::Evolution ev = oracle::evolve(model, init, times);
  for (const auto& w : ev.warnings) std::cerr << "warning: " << w << '\n';

  Report meta, body;
  describe_config(meta, s, p);
  meta.add("oracle.modes", static_cast<long long>(model.modes()));
  meta.add("oracle.box_length", model.box_length());
  meta.add("oracle.dk", model.dk());
  meta.add("oracle.k_max", model.k_max());
  meta.add("oracle.recurrence_time", ev.recurrence_time);
  meta.add("initial", s.initial);
  for (std::size_t i = 0; i < ev.warnings.size(); ++i)
    body.add("warning." + std::to_string(i), ev.warnings[i]);
  Table table{{"t", "pop_a", "pop_b", "atomic_population", "concurrence"}, {}};
  for (const auto& smp : ev.samples)
    table.rows.push_back({smp.t, smp.population_a, smp.population_b, smp.atomic_population, smp.concurrence});
  emit(s, "csv", meta, body, &table);

  if (s.snapshots > 0) {
    if (s.out.empty() || s.out == "-") throw ConfigError("--snapshots needs --out for the field file");
    const double span = std::max(p.distance, 1.0 / p.mass);
    std::vector<double> x(201);
    for (int i = 0; i < 201; ++i) x[i] = -span + 3.0 * span * i / 200;
    const auto expansion = model.expand(init);
    Table field{{"t", "x", "pole_form", "full"}, {}};
    for (int j = 0; j < s.snapshots; ++j) {
      const double t = s.snapshots == 1 ? t_max : t_max * j / (s.snapshots - 1);
      const auto psi = model.state_at(expansion, t);
      const auto prof = oracle::field_profile(model, psi, x);
      for (std::size_t i = 0; i < x.size(); ++i) field.rows.push_back({t, x[i], prof.pole_form[i], prof.full[i]});
    }
    write_output(s.out + ".field.csv", render_csv(meta, field, !s.no_header));
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  Settings s;
  CLI::App app{"Bound states, resonance poles and entanglement of two emitters in a waveguide", "wgqed"};
  app.set_config("--config", "", "Flat key=value file mirroring the long flags");
  app.allow_config_extras(false);
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  app.require_subcommand(1, 1);

  app.add_option("--omega0", s.omega0, "Bare excitation energy")->capture_default_str();
  app.add_option("--lambda", s.lambda, "Coupling constant")->capture_default_str();
  app.add_option("--mass", s.mass, "Waveguide cutoff M")->capture_default_str();
  app.add_option("--distance", s.distance, "Interatomic distance, or auto:n=K")->capture_default_str();
  app.add_option("--out", s.out, "Output file (stdout when absent)");
  app.add_option("--format", s.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--jobs", s.jobs, "Worker threads for sweeps")->check(CLI::Range(1, 1024))->capture_default_str();
  app.add_flag("--exact", s.exact, "JSON numbers as full-precision decimal strings");
  app.add_flag("--no-header", s.no_header, "Omit '#' metadata lines in CSV output");
  app.add_flag("--verbose", s.verbose, "Extra columns (quadrature populations)");
  app.add_option("--rel-tol", s.rel_tol, "Quadrature relative tolerance")->capture_default_str();
  app.add_option("--abs-tol", s.abs_tol, "Quadrature absolute tolerance")->capture_default_str();
  app.add_option("--max-iterations", s.max_iterations, "Newton iteration cap")->check(CLI::PositiveNumber)->capture_default_str();
  app.add_option("--acceptance", s.acceptance, "Pole acceptance, relative to max(M,|z|)")->capture_default_str();
  app.add_option("--sweep", s.sweep, "Swept parameter: omega0 or distance")->check(CLI::IsMember({"omega0", "distance"}));
  app.add_option("--start", s.start, "Sweep start");
  app.add_option("--stop", s.stop, "Sweep stop");
  app.add_option("--steps", s.steps, "Sweep points (>= 2)")->capture_default_str();
  app.add_option("--sector", s.sector, "plus, minus or both")->check(CLI::IsMember({"plus", "minus", "both"}));
  app.add_option("--n-list", s.n_list, "Resonance indices for concurrence-scan")->delimiter(',');
  app.add_option("--n", s.n, "Resonance index")->check(CLI::PositiveNumber)->capture_default_str();
  app.add_option("--points", s.points, "Energy-density grid points")->capture_default_str();
  app.add_option("--margin", s.margin, "Energy-density margin outside [0, d_n] (default 0.2 d_n)");
  app.add_option("--modes", s.modes, "Oracle mode count N (odd)")->capture_default_str();
  app.add_option("--box-length", s.box_length, "Oracle box length L (default pi N / 8M)");
  app.add_option("--t-max", s.t_max, "Simulation end time");
  app.add_option("--t-steps", s.t_steps, "Simulation time points")->capture_default_str();
  app.add_option("--initial", s.initial, "eA, eB, singlet or triplet")->capture_default_str();
  app.add_option("--snapshots", s.snapshots, "Field-profile snapshots written to <out>.field.csv");

  struct Entry {
    const char* name;
    const char* help;
    int (*run)(const Settings&);
  };
  const Entry entries[] = {
      {"poles", "Second-sheet poles of both sectors with perturbative estimates", cmd_poles},
      {"trajectory", "Pole trajectories under an omega0 or distance sweep", cmd_trajectory},
      {"concurrence-scan", "Asymptotic concurrence p_n^2/2 over omega0", cmd_concurrence_scan},
      {"energy-density", "Field energy density of a resonant bound state", cmd_energy_density},
      {"offres", "Below-threshold bound-state doublet", cmd_offres},
      {"simulate", "Discretized-mode time evolution", cmd_simulate},
  };
  for (const auto& e : entries) app.add_subcommand(e.name, e.help)->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  for (const auto& e : entries)
    if (app.got_subcommand(e.name)) {
      s.subcommand = e.name;
      try {
        return e.run(s);
      } catch (const ConfigError& err) {
        std::cerr << "error: " << err.what() << '\n';
        return kExitConfig;
      } catch (const DomainError& err) {
        std::cerr << "error: " << err.what() << '\n';
        return kExitConfig;
      } catch (const SingularInputError& err) {
        std::cerr << "error: " << err.what() << '\n';
        return kExitConfig;
      } catch (const ConvergenceError& err) {
        std::cerr << "error: " << err.what() << '\n';
        return kExitConvergence;
      } catch (const NumericalFailure& err) {
        std::cerr << "error: " << err.what() << '\n';
        return kExitConvergence;
      }
    }
  return kExitConfig;
}
