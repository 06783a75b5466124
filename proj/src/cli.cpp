#include "peakwave/cli.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <ostream>
#include <sstream>

#include "peakwave/acceptance.hpp"
#include "peakwave/chareval.hpp"
#include "peakwave/detail/parallel.hpp"
#include "peakwave/errors.hpp"
#include "peakwave/hessian.hpp"
#include "peakwave/output.hpp"
#include "peakwave/peakedops.hpp"
#include "peakwave/waveprofile.hpp"

namespace peakwave::cli {

namespace fs = std::filesystem;
using nlohmann::json;
using output::format_double;

namespace {

constexpr double kPeakedMatch = 1e-12;

bool is_peaked_speed(double c) { return std::abs(c - kCStar) <= kPeakedMatch; }

const std::pair<const char*, Command> kCommands[] = {
    {"profile", Command::profile}, {"sweep", Command::sweep},   {"spectrum", Command::spectrum},
    {"peaked-spectrum", Command::peaked_spectrum}, {"strip", Command::strip}, {"evolve", Command::evolve},
    {"verify", Command::verify}};

const char* command_help(Command c) {
  switch (c) {
    case Command::profile: return "wave profile at speed --c (peaked at c*)";
    case Command::sweep: return "energy and amplitude over --c-list";
    case Command::spectrum: return "four lowest Hessian eigenvalues over --c-list";
    case Command::peaked_spectrum: return "regularized Hessian spectrum at c*";
    case Command::strip: return "eigenfunctions and resolvent bound around the critical strip";
    case Command::evolve: return "nonlinear perturbation of the peaked wave";
    case Command::verify: return "run the acceptance checks";
  }
  return "";
}

MethodChoice parse_method(const std::string& s) {
  if (s == "fd") return MethodChoice::fd;
  if (s == "fourier") return MethodChoice::fourier;
  if (s == "both") return MethodChoice::both;
  throw ConfigError("method", "expected fd, fourier or both, got '" + s + "'");
}

std::vector<Method> methods_of(MethodChoice m) {
  switch (m) {
    case MethodChoice::fd: return {Method::fd};
    case MethodChoice::fourier: return {Method::fourier};
    case MethodChoice::both: break;
  }
  return {Method::fd, Method::fourier};
}

int jobs_of(const RunConfig& cfg) { return cfg.jobs > 0 ? cfg.jobs : detail::default_jobs(); }

// Output sink shared by the commands: writes atomically and logs one line per file.
class Emitter {
 public:
  Emitter(const RunConfig& cfg, std::ostream& log) : dir_(cfg.out_dir), hash_(config_hash(cfg)), log_(log) {}

  const std::string& hash() const { return hash_; }

  void csv(const std::string& name, const output::CsvTable& table) {
    write(name, table.render(hash_), std::to_string(table.rows()) + " rows");
  }
  void json_file(const std::string& name, const json& j) { write(name, j.dump(2) + "\n", "json"); }
  void text(const std::string& name, const std::string& body, const std::string& what) { write(name, body, what); }

 private:
  void write(const std::string& name, const std::string& body, const std::string& what) {
    const fs::path p = dir_ / name;
    output::write_atomic(p, body);
    log_ << "wrote " << p.string() << " (" << what << ")\n";
  }
  fs::path dir_;
  std::string hash_;
  std::ostream& log_;
};

int run_profile(const RunConfig& cfg, Emitter& out) {
  const Grid grid(cfg.n_half);
  const bool peaked = is_peaked_speed(cfg.c);
  const auto prof = peaked ? peaked_profile(grid) : smooth_profile(cfg.c, grid, cfg.tol);
  const int n = grid.n_half;

  output::CsvTable table({"x", "eta", "slope"});
  for (int j = -n; j <= n; ++j)
    table.add_row({format_double(grid.node(j)), format_double(prof.values[j + n]), format_double(prof.slope[j + n])});
  out.csv("profile.csv", table);

  const auto co = dft(prof.values);
  output::CsvTable fourier({"n", "re", "im"});
  for (int m = 0; m <= n; ++m)
    fourier.add_row({std::to_string(m), format_double(co.at(m).real()), format_double(co.at(m).imag())});
  out.csv("profile_fourier.csv", fourier);

  const auto res = check_residuals(prof);
  const auto cons = full_conserved(prof);
  json j;
  j["config"] = to_json(cfg);
  j["kind"] = peaked ? "peaked" : "smooth";
  j["c"] = prof.params.c;
  j["energy_level"] = prof.params.energy;
  j["amplitude"] = prof.params.amplitude();
  j["period"] = period(prof.params.energy, prof.params.c);
  j["max_inverse_map_residual"] = prof.max_inverse_map_residual;
  j["first_integral_residual"] = res.first_integral;
  j["zero_mean_residual"] = res.zero_mean;
  j["mass"] = cons.mass;
  j["momentum"] = cons.momentum;
  j["hamiltonian"] = cons.energy;
  out.json_file("profile.json", j);

  if (cfg.svg) {
    std::vector<double> x(grid.size()), logn, logc;
    for (int j2 = -n; j2 <= n; ++j2) x[j2 + n] = grid.node(j2);
    out.text("profile.svg",
             output::svg_line_plot("wave profile", "x", "eta", {{"c = " + format_double(prof.params.c), x, prof.values}}),
             "svg");
    for (int m = 1; m <= n; ++m) {
      const double a = std::abs(co.at(m));
      if (a <= 0.0) continue;
      logn.push_back(std::log10(m));
      logc.push_back(std::log10(a));
    }
    out.text("profile_fourier.svg",
             output::svg_line_plot("Fourier coefficients", "log10 n", "log10 |eta_n|", {{"|eta_n|", logn, logc}}),
             "svg");
  }
  return kSuccess;
}

int run_sweep(const RunConfig& cfg, Emitter& out) {
  std::vector<double> cs;
  for (double c : cfg.c_list)
    if (!is_peaked_speed(c)) cs.push_back(c);
  const auto rows = amplitude_sweep(cs, Grid(cfg.n_half), jobs_of(cfg));
  output::CsvTable table({"c", "energy", "amplitude", "status"});
  bool failures = false;
  std::vector<double> x, y;
  for (const auto& r : rows) {
    table.add_row({format_double(r.c), format_double(r.energy), format_double(r.amplitude),
                   r.ok ? "ok" : "error: " + r.error});
    failures = failures || !r.ok;
    if (r.ok) x.push_back(r.c), y.push_back(r.amplitude);
  }
  out.csv("sweep.csv", table);
  if (cfg.svg)
    out.text("sweep.svg", output::svg_line_plot("crest height versus speed", "c", "max eta", {{"amplitude", x, y}}),
             "svg");
  return failures ? kRowFailures : kSuccess;
}

int run_spectrum(const RunConfig& cfg, Emitter& out) {
  const Grid grid(cfg.n_half);
  std::vector<double> cs;
  bool with_peaked = false;
  for (double c : cfg.c_list) {
    if (is_peaked_speed(c))
      with_peaked = true;
    else
      cs.push_back(c);
  }
  SweepOptions so;
  so.methods = methods_of(cfg.method);
  so.include_peaked_endpoint = with_peaked;
  so.jobs = jobs_of(cfg);
  const auto rows = eigen_sweep(cs, grid, so);

  std::vector<std::string> header{"c", "method"};
  for (const char* col : {"lambda", "parity", "residual"})
    for (int k = 1; k <= 4; ++k) header.push_back(std::string(col) + std::to_string(k));
  header.push_back("status");
  header.push_back("grey");
  output::CsvTable table(header);
  bool failures = false;
  for (const auto& r : rows) {
    std::vector<std::string> cells{format_double(r.c), std::string(to_string(r.method)) + (r.peaked ? "-peaked" : "")};
    for (double v : r.lambda) cells.push_back(format_double(v));
    for (Parity p : r.parity) cells.push_back(to_string(p));
    for (double v : r.residual) cells.push_back(format_double(v));
    cells.push_back(r.ok ? "ok" : "error: " + r.error);
    cells.push_back(r.grey ? "1" : "0");
    table.add_row(std::move(cells));
    failures = failures || !r.ok;
  }
  out.csv("spectrum.csv", table);

  // Constant term of the Fourier potential: -I against -pi I.
  json report;
  report["config"] = to_json(cfg);
  json variants = json::array();
  const bool fourier = cfg.method != MethodChoice::fd;
  for (double c : cs) {
    if (!fourier) break;
    json item;
    item["c"] = c;
    try {
      const auto prof = smooth_profile(c, grid, cfg.tol);
      const auto co = dft(prof.values);
      const auto consistent = eigenvalues(assemble_L_fourier(co, c, -1.0));
      const auto alt = eigenvalues(assemble_L_fourier(co, c, -kPi));
      json a = json::array(), b = json::array();
      double shift = 0.0;
      for (int k = 0; k < 4; ++k) {
        a.push_back(consistent[k].real());
        b.push_back(alt[k].real());
        shift = std::max(shift, std::abs(alt[k] - consistent[k]));
      }
      item["lambda_identity"] = a;
      item["lambda_pi_identity"] = b;
      item["max_shift"] = shift;
      for (const auto& r : rows)
        if (r.c == c && r.method == Method::fd && r.ok) {
          double dev_a = 0.0, dev_b = 0.0;
          for (int k = 0; k < 4; ++k) {
            dev_a = std::max(dev_a, std::abs(r.lambda[k] - consistent[k].real()));
            dev_b = std::max(dev_b, std::abs(r.lambda[k] - alt[k].real()));
          }
          item["fd_deviation_identity"] = dev_a;
          item["fd_deviation_pi_identity"] = dev_b;
        }
    } catch (const std::exception& ex) {
      item["error"] = ex.what();
      failures = true;
    }
    variants.push_back(item);
  }
  report["constant_term"] = variants;
  out.json_file("spectrum.json", report);

  if (cfg.dump_matrix) {
    for (double c : cs) {
      const auto prof = smooth_profile(c, grid, cfg.tol);
      for (Method m : so.methods) {
        const auto mat = m == Method::fd ? assemble_L_fd(prof) : assemble_L_fourier(dft(prof.values), c);
        out.text(std::string("matrices/L_") + to_string(m) + "_c" + format_double(c) + ".txt",
                 output::matrix_dump(mat), "matrix");
      }
    }
  }

  if (cfg.svg) {
    for (Method m : so.methods) {
      std::vector<output::Series> series;
      for (int k = 0; k < 4; ++k) {
        output::Series s{"lambda" + std::to_string(k + 1), {}, {}, false};
        output::Series dots{"", {}, {}, true};
        for (const auto& r : rows) {
          if (r.method != m || !r.ok) continue;
          (r.peaked ? dots : s).x.push_back(r.c);
          (r.peaked ? dots : s).y.push_back(r.lambda[k]);
        }
        series.push_back(s);
        if (!dots.x.empty()) series.push_back(dots);
      }
      out.text(std::string("spectrum_") + to_string(m) + ".svg",
               output::svg_line_plot(std::string("lowest eigenvalues (") + to_string(m) + ")", "c", "lambda", series),
               "svg");
    }
  }
  return failures ? kRowFailures : kSuccess;
}

int run_peaked_spectrum(const RunConfig& cfg, Emitter& out) {
  const Grid grid(cfg.n_half);
  output::CsvTable table({"method", "k", "lambda_re", "lambda_im", "parity", "residual"});
  for (Method m : methods_of(cfg.method)) {
    const auto sp = eig(assemble_L_peaked(grid, m));
    for (std::size_t k = 0; k < std::min<std::size_t>(8, sp.eigenvalues.size()); ++k)
      table.add_row({to_string(m), std::to_string(k + 1), format_double(sp.eigenvalues[k].real()),
                     format_double(sp.eigenvalues[k].imag()), to_string(sp.parities[k]),
                     format_double(sp.residuals[k])});
  }
  out.csv("peaked_spectrum.csv", table);
  return kSuccess;
}

int run_strip(const RunConfig& cfg, Emitter& out) {
  const auto samples = cfg.lambdas.empty() ? default_strip_samples() : cfg.lambdas;
  StripOptions so;
  so.jobs = jobs_of(cfg);
  const auto rows = strip_report(Grid(cfg.n_half), samples, so);
  output::CsvTable table({"lambda_re", "lambda_im", "class", "residual_or_ratio", "status"});
  for (const auto& r : rows)
    table.add_row({format_double(r.lambda.real()), format_double(r.lambda.imag()), to_string(r.cls),
                   format_double(r.value), r.status});
  out.csv("strip.csv", table);
  return strip_verdict(rows) ? kSuccess : kRowFailures;
}

int run_evolve(const RunConfig& cfg, Emitter& out) {
  const auto r = instability_experiment(cfg.delta, cfg.t_end, cfg.dt, cfg.intervals);
  output::CsvTable table({"t", "V0", "mass_zeta", "blowup_invariant", "max_abs_V", "min_spacing"});
  for (const auto& s : r.records)
    table.add_row({format_double(s.t), format_double(s.v0), format_double(s.mass_zeta), format_double(s.blowup_invariant),
                   format_double(s.max_abs_V), format_double(s.min_spacing)});
  out.csv("evolve.csv", table);

  json j;
  j["config"] = to_json(cfg);
  j["fitted_rate"] = r.fitted_rate;
  j["theory_rate"] = r.theory_rate;
  j["relative_error"] = r.relative_error;
  j["blowup_time"] = r.blowup_time ? json(*r.blowup_time) : json(nullptr);
  j["reached_ten_delta"] = r.reached_ten_delta;
  j["broke"] = r.broke;
  j["breaking_time"] = r.broke ? json(r.breaking_time) : json(nullptr);
  j["breaking_reason"] = r.breaking_reason;
  out.json_file("experiment.json", j);

  if (cfg.svg) {
    output::Series data{"log |V0|", {}, {}, false}, theory{"linear growth", {}, {}, false};
    const double v00 = r.records.empty() ? 0.0 : std::abs(r.records.front().v0);
    const std::size_t stride = std::max<std::size_t>(1, r.records.size() / 1000);
    for (std::size_t i = 0; i < r.records.size(); i += stride) {
      const auto& s = r.records[i];
      if (s.v0 == 0.0) continue;
      data.x.push_back(s.t);
      data.y.push_back(std::log(std::abs(s.v0)));
      if (v00 > 0.0 && std::abs(s.v0) <= 20.0 * v00) {
        theory.x.push_back(s.t);
        theory.y.push_back(std::log(v00) + r.theory_rate * s.t);
      }
    }
    out.text("evolve.svg", output::svg_line_plot("crest slope growth", "t", "log |V0|", {data, theory}), "svg");
  }
  return kSuccess;
}

int run_verify(const RunConfig& cfg, Emitter& out, std::ostream& log) {
  AcceptanceOptions opt;
  opt.jobs = jobs_of(cfg);
  opt.scratch_dir = cfg.out_dir;
  output::CsvTable table({"id", "name", "status", "detail"});
  json list = json::array();
  bool all = true;
  for (int id = 1; id <= kCriterionCount; ++id) {
    const auto r = run_criterion(id, opt);
    log << (r.passed ? "PASS " : "FAIL ") << r.id << " " << r.name << ": " << r.detail << "\n";
    std::string detail = r.detail;
    for (char& ch : detail)
      if (ch == ',') ch = ';';
    table.add_row({std::to_string(r.id), r.name, r.passed ? "PASS" : "FAIL", detail});
    list.push_back({{"id", r.id}, {"name", r.name}, {"passed", r.passed}, {"detail", r.detail}});
    all = all && r.passed;
  }
  out.csv("verify.csv", table);
  out.json_file("verify.json", {{"config", to_json(cfg)}, {"criteria", list}, {"all_passed", all}});
  return all ? kSuccess : kRowFailures;
}

}  // namespace

const char* to_string(Command c) {
  for (const auto& [name, cmd] : kCommands)
    if (cmd == c) return name;
  return "?";
}

const char* to_string(MethodChoice m) {
  switch (m) {
    case MethodChoice::fd: return "fd";
    case MethodChoice::fourier: return "fourier";
    case MethodChoice::both: return "both";
  }
  return "?";
}

void validate(const RunConfig& cfg) {
  auto speed = [](const char* field, double c) {
    if (!(c > 1.0 && c <= kCStar + kPeakedMatch))
      throw ConfigError(field, "speed must lie in (1, c*] with c* = " + format_double(kCStar) + ", got " + format_double(c));
  };
  if (cfg.n_half < 8) throw ConfigError("n_half", "need N >= 8, got " + std::to_string(cfg.n_half));
  speed("c", cfg.c);
  if (cfg.c_list.empty()) throw ConfigError("c_list", "empty");
  for (double c : cfg.c_list) speed("c_list", c);
  if (!(cfg.tol > 0.0)) throw ConfigError("tol", "must be positive");
  if (!(cfg.dt > 0.0)) throw ConfigError("dt", "must be positive");
  if (!(cfg.t_end > 0.0)) throw ConfigError("t_end", "must be positive");
  if (!(cfg.delta > 0.0)) throw ConfigError("delta", "must be positive");
  if (cfg.intervals < 16) throw ConfigError("intervals", "need at least 16 labels");
  if (cfg.jobs < 0) throw ConfigError("jobs", "must be non-negative");
  for (const auto& l : cfg.lambdas)
    if (!std::isfinite(l.real()) || !std::isfinite(l.imag())) throw ConfigError("lambdas", "non-finite sample");
  if (cfg.out_dir.empty()) throw ConfigError("out_dir", "empty path");
}

json to_json(const RunConfig& cfg) {
  json lambdas = json::array();
  for (const auto& l : cfg.lambdas) lambdas.push_back({l.real(), l.imag()});
  return {{"command", to_string(cfg.command)},
          {"c", cfg.c},
          {"c_list", cfg.c_list},
          {"n_half", cfg.n_half},
          {"tol", cfg.tol},
          {"method", to_string(cfg.method)},
          {"t_end", cfg.t_end},
          {"dt", cfg.dt},
          {"delta", cfg.delta},
          {"intervals", cfg.intervals},
          {"lambdas", lambdas},
          {"svg", cfg.svg},
          {"dump_matrix", cfg.dump_matrix}};
}

void apply_json(RunConfig& cfg, const json& j) {
  if (!j.is_object()) throw ConfigError("config", "top level must be an object");
  for (const auto& [key, v] : j.items()) {
    try {
      if (key == "c") cfg.c = v.get<double>();
      else if (key == "c_list") cfg.c_list = v.get<std::vector<double>>();
      else if (key == "n_half") cfg.n_half = v.get<int>();
      else if (key == "tol") cfg.tol = v.get<double>();
      else if (key == "method") cfg.method = parse_method(v.get<std::string>());
      else if (key == "t_end") cfg.t_end = v.get<double>();
      else if (key == "dt") cfg.dt = v.get<double>();
      else if (key == "delta") cfg.delta = v.get<double>();
      else if (key == "intervals") cfg.intervals = v.get<int>();
      else if (key == "out_dir") cfg.out_dir = v.get<std::string>();
      else if (key == "jobs") cfg.jobs = v.get<int>();
      else if (key == "svg") cfg.svg = v.get<bool>();
      else if (key == "dump_matrix") cfg.dump_matrix = v.get<bool>();
      else if (key == "lambdas") {
        cfg.lambdas.clear();
        for (const auto& p : v) {
          const auto pair = p.get<std::vector<double>>();
          if (pair.size() != 2) throw ConfigError("lambdas", "each sample is [re, im]");
          cfg.lambdas.emplace_back(pair[0], pair[1]);
        }
      } else if (key == "command") {
        // informational; the subcommand on the command line decides
      } else {
        throw ConfigError(key, "unknown config key");
      }
    } catch (const json::exception& ex) {
      throw ConfigError(key, ex.what());
    }
  }
}

std::string config_hash(const RunConfig& cfg) { return output::hex64(output::fnv1a(to_json(cfg).dump())); }

std::vector<std::complex<double>> default_strip_samples() {
  return {{0.1, 0.0}, {0.3, 0.0}, {0.5, 0.0},  {0.2, 2.0},  {0.7, 3.0},  {-0.3, 1.0},
          {0.0, 0.0}, {kPi / 4, 0.0}, {-kPi / 4, 1.0}, {1.0, 0.0}, {1.5, 0.0}, {0.9, 5.0},
          {-1.0, 0.5}};
}

int run(const RunConfig& cfg, std::ostream& log) {
  validate(cfg);
  Emitter out(cfg, log);
  switch (cfg.command) {
    case Command::profile: return run_profile(cfg, out);
    case Command::sweep: return run_sweep(cfg, out);
    case Command::spectrum: return run_spectrum(cfg, out);
    case Command::peaked_spectrum: return run_peaked_spectrum(cfg, out);
    case Command::strip: return run_strip(cfg, out);
    case Command::evolve: return run_evolve(cfg, out);
    case Command::verify: return run_verify(cfg, out, log);
  }
  return kAborted;
}

int main(int argc, char** argv) {
  CLI::App app{"Peaked and smooth traveling waves: profiles, spectra and perturbation experiments"};
  app.require_subcommand(1);

  std::string config_path, method, out_dir;
  double c = 0, tol = 0, t_end = 0, dt = 0, delta = 0;
  int n = 0, jobs = 0, intervals = 0;
  std::vector<double> c_list;
  std::vector<std::string> lambdas;
  bool svg = false, dump = false;

  app.add_option("--config", config_path, "JSON file with config keys")->check(CLI::ExistingFile);
  auto* o_c = app.add_option("--c", c, "wave speed");
  auto* o_list = app.add_option("--c-list", c_list, "comma separated speeds")->delimiter(',');
  auto* o_n = app.add_option("--n", n, "grid half-size N");
  auto* o_tol = app.add_option("--tol", tol, "Newton tolerance");
  auto* o_method = app.add_option("--method", method, "fd, fourier or both");
  auto* o_tend = app.add_option("--t-end", t_end, "final time");
  auto* o_dt = app.add_option("--dt", dt, "time step");
  auto* o_delta = app.add_option("--delta", delta, "perturbation size");
  auto* o_intervals = app.add_option("--intervals", intervals, "characteristic labels");
  auto* o_lambda = app.add_option("--lambda", lambdas, "strip sample re,im (repeatable)");
  auto* o_out = app.add_option("--out", out_dir, "output directory");
  auto* o_jobs = app.add_option("--jobs", jobs, "worker threads (0: all cores)");
  auto* o_svg = app.add_flag("--svg", svg, "also write SVG plots");
  auto* o_dump = app.add_flag("--dump-matrix", dump, "write assembled matrices");

  Command chosen = Command::profile;
  for (const auto& [name, cmd] : kCommands) {
    auto* sub = app.add_subcommand(name, command_help(cmd));
    sub->fallthrough();
    sub->callback([&chosen, cmd = cmd] { chosen = cmd; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kSuccess : kValidation;
  }

  RunConfig cfg;
  cfg.command = chosen;
  try {
    if (!config_path.empty()) {
      std::ifstream f(config_path);
      json j;
      try {
        j = json::parse(f);
      } catch (const json::exception& ex) {
        throw ConfigError("config", ex.what());
      }
      apply_json(cfg, j);
    }
    if (const char* env = std::getenv("PEAKWAVE_OUT"); env && *env) cfg.out_dir = env;
    if (o_c->count()) cfg.c = c;
    if (o_list->count()) cfg.c_list = c_list;
    if (o_n->count()) cfg.n_half = n;
    if (o_tol->count()) cfg.tol = tol;
    if (o_method->count()) cfg.method = parse_method(method);
    if (o_tend->count()) cfg.t_end = t_end;
    if (o_dt->count()) cfg.dt = dt;
    if (o_delta->count()) cfg.delta = delta;
    if (o_intervals->count()) cfg.intervals = intervals;
    if (o_out->count()) cfg.out_dir = out_dir;
    if (o_jobs->count()) cfg.jobs = jobs;
    if (o_svg->count()) cfg.svg = svg;
    if (o_dump->count()) cfg.dump_matrix = dump;
    if (o_lambda->count()) {
      cfg.lambdas.clear();
      for (const auto& s : lambdas) {
        const auto comma = s.find(',');
        try {
          const double re = std::stod(s.substr(0, comma));
          const double im = comma == std::string::npos ? 0.0 : std::stod(s.substr(comma + 1));
          cfg.lambdas.emplace_back(re, im);
        } catch (const std::exception&) {
          throw ConfigError("lambdas", "cannot parse '" + s + "', expected re,im");
        }
      }
    }
    validate(cfg);
  } catch (const ConfigError& ex) {
    std::cerr << "config error: " << ex.what() << "\n";
    return kValidation;
  }

  try {
    return run(cfg, std::cout);
  } catch (const ConfigError& ex) {
    std::cerr << "config error: " << ex.what() << "\n";
    return kValidation;
  } catch (const std::exception& ex) {
    std::cerr << "aborted: " << ex.what() << "\n";
    return kAborted;
  }
}

}  // namespace peakwave::cli
