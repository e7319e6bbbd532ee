#include "cglab/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <ctime>
#include <functional>
#include <iostream>
#include <map>
#include <mutex>
#include <set>
#include <thread>

#include "cglab/landau.hpp"
#include "cglab/limits.hpp"
#include "cglab/polyspace.hpp"
#include "cglab/stats.hpp"

namespace cglab {

namespace fs = std::filesystem;

Potential make_potential(const PotentialSpec& spec) {
  if (spec.p < 1) throw ConfigError("potential: p must be >= 1");
  if (spec.kind == "radial") return Potential::radial(spec.p);
  if (spec.kind == "radial_harmonic") {
    if (spec.d < 1) throw ConfigError("potential: d must be >= 1");
    if (spec.d > 2 * spec.p || (spec.d == 2 * spec.p && std::abs(spec.t) >= 1))
      throw ConfigError("potential: harmonic term dominates the growth");
    return Potential::radial_harmonic(spec.p, spec.t, spec.d);
  }
  throw ConfigError("potential: unknown kind '" + spec.kind + "'");
}

namespace {

const std::set<std::string> kCommands = {"sample", "fekete", "kernel", "concentrate", "verify", "stats", "report"};
const std::set<std::string> kSuites = {"all", "special", "kernel", "concentration", "decay", "exact_identity"};
const std::set<std::string> kKeys = {"command", "potential", "n", "c", "beta", "seeds", "seed", "sweeps",
                                     "m", "L", "l", "center", "regime", "rho_sampling", "rho_interpolation",
                                     "M", "suite", "family", "inputs", "out"};
const std::set<std::string> kPotentialKeys = {"kind", "p", "t", "d"};

template <class T>
std::vector<T> scalar_or_list(const json& v) {
  if (v.is_array()) return v.get<std::vector<T>>();
  return {v.get<T>()};
}

std::string join(const std::vector<std::string>& v, const std::string& sep) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? sep : "") + v[i];
  return s;
}

}  // namespace

RunConfig parse_run_config(const json& j) {
  if (!j.is_object()) throw ConfigError("run config must be a JSON object");
  std::vector<std::string> unknown;
  for (auto it = j.begin(); it != j.end(); ++it)
    if (!kKeys.count(it.key())) unknown.push_back(it.key());
  if (j.contains("potential") && j["potential"].is_object())
    for (auto it = j["potential"].begin(); it != j["potential"].end(); ++it)
      if (!kPotentialKeys.count(it.key())) unknown.push_back("potential." + it.key());
  if (!unknown.empty()) throw ConfigError("unknown keys: " + join(unknown, ", "));

  RunConfig c;
  try {
    c.command = j.at("command").get<std::string>();
    if (j.contains("potential")) {
      const auto& p = j["potential"];
      c.potential.kind = p.value("kind", c.potential.kind);
      c.potential.p = p.value("p", c.potential.p);
      c.potential.t = p.value("t", c.potential.t);
      c.potential.d = p.value("d", c.potential.d);
    }
    if (j.contains("n")) c.n = scalar_or_list<int>(j["n"]);
    if (j.contains("c")) c.c = j["c"].get<double>();
    if (j.contains("beta")) c.beta = j["beta"].get<double>();
    c.seeds = j.value("seeds", c.seeds);
    c.seed = j.value("seed", c.seed);
    c.sweeps = j.value("sweeps", c.sweeps);
    c.m = j.value("m", c.m);
    if (j.contains("L")) c.L = scalar_or_list<double>(j["L"]);
    if (j.contains("l")) c.l = scalar_or_list<double>(j["l"]);
    if (j.contains("center")) c.center = j["center"].get<std::vector<double>>();
    c.regime = j.value("regime", c.regime);
    c.rho_sampling = j.value("rho_sampling", c.rho_sampling);
    c.rho_interpolation = j.value("rho_interpolation", c.rho_interpolation);
    c.M = j.value("M", c.M);
    c.suite = j.value("suite", c.suite);
    c.family = j.value("family", c.family);
    if (j.contains("inputs")) c.inputs = scalar_or_list<std::string>(j["inputs"]);
    c.out = j.value("out", c.out);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("run config: ") + e.what());
  }

  std::vector<std::string> bad;
  if (!kCommands.count(c.command)) bad.push_back("command '" + c.command + "' is not one of sample, fekete, kernel, concentrate, verify, stats, report");
  make_potential(c.potential);
  for (std::size_t i = 0; i < c.n.size(); ++i) {
    if (c.n[i] < 2) bad.push_back("n must be >= 2");
    if (i > 0 && c.n[i] <= c.n[i - 1]) bad.push_back("n-grid must be strictly ascending");
  }
  if (c.c && c.beta) bad.push_back("give c or beta, not both");
  if (c.c && !(*c.c > 0)) bad.push_back("c must be positive");
  if (c.beta && !(*c.beta > 0)) bad.push_back("beta must be positive");
  if (c.seeds < 1) bad.push_back("seeds must be >= 1");
  if (c.sweeps < 1) bad.push_back("sweeps must be >= 1");
  if (c.m < 2) bad.push_back("m must be >= 2");
  if (c.center.size() != 2) bad.push_back("center must be [x, y]");
  if (c.regime != "bulk" && c.regime != "boundary") bad.push_back("regime must be bulk or boundary");
  if (!kSuites.count(c.suite)) bad.push_back("unknown suite '" + c.suite + "'");
  if (c.family != "gibbs" && c.family != "fekete") bad.push_back("family must be gibbs or fekete");
  if (!(c.rho_sampling > 0 && c.rho_sampling < 1)) bad.push_back("rho_sampling must lie in (0,1)");
  if (!(c.rho_interpolation > 1)) bad.push_back("rho_interpolation must exceed 1");
  if (c.M < 0) bad.push_back("M must be >= 0");
  for (double L : c.L)
    if (!(L > 0)) bad.push_back("L values must be positive");
  bool needs_n = c.command == "sample" || c.command == "fekete" || (c.command == "stats" && c.inputs.empty());
  if (needs_n && c.n.empty()) bad.push_back(c.command + " needs n");
  bool needs_temp = c.command == "sample" || (c.command == "stats" && c.inputs.empty() && c.family == "gibbs");
  if (needs_temp && !c.c && !c.beta) bad.push_back(c.command + " needs c or beta");
  if (!bad.empty()) throw ConfigError(join(bad, "; "));
  return c;
}

json emit_run_config(const RunConfig& c) {
  json j;
  j["command"] = c.command;
  j["potential"] = {{"kind", c.potential.kind}, {"p", c.potential.p}, {"t", c.potential.t}, {"d", c.potential.d}};
  j["n"] = c.n;
  if (c.c) j["c"] = *c.c;
  if (c.beta) j["beta"] = *c.beta;
  j["seeds"] = c.seeds;
  j["seed"] = c.seed;
  j["sweeps"] = c.sweeps;
  j["m"] = c.m;
  j["L"] = c.L;
  j["l"] = c.l;
  j["center"] = c.center;
  j["regime"] = c.regime;
  j["rho_sampling"] = c.rho_sampling;
  j["rho_interpolation"] = c.rho_interpolation;
  j["M"] = c.M;
  j["suite"] = c.suite;
  j["family"] = c.family;
  j["inputs"] = c.inputs;
  j["out"] = c.out;
  return j;
}

namespace {

std::string utc_now() {
  std::time_t t = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string pad(long v, int width) {
  std::string s = std::to_string(v);
  return std::string(std::max(0, width - int(s.size())), '0') + s;
}

// first exception wins; remaining jobs are skipped
void parallel_for(std::size_t count, int threads, const std::function<void(std::size_t)>& fn) {
  std::atomic<std::size_t> next{0};
  std::exception_ptr err;
  std::mutex mu;
  auto worker = [&] {
    for (;;) {
      std::size_t i = next++;
      if (i >= count) return;
      {
        std::lock_guard<std::mutex> g(mu);
        if (err) return;
      }
      try {
        fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> g(mu);
        if (!err) err = std::current_exception();
      }
    }
  };
  int k = std::max(1, std::min<int>(threads, int(count)));
  std::vector<std::thread> pool;
  for (int t = 1; t < k; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  if (err) std::rethrow_exception(err);
}

class Artifacts {
 public:
  explicit Artifacts(fs::path dir) : dir_(std::move(dir)) {}

  void put(const std::string& rel, const std::string& text) {
    write_text(dir_ / rel, text);
    std::lock_guard<std::mutex> g(mu_);
    files_.push_back(rel);
  }
  void put_json(const std::string& rel, const json& j) { put(rel, j.dump(2) + "\n"); }

  json listing() const {
    std::vector<std::string> f = files_;
    std::sort(f.begin(), f.end());
    json a = json::array();
    for (const auto& rel : f) {
      std::string text = read_text(dir_ / rel);
      a.push_back({{"file", rel}, {"sha256", sha256_hex(text)}, {"bytes", text.size()}});
    }
    return a;
  }

  const fs::path& dir() const { return dir_; }
  std::vector<std::string> warnings;

 private:
  fs::path dir_;
  std::mutex mu_;
  std::vector<std::string> files_;
};

struct Ctx {
  const RunConfig& cfg;
  const RunOptions& opt;
  Artifacts& art;
  Potential pot;
  std::uint64_t base_seed;
};

struct Job {
  int n;
  int k;
};

std::vector<Job> jobs_for(const RunConfig& cfg) {
  std::vector<Job> jobs;
  for (int n : cfg.n)
    for (int k = 0; k < cfg.seeds; ++k) jobs.push_back({n, k});
  return jobs;
}

std::string config_name(const std::string& prefix, const Job& jb) {
  return "configs/" + prefix + "_n" + pad(jb.n, 4) + "_k" + pad(jb.k, 3) + ".json";
}

double resolve_beta(const RunConfig& cfg, int n) { return cfg.beta ? *cfg.beta : beta_from_c(*cfg.c, n); }

std::vector<Configuration> generate_gibbs(Ctx& x, const std::string& prefix, bool write) {
  auto jobs = jobs_for(x.cfg);
  std::vector<Configuration> out(jobs.size());
  std::vector<std::vector<std::string>> rows(jobs.size());
  parallel_for(jobs.size(), x.opt.threads, [&](std::size_t i) {
    std::uint64_t seed = derive_seed(x.base_seed, i);
    GibbsResult g = sample_gibbs(x.pot, jobs[i].n, resolve_beta(x.cfg, jobs[i].n), x.cfg.sweeps, seed);
    g.config.c = x.cfg.c;
    if (write) x.art.put_json(config_name(prefix, jobs[i]), config_to_json(g.config));
    rows[i] = {std::to_string(jobs[i].n), std::to_string(jobs[i].k), std::to_string(seed),
               fmt_double(g.config.beta), fmt_double(g.diagnostics.acceptance_rate),
               fmt_double(g.diagnostics.step_scale), std::to_string(g.diagnostics.restarts),
               fmt_double(g.diagnostics.energy_trace.empty() ? 0.0 : g.diagnostics.energy_trace.back())};
    out[i] = std::move(g.config);
  });
  if (write) {
    CsvTable t({"n", "k", "seed", "beta", "acceptance", "step_scale", "restarts", "final_energy"});
    for (auto& r : rows) t.add(r);
    x.art.put("diagnostics.csv", t.str());
  }
  return out;
}

std::vector<Configuration> generate_fekete(Ctx& x, const std::string& prefix, bool write) {
  auto jobs = jobs_for(x.cfg);
  std::vector<Configuration> out(jobs.size());
  std::vector<std::vector<std::string>> rows(jobs.size());
  parallel_for(jobs.size(), x.opt.threads, [&](std::size_t i) {
    std::uint64_t seed = derive_seed(x.base_seed, i);
    FeketeResult f = fekete(x.pot, jobs[i].n, seed);
    if (write) x.art.put_json(config_name(prefix, jobs[i]), config_to_json(f.config));
    rows[i] = {std::to_string(jobs[i].n), std::to_string(jobs[i].k), std::to_string(seed), fmt_double(f.energy),
               fmt_double(f.grad_max), f.converged ? "1" : "0", std::to_string(f.iterations)};
    out[i] = std::move(f.config);
  });
  for (std::size_t i = 0; i < rows.size(); ++i)
    if (rows[i][5] == "0")
      x.art.warnings.push_back("fekete n=" + rows[i][0] + " k=" + rows[i][1] + " stopped before the gradient tolerance");
  if (write) {
    CsvTable t({"n", "k", "seed", "energy", "grad_max", "converged", "iterations"});
    for (auto& r : rows) t.add(r);
    x.art.put("diagnostics.csv", t.str());
  }
  return out;
}

void cmd_kernel(Ctx& x) {
  const int m = x.cfg.m;
  WeightedPolySpace space = WeightedPolySpace::build(x.pot, m);
  double R = x.pot.radial_droplet_radius();
  CsvTable t({"x", "one_point"});
  for (int i = 0; i <= 120; ++i) {
    double r = -1.5 * R + 3.0 * R * i / 120;
    t.add({fmt_double(r), fmt_double(space.one_point(r))});
  }
  x.art.put("kernel.csv", t.str());
  json summary = {{"m", m}, {"condition_estimate", space.condition_estimate()},
                  {"gram_deviation", space.gram_deviation()}, {"cut_radius", space.cut_radius()}};
  json profiles = json::array();
  if (x.pot.is_radial()) {
    Droplet S = droplet(x.pot);
    for (double l : x.cfg.l) {
      Profile prof = boundary_profile(space, S, l, 81);
      CsvTable pt({"x", "rescaled", "limit"});
      for (const auto& r : prof.rows) pt.add({fmt_double(r.x), fmt_double(r.rescaled), fmt_double(r.limit)});
      x.art.put("profile_l" + fmt_double(l) + ".csv", pt.str());
      profiles.push_back({{"l", l}, {"max_deviation", prof.max_deviation}});
    }
  }
  summary["profiles"] = profiles;
  x.art.put_json("kernel.json", summary);
}

void cmd_concentrate(Ctx& x) {
  const int m = x.cfg.m;
  WeightedPolySpace space = WeightedPolySpace::build(x.pot, m);
  Complex p(x.cfg.center[0], x.cfg.center[1]);
  double sm = std::sqrt(double(m));
  bool boundary = x.cfg.regime == "boundary";
  json rows = json::array();
  for (double L : x.cfg.L) {
    Omega om = x.pot.is_radial() ? Omega::lens(p, L / sm, 0, x.pot.radial_droplet_radius() + x.cfg.M / sm)
                                 : Omega::disc(p, L / sm);
    ConcentrationSpectrum spec = concentration(space, om);
    CsvTable t({"index", "eigenvalue"});
    for (std::size_t i = 0; i < spec.eigenvalues.size(); ++i)
      t.add({std::to_string(i), fmt_double(spec.eigenvalues[i])});
    x.art.put("spectrum_L" + fmt_double(L) + ".csv", t.str());
    bool holds = true;
    double worst = -std::numeric_limits<double>::infinity();
    for (const auto& c : eig_count_grid(spec)) {
      holds = holds && c.holds;
      worst = std::max(worst, c.lhs - c.rhs);
    }
    double main = x.pot.lap(p) * L * L * (boundary ? 0.5 : 1.0);
    rows.push_back({{"L", L},
                    {"trace", spec.trace},
                    {"trace_sq", spec.trace_sq},
                    {"eig_sum", spec.eig_sum},
                    {"eig_sq_sum", spec.eig_sq_sum},
                    {"ratio", main > 0 ? spec.trace / main : 0.0},
                    {"residual_over_L", (spec.trace - spec.trace_sq) / L},
                    {"count_check_holds", holds},
                    {"count_check_margin", worst},
                    {"nodes", spec.nodes}});
  }
  x.art.put_json("concentrate.json", {{"m", m}, {"regime", x.cfg.regime}, {"rows", rows}});
}

json suite_special() {
  double sym = 0;
  for (int i = 0; i <= 200; ++i) {
    double v = -10 + 0.1 * i;
    sym = std::max(sym, std::abs(F_erfc(v).real() + F_erfc(-v).real() - 1));
  }
  double f0 = F_erfc(0.0).real();
  double d10 = dawson(10);
  bool ok = f0 == 0.5 && sym <= 1e-12 && std::abs(d10 - 0.05) <= 6e-4;
  return {{"passed", ok}, {"F0", f0}, {"symmetry_error", sym}, {"dawson10", d10}};
}

json suite_kernel() {
  const int m = 16;
  WeightedPolySpace space = WeightedPolySpace::build(Potential::radial(1), m);
  Rng rng(11);
  double worst = 0;
  for (int i = 0; i < 20; ++i) {
    Complex z = std::polar(1.3 * rng.uniform(), 2 * kPi * rng.uniform());
    double x = m * std::norm(z), term = 1, sum = 0;
    for (int k = 0; k < m; ++k) {
      sum += term;
      term *= x / (k + 1);
    }
    double exact = m * std::exp(-x) * sum;
    worst = std::max(worst, std::abs(space.one_point(z) - exact) / exact);
  }
  const PlaneRule& q = space.quadrature();
  double bz = 0;
  Complex z0(0.3, 0.2);
  for (std::size_t i = 0; i < q.size(); ++i) bz += q.weights[i] * space.berezin(z0, q.nodes[i]);
  bool ok = worst <= 1e-10 && std::abs(bz - 1) <= 1e-7;
  return {{"passed", ok}, {"max_rel_error", worst}, {"berezin_mass", bz}};
}

json suite_concentration() {
  WeightedPolySpace space = WeightedPolySpace::build(Potential::radial(1), 32);
  ConcentrationSpectrum spec = concentration(space, Omega::disc(0, 0.5));
  bool holds = true;
  for (const auto& c : eig_count_grid(spec)) holds = holds && c.holds;
  double gap = std::abs(spec.trace - spec.eig_sum);
  return {{"passed", holds && gap <= 1e-8}, {"trace_gap", gap}, {"count_check_holds", holds}};
}

json suite_decay() {
  DecayResult g = verify_decay(std::nullopt, 10000, 3);
  DecayResult b = verify_decay(0.0, 10000, 4);
  bool ok = g.passed && b.passed && g.max_c <= 10 && b.max_c <= 10;
  return {{"passed", ok}, {"ginibre_c", g.max_c}, {"boundary_c", b.max_c}};
}

json suite_exact_identity() {
  ExactIdentityResult r = verify_exact_identity(Potential::radial(1), 2, 1.0, 8, 4000, 0.8, 17);
  bool ok = !r.inconclusive && std::abs(r.estimate - r.target) <= 3 * r.std_error;
  return {{"passed", ok}, {"estimate", r.estimate}, {"target", r.target}, {"std_error", r.std_error},
          {"inconclusive", r.inconclusive}};
}

bool cmd_verify(Ctx& x) {
  std::vector<std::pair<std::string, std::function<json()>>> all = {{"special", suite_special},
                                                                    {"kernel", suite_kernel},
                                                                    {"concentration", suite_concentration},
                                                                    {"decay", suite_decay},
                                                                    {"exact_identity", suite_exact_identity}};
  json out;
  bool ok = true;
  for (auto& [name, fn] : all) {
    if (x.cfg.suite != "all" && x.cfg.suite != name) continue;
    json r = fn();
    ok = ok && r["passed"].get<bool>();
    out[name] = r;
  }
  x.art.put_json("summary.json", {{"passed", ok}, {"suites", out}});
  return ok;
}

std::vector<fs::path> config_files(const fs::path& dir) {
  std::vector<fs::path> files;
  fs::path d = dir / "configs";
  if (!fs::is_directory(d)) return files;
  for (const auto& e : fs::directory_iterator(d))
    if (e.path().extension() == ".json") files.push_back(e.path());
  std::sort(files.begin(), files.end());
  return files;
}

void cmd_stats(Ctx& x) {
  std::vector<Configuration> family;
  std::vector<std::string> names;
  if (!x.cfg.inputs.empty()) {
    for (const auto& in : x.cfg.inputs) {
      fs::path p(in);
      std::vector<fs::path> files = fs::is_directory(p) ? config_files(p) : std::vector<fs::path>{p};
      if (files.empty()) x.art.warnings.push_back("no configurations under " + in);
      for (const auto& f : files) {
        family.push_back(config_from_json(read_json(f)));
        names.push_back(f.filename().string());
      }
    }
  } else {
    family = x.cfg.family == "gibbs" ? generate_gibbs(x, "", false) : generate_fekete(x, "", false);
    for (const auto& jb : jobs_for(x.cfg)) names.push_back(config_name(x.cfg.family, jb).substr(8));
  }
  if (family.empty()) throw ConfigError("stats: no configurations");
  Droplet S = droplet(x.pot);

  std::vector<json> per(family.size());
  parallel_for(family.size(), x.opt.threads, [&](std::size_t i) {
    StatReport r = stat_report(family[i], x.pot, x.cfg.L);
    json counts = json::array();
    for (const auto& c : r.counts)
      counts.push_back({{"p", {c.p.real(), c.p.imag()}}, {"L", c.L}, {"N", c.counts.n},
                        {"N_minus", c.counts.n_minus}, {"N_plus", c.counts.n_plus}, {"regime", c.regime}});
    per[i] = {{"source", names[i]}, {"n", r.n}, {"seed", family[i].seed}, {"spacing", r.spacing},
              {"vacuum_distance", r.vacuum_distance}, {"scaled_vacuum_distance", std::sqrt(double(r.n)) * r.vacuum_distance},
              {"psi6", std::isnan(r.psi6) ? json(nullptr) : json(r.psi6)}, {"counts", counts}};
  });
  x.art.put_json("stats.json", json(per));

  CsvTable dens({"zoom", "L", "tail_min", "tail_max", "expected"});
  std::vector<std::pair<std::string, Zoom>> zooms = {{"bulk_adversarial", Zoom::adversarial(Regime::Bulk)},
                                                     {"boundary_adversarial", Zoom::adversarial(Regime::Boundary)},
                                                     {"exterior", Zoom::fixed(1.5 * S.boundary_point(0))}};
  for (auto& [name, z] : zooms) {
    std::vector<double> Ls;
    for (double L : x.cfg.L) {
      // bulk discs must fit inside S for every tail member
      if (z.rule == ZoomRule::Adversarial && z.regime == Regime::Bulk) {
        bool fits = true;
        for (const auto& c : family_tail(family)) fits = fits && L / std::sqrt(double(c.n())) < S.radius();
        if (!fits) continue;
      }
      Ls.push_back(L);
    }
    for (const auto& r : bl_density(family, x.pot, z, Ls))
      dens.add({name, fmt_double(r.L), fmt_double(r.tail_min), fmt_double(r.tail_max), fmt_double(r.expected)});
  }
  x.art.put("density.csv", dens.str());

  CsvTable disc({"regime", "L", "residual", "normalized"});
  for (auto [name, reg] : {std::pair{"bulk", Regime::Bulk}, std::pair{"boundary", Regime::Boundary}})
    for (double L : x.cfg.L) {
      if (L < 2) continue;
      try {
        DiscrepancyResult d = discrepancy(family, x.pot, Zoom::adversarial(reg), L, reg);
        disc.add({name, fmt_double(L), fmt_double(d.residual), fmt_double(d.normalized)});
      } catch (const ConfigError&) {
        x.art.warnings.push_back(std::string("discrepancy skipped for ") + name + " L=" + fmt_double(L));
      }
    }
  x.art.put("discrepancy.csv", disc.str());
}

std::string slug(const std::string& s) {
  std::string o;
  for (char ch : s) {
    if (std::isalnum(static_cast<unsigned char>(ch)))
      o.push_back(ch);
    else if (!o.empty() && o.back() != '_')
      o.push_back('_');
  }
  while (!o.empty() && o.back() == '_') o.pop_back();
  return o;
}

void cmd_report(Ctx& x) {
  struct Group {
    PotentialSpec spec;
    std::string provenance;
    std::vector<Configuration> configs;
    std::set<int> grid;
  };
  std::map<std::string, Group> groups;
  std::vector<std::string> notes;
  for (const auto& in : x.cfg.inputs) {
    fs::path dir(in);
    if (!fs::exists(dir / "manifest.json")) {
      notes.push_back(in + " has no manifest, skipped");
      continue;
    }
    json man = read_json(dir / "manifest.json");
    RunConfig rc = parse_run_config(man.at("config"));
    Potential pot = make_potential(rc.potential);
    Group& g = groups[pot.name()];
    g.spec = rc.potential;
    g.grid.insert(rc.n.begin(), rc.n.end());
    if (man.value("status", std::string()) != "complete") notes.push_back(in + " is incomplete");
    for (const auto& f : config_files(dir)) g.configs.push_back(config_from_json(read_json(f)));
  }

  std::string md = "# cglab report\n\n";
  if (groups.empty()) {
    md += "warning: no runs to report\n";
    x.art.warnings.push_back("empty report: no runs given");
    x.art.warnings.insert(x.art.warnings.end(), notes.begin(), notes.end());
    for (const auto& n : notes) md += "\n- " + n + "\n";
    x.art.put("report.md", md);
    return;
  }

  CsvTable dens({"potential", "n", "L", "bulk", "boundary"});
  CsvTable sep({"potential", "n", "count", "min_spacing", "median_spacing"});
  for (auto& [name, g] : groups) {
    Potential pot = make_potential(g.spec);
    md += "## " + name + "\n\n";
    std::map<int, std::vector<const Configuration*>> by_n;
    for (const auto& c : g.configs) by_n[c.n()].push_back(&c);
    for (int n : g.grid)
      if (!by_n.count(n)) notes.push_back("gap, " + name + " has no configuration at n=" + std::to_string(n));
    if (by_n.empty()) {
      md += "no configurations\n\n";
      continue;
    }
    const Configuration& big = *by_n.rbegin()->second.front();
    SvgOptions so;
    so.title = name + ", n=" + std::to_string(big.n());
    if (pot.is_radial()) so.circle_radius = pot.radial_droplet_radius();
    std::string svg = "scatter_" + slug(name) + ".svg";
    x.art.put(svg, svg_scatter(big.points, so));
    md += "![" + name + "](" + svg + ")\n\n";

    md += "| n | configs | min spacing | median spacing |\n|---|---|---|---|\n";
    for (auto& [n, cs] : by_n) {
      std::vector<double> sp;
      for (const auto* c : cs) sp.push_back(spacing(*c));
      double mn = *std::min_element(sp.begin(), sp.end()), md_ = median(sp);
      sep.add({name, std::to_string(n), std::to_string(cs.size()), fmt_double(mn), fmt_double(md_)});
      md += "| " + std::to_string(n) + " | " + std::to_string(cs.size()) + " | " + fmt_double(mn) + " | " +
            fmt_double(md_) + " |\n";
    }
    md += "\n";

    if (!pot.is_radial()) continue;
    // normalized by ΔQ; expected columns 1 (bulk) and 1/2 (boundary)
    double R = pot.radial_droplet_radius();
    Complex pb = pot.p() == 1 ? Complex(0) : Complex(R / 2);
    md += "| n | L | bulk N/(ΔQ L²) | boundary N/(ΔQ L²) |\n|---|---|---|---|\n";
    for (auto& [n, cs] : by_n)
      for (double L : x.cfg.L) {
        double sb = 0, sd = 0;
        for (const auto* c : cs) {
          sb += count_disc(*c, pb, L, 0).n;
          sd += count_disc(*c, Complex(R), L, 0).n;
        }
        sb /= cs.size() * pot.lap(pb) * L * L;
        sd /= cs.size() * pot.lap(Complex(R)) * L * L;
        dens.add({name, std::to_string(n), fmt_double(L), fmt_double(sb), fmt_double(sd)});
        md += "| " + std::to_string(n) + " | " + fmt_double(L) + " | " + fmt_double(std::round(sb * 1000) / 1000) +
              " | " + fmt_double(std::round(sd * 1000) / 1000) + " |\n";
      }
    md += "\n";
  }
  if (!notes.empty()) md += "## Notes\n\n";
  for (const auto& n : notes) md += "- " + n + "\n";
  x.art.put("density.csv", dens.str());
  x.art.put("spacing.csv", sep.str());
  x.art.put("report.md", md);
  x.art.warnings.insert(x.art.warnings.end(), notes.begin(), notes.end());
}

fs::path default_out(const RunConfig& cfg, const std::string& hash) {
  fs::path root = "cglab_runs";
  if (const char* env = std::getenv("CGLAB_OUT"); env && *env) root = env;
  return root / (cfg.command + "-" + hash.substr(0, 12));
}

}  // namespace

RunResult run(const RunConfig& cfg, const RunOptions& opt) {
  json echo = emit_run_config(cfg);
  echo["seed_offset"] = opt.seed_offset;
  std::string hash = sha256_hex(echo.dump());
  echo.erase("seed_offset");

  RunResult res;
  res.out_dir = !opt.out.empty() ? fs::path(opt.out) : !cfg.out.empty() ? fs::path(cfg.out) : default_out(cfg, hash);
  fs::create_directories(res.out_dir);
  Artifacts art(res.out_dir);

  auto t0 = std::chrono::steady_clock::now();
  json man;
  man["tool"] = "cglab";
  man["version"] = kToolVersion;
  man["command"] = cfg.command;
  man["config_hash"] = hash;
  man["seed_offset"] = opt.seed_offset;
  man["threads"] = opt.threads;
  man["config"] = echo;
  man["status"] = "running";
  man["started_at"] = utc_now();
  write_json(res.out_dir / "manifest.json", man);

  std::string error;
  try {
    Ctx x{cfg, opt, art, make_potential(cfg.potential), cfg.seed + opt.seed_offset};
    if (cfg.command == "sample") generate_gibbs(x, "gibbs", true);
    else if (cfg.command == "fekete") generate_fekete(x, "fekete", true);
    else if (cfg.command == "kernel") cmd_kernel(x);
    else if (cfg.command == "concentrate") cmd_concentrate(x);
    else if (cfg.command == "verify") {
      if (!cmd_verify(x)) {
        res.exit_code = 3;
        error = "verification failed";
      }
    } else if (cfg.command == "stats") cmd_stats(x);
    else if (cfg.command == "report") cmd_report(x);
  } catch (const ConfigError& e) {
    res.exit_code = 2;
    error = e.what();
  } catch (const UnsupportedError& e) {
    res.exit_code = 2;
    error = e.what();
  } catch (const json::exception& e) {
    res.exit_code = 2;
    error = e.what();
  } catch (const std::exception& e) {
    res.exit_code = 3;
    error = e.what();
  }

  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  man["status"] = res.exit_code == 0 ? "complete" : "incomplete";
  man["finished_at"] = utc_now();
  man["elapsed_seconds"] = secs;
  man["artifacts"] = art.listing();
  man["warnings"] = art.warnings;
  if (!error.empty()) man["error"] = error;
  write_json(res.out_dir / "manifest.json", man);
  res.message = error;
  for (const auto& w : art.warnings) std::cerr << "warning: " << w << "\n";
  return res;
}

RunResult run_file(const fs::path& config_file, const RunOptions& opt) {
  RunConfig cfg = parse_run_config(read_json(config_file));
  return run(cfg, opt);
}

int cli_main(int argc, char** argv) {
  CLI::App app{"Coulomb gas sampling, kernels and density statistics"};
  std::string config;
  RunOptions opt;
  app.add_option("--config", config, "run configuration (JSON)")->required();
  app.add_option("--out", opt.out, "output directory");
  app.add_option("--threads", opt.threads, "worker threads")->check(CLI::PositiveNumber);
  app.add_option("--seed-offset", opt.seed_offset, "added to the configured seed");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }
  try {
    RunResult r = run_file(config, opt);
    if (r.exit_code != 0) std::cerr << "error: " << r.message << "\n";
    std::cout << r.out_dir.string() << "\n";
    return r.exit_code;
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}

}  // namespace cglab
