#include "cglab/ensemble.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <numeric>

namespace cglab {

double Rng::uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

double Rng::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  double u1 = 0;
  while (u1 <= 0) u1 = uniform();
  double u2 = uniform();
  double r = std::sqrt(-2.0 * std::log(u1));
  spare_ = r * std::sin(2 * kPi * u2);
  has_spare_ = true;
  return r * std::cos(2 * kPi * u2);
}

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t k) {
  std::uint64_t z = base + 0x9e3779b97f4a7c15ULL * (k + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::string to_string(Provenance p) {
  switch (p) {
    case Provenance::Gibbs: return "gibbs";
    case Provenance::Fekete: return "fekete";
    case Provenance::Synthetic: return "synthetic";
  }
  return "";
}

Provenance provenance_from_string(const std::string& s) {
  if (s == "gibbs") return Provenance::Gibbs;
  if (s == "fekete") return Provenance::Fekete;
  if (s == "synthetic") return Provenance::Synthetic;
  throw ConfigError("unknown provenance '" + s + "'");
}

Configuration make_configuration(std::vector<Complex> points, double beta, std::uint64_t seed,
                                 Provenance prov) {
  if (points.size() < 2) throw ConfigError("a configuration needs at least 2 points");
  for (Complex z : points)
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
      throw ConfigError("configuration contains a non-finite point");
  Configuration c;
  c.points = std::move(points);
  c.beta = beta;
  c.seed = seed;
  c.provenance = prov;
  return c;
}

double beta_from_c(double c, int n) {
  if (!(c > 0) || n < 2) throw ConfigError("beta_from_c needs c > 0 and n >= 2");
  return c * std::log(double(n));
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double energy(const std::vector<Complex>& z, const Potential& pot) {
  const std::size_t n = z.size();
  double pair = 0, field = 0;
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t k = j + 1; k < n; ++k) {
      double d2 = std::norm(z[j] - z[k]);
      if (d2 == 0) return kInf;
      pair -= std::log(d2);  // 2 * log(1/|.|), both orders
    }
    field += pot.q(z[j]);
  }
  return pair + double(n) * field;
}

double delta_energy(const std::vector<Complex>& z, const Potential& pot, std::size_t j, Complex w) {
  const std::size_t n = z.size();
  if (w == z[j]) return 0.0;
  double s = 0;
  for (std::size_t k = 0; k < n; ++k) {
    if (k == j) continue;
    double dn = std::norm(w - z[k]);
    if (dn == 0) return kInf;
    s += std::log(std::norm(z[j] - z[k]) / dn);
  }
  return s + double(n) * (pot.q(w) - pot.q(z[j]));
}

// energy and gradient in one pass; returns +inf with empty gradient on collision
double energy_grad(const std::vector<Complex>& z, const Potential& pot, std::vector<Complex>& g) {
  const std::size_t n = z.size();
  g.assign(n, Complex(0, 0));
  double pair = 0, field = 0;
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t k = j + 1; k < n; ++k) {
      Complex d = z[j] - z[k];
      double d2 = std::norm(d);
      if (d2 == 0) return kInf;
      pair -= std::log(d2);
      Complex t = 2.0 * d / d2;
      g[j] -= t;
      g[k] += t;
    }
    field += pot.q(z[j]);
    g[j] += double(n) * pot.grad(z[j]);
  }
  return pair + double(n) * field;
}

double max_abs(const std::vector<Complex>& g) {
  double m = 0;
  for (Complex v : g) m = std::max({m, std::abs(v.real()), std::abs(v.imag())});
  return m;
}

double dot(const std::vector<Complex>& a, const std::vector<Complex>& b) {
  double s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i].real() * b[i].real() + a[i].imag() * b[i].imag();
  return s;
}

struct Chain {
  std::vector<Complex> z;
  double h = 0;
  double step = 0;
};

// sweeps of single-particle moves; returns accepted move count
std::size_t run_sweeps(Chain& c, const Potential& pot, double beta, int sweeps, Rng& rng, bool adapt,
                       int& adapt_clock, std::vector<double>* trace) {
  const std::size_t n = c.z.size();
  std::size_t accepted = 0;
  for (int s = 0; s < sweeps; ++s) {
    std::size_t acc_here = 0;
    for (std::size_t j = 0; j < n; ++j) {
      Complex w = c.z[j] + c.step * Complex(rng.normal(), rng.normal());
      double dh = delta_energy(c.z, pot, j, w);
      if (metropolis_accept(dh, beta, rng.uniform())) {
        c.z[j] = w;
        c.h += dh;
        ++acc_here;
      }
    }
    accepted += acc_here;
    if (adapt) {
      double rate = double(acc_here) / double(n);
      ++adapt_clock;
      c.step *= std::exp((rate - 0.3) / std::pow(double(adapt_clock), 0.6));
    }
    if (trace) trace->push_back(c.h);
    if (std::isnan(c.h)) break;
  }
  return accepted;
}

double initial_step(const Potential& pot, int n, double beta) {
  double r = pot.radial_droplet_radius();
  double m = std::max(pot.max_lap(r), 1e-3);
  return 1.0 / std::sqrt(double(n) * beta * m);
}

}  // namespace

double hamiltonian(const Configuration& cfg, const Potential& pot) { return energy(cfg.points, pot); }

double hamiltonian_delta(const Configuration& cfg, const Potential& pot, int j, Complex new_point) {
  if (j < 0 || j >= cfg.n()) throw ConfigError("hamiltonian_delta: index out of range");
  return delta_energy(cfg.points, pot, static_cast<std::size_t>(j), new_point);
}

std::vector<Complex> grad_hamiltonian(const Configuration& cfg, const Potential& pot) {
  std::vector<Complex> g;
  if (!std::isfinite(energy_grad(cfg.points, pot, g)))
    throw NumericalError("grad_hamiltonian: coincident points");
  return g;
}

bool metropolis_accept(double delta_h, double beta, double u) {
  if (delta_h <= 0) return true;
  if (!std::isfinite(delta_h)) return false;
  return u < std::exp(-beta * delta_h);
}

std::vector<Complex> equilibrium_draw(const Potential& pot, int n, Rng& rng) {
  std::vector<Complex> z(n);
  double R = pot.radial_droplet_radius();
  double expo = pot.kind() == PotentialKind::Custom ? 0.5 : 1.0 / (2.0 * pot.p());
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  for (int i = n - 1; i > 0; --i) std::swap(order[i], order[rng.index(i + 1)]);
  for (int i = 0; i < n; ++i) {
    double u = (double(order[i]) + rng.uniform()) / n;
    double r = R * std::pow(u, expo);
    z[i] = std::polar(r, 2 * kPi * rng.uniform());
  }
  return z;
}

namespace {

using Snapshot = std::function<void(const std::vector<Complex>&)>;

GibbsResult gibbs_core(const Potential& pot, int n, double beta, int sweeps, std::uint64_t seed, int thin,
                       const Snapshot& snap) {
  if (!(beta > 0)) throw ConfigError("sample_gibbs: beta must be positive");
  if (sweeps < 1) throw ConfigError("sample_gibbs: sweeps must be >= 1");
  if (n < 2) throw ConfigError("sample_gibbs: n must be >= 2");
  Rng rng(seed);
  const int burn = sweeps / 5;
  double step = initial_step(pot, n, beta);
  for (int attempt = 0; attempt <= 5; ++attempt) {
    Chain c;
    c.z = equilibrium_draw(pot, n, rng);
    c.h = energy(c.z, pot);
    c.step = step;
    if (!std::isfinite(c.h)) {
      step *= 0.5;
      continue;
    }
    ChainDiagnostics diag;
    diag.restarts = attempt;
    int clock = 0;
    run_sweeps(c, pot, beta, burn, rng, true, clock, &diag.energy_trace);
    if (!std::isfinite(c.h)) {
      step *= 0.5;
      continue;
    }
    std::size_t acc = 0;
    int prod = sweeps - burn;
    if (snap && thin > 0) {
      for (int done = 0; done < prod;) {
        int chunk = std::min(thin, prod - done);
        acc += run_sweeps(c, pot, beta, chunk, rng, false, clock, &diag.energy_trace);
        done += chunk;
        if (chunk == thin) snap(c.z);
      }
    } else {
      acc = run_sweeps(c, pot, beta, prod, rng, false, clock, &diag.energy_trace);
    }
    if (!std::isfinite(c.h)) throw NumericalError("sample_gibbs: energy became non-finite after burn-in");
    diag.acceptance_rate = prod > 0 ? double(acc) / (double(prod) * n) : 0.0;
    diag.step_scale = c.step;
    Configuration cfg = make_configuration(std::move(c.z), beta, seed, Provenance::Gibbs);
    return {std::move(cfg), std::move(diag)};
  }
  throw NumericalError("sample_gibbs: non-finite energy during burn-in after 5 restarts");
}

}  // namespace

GibbsResult sample_gibbs(const Potential& pot, int n, double beta, int sweeps, std::uint64_t seed) {
  return gibbs_core(pot, n, beta, sweeps, seed, 0, nullptr);
}

std::vector<Configuration> sample_gibbs_chain(const Potential& pot, int n, double beta, int sweeps,
                                              std::uint64_t seed, int thin) {
  if (thin < 1) throw ConfigError("sample_gibbs_chain: thin must be >= 1");
  std::vector<Configuration> out;
  gibbs_core(pot, n, beta, sweeps, seed, thin, [&](const std::vector<Complex>& z) {
    out.push_back(make_configuration(z, beta, seed, Provenance::Gibbs));
  });
  return out;
}

FeketeResult fekete(const Potential& pot, int n, std::uint64_t seed, const FeketeOptions& opt) {
  if (n < 2) throw ConfigError("fekete: n must be >= 2");
  Rng rng(seed);
  Chain c;
  for (int attempt = 0; attempt < 10; ++attempt) {
    c.z = equilibrium_draw(pot, n, rng);
    c.h = energy(c.z, pot);
    if (std::isfinite(c.h)) break;
  }
  if (!std::isfinite(c.h)) throw NumericalError("fekete: could not draw a finite starting configuration");

  // annealing
  double beta = 1.0;
  for (int level = 0; level < opt.levels; ++level, beta *= 2) {
    c.step = initial_step(pot, n, beta);
    int clock = 0;
    run_sweeps(c, pot, beta, opt.sweeps_per_level, rng, true, clock, nullptr);
  }

  // L-BFGS with backtracking
  const std::size_t hist = 10;
  std::vector<Complex> x = c.z, g, xn, gn;
  double f = energy_grad(x, pot, g);
  std::vector<Complex> best = x;
  double best_f = f;
  std::deque<std::vector<Complex>> S, Y;
  std::deque<double> RHO;
  FeketeResult res;
  const double tol = opt.tolerance_factor * n;
  const double slack = 1e-13;
  int it = 0;
  bool failed = false;
  for (; it < opt.max_iterations; ++it) {
    if (max_abs(g) <= tol) break;
    // two-loop recursion
    std::vector<Complex> q = g;
    std::vector<double> alpha(S.size());
    for (std::size_t i = S.size(); i-- > 0;) {
      alpha[i] = RHO[i] * dot(S[i], q);
      for (std::size_t k = 0; k < q.size(); ++k) q[k] -= alpha[i] * Y[i][k];
    }
    double gamma = S.empty() ? 1.0 / (std::sqrt(dot(g, g)) + 1e-300) * 1e-2
                             : dot(S.back(), Y.back()) / dot(Y.back(), Y.back());
    for (auto& v : q) v *= gamma;
    for (std::size_t i = 0; i < S.size(); ++i) {
      double b = RHO[i] * dot(Y[i], q);
      for (std::size_t k = 0; k < q.size(); ++k) q[k] += (alpha[i] - b) * S[i][k];
    }
    std::vector<Complex> d(q.size());
    for (std::size_t k = 0; k < q.size(); ++k) d[k] = -q[k];
    double gd = dot(g, d);
    if (!(gd < 0)) {
      S.clear();
      Y.clear();
      RHO.clear();
      for (std::size_t k = 0; k < d.size(); ++k) d[k] = -g[k] * 1e-2 / (std::sqrt(dot(g, g)) + 1e-300);
      gd = dot(g, d);
    }
    double t = 1.0;
    bool ok = false;
    double fn = 0;
    for (int ls = 0; ls < 60; ++ls) {
      xn = x;
      for (std::size_t k = 0; k < x.size(); ++k) xn[k] += t * d[k];
      fn = energy_grad(xn, pot, gn);
      if (std::isfinite(fn) && fn <= f + 1e-4 * t * gd + slack * std::abs(f)) {
        ok = true;
        break;
      }
      t *= 0.5;
    }
    if (!ok) {
      if (S.empty()) {
        failed = true;
        break;
      }
      S.clear();
      Y.clear();
      RHO.clear();
      continue;
    }
    std::vector<Complex> s(x.size()), y(x.size());
    for (std::size_t k = 0; k < x.size(); ++k) {
      s[k] = xn[k] - x[k];
      y[k] = gn[k] - g[k];
    }
    double sy = dot(s, y);
    if (sy > 1e-300) {
      S.push_back(std::move(s));
      Y.push_back(std::move(y));
      RHO.push_back(1.0 / sy);
      if (S.size() > hist) {
        S.pop_front();
        Y.pop_front();
        RHO.pop_front();
      }
    }
    x.swap(xn);
    g.swap(gn);
    f = fn;
    if (f < best_f) {
      best_f = f;
      best = x;
    }
  }
  res.iterations = it;
  res.grad_max = max_abs(g);
  res.converged = !failed && res.grad_max <= tol;
  if (!res.converged && best_f < f) {
    x = best;
    f = energy_grad(x, pot, g);
    res.grad_max = max_abs(g);
  }
  res.energy = f;
  res.config = make_configuration(std::move(x), std::numeric_limits<double>::infinity(), seed,
                                  Provenance::Fekete);
  return res;
}

}  // namespace cglab
