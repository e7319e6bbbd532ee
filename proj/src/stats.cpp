#include "cglab/stats.hpp"

#include <algorithm>
#include <map>
#include <unordered_map>

namespace cglab {

namespace {

// min distance found among pairs sharing a cell or adjacent cells, inf if none
double grid_min(const std::vector<Complex>& pts, double h) {
  double xmin = pts[0].real(), ymin = pts[0].imag();
  for (Complex z : pts) {
    xmin = std::min(xmin, z.real());
    ymin = std::min(ymin, z.imag());
  }
  std::unordered_map<std::int64_t, std::vector<int>> cells;
  cells.reserve(pts.size() * 2);
  auto key = [](std::int64_t i, std::int64_t j) { return (i << 32) ^ (j & 0xffffffff); };
  std::vector<std::pair<std::int64_t, std::int64_t>> ij(pts.size());
  for (std::size_t a = 0; a < pts.size(); ++a) {
    auto i = static_cast<std::int64_t>(std::floor((pts[a].real() - xmin) / h));
    auto j = static_cast<std::int64_t>(std::floor((pts[a].imag() - ymin) / h));
    ij[a] = {i, j};
    cells[key(i, j)].push_back(int(a));
  }
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t a = 0; a < pts.size(); ++a) {
    for (int di = -1; di <= 1; ++di)
      for (int dj = -1; dj <= 1; ++dj) {
        auto it = cells.find(key(ij[a].first + di, ij[a].second + dj));
        if (it == cells.end()) continue;
        for (int b : it->second)
          if (b > int(a)) best = std::min(best, std::abs(pts[a] - pts[b]));
      }
  }
  return best;
}

}  // namespace

double spacing(const std::vector<Complex>& pts, int n) {
  if (pts.size() < 2) throw ConfigError("spacing: need at least two points");
  double xmin = pts[0].real(), xmax = xmin, ymin = pts[0].imag(), ymax = ymin;
  for (Complex z : pts) {
    xmin = std::min(xmin, z.real());
    xmax = std::max(xmax, z.real());
    ymin = std::min(ymin, z.imag());
    ymax = std::max(ymax, z.imag());
  }
  double span = std::max(xmax - xmin, ymax - ymin);
  if (span == 0) return 0;
  double h = span / std::sqrt(double(pts.size()));
  for (int iter = 0; iter < 200; ++iter) {
    double d = grid_min(pts, h);
    // a pair closer than h always shares or neighbours a cell
    if (d <= h) return std::sqrt(double(n)) * d;
    h = std::isfinite(d) ? d : 2 * h;
  }
  throw NumericalError("spacing: grid search did not settle");
}

double spacing(const Configuration& cfg) { return spacing(cfg.points, cfg.n()); }

DiscCount count_disc(const Configuration& cfg, Complex p, double L, double s) {
  if (!(L > s) || s < 0) throw ConfigError("count_disc: need L > s >= 0");
  double sn = std::sqrt(double(cfg.n()));
  double r = L / sn, rm = (L - s) / sn, rp = (L + s) / sn;
  DiscCount c;
  for (Complex z : cfg.points) {
    double d = std::abs(z - p);
    if (d < rp) ++c.n_plus;
    if (d < r) ++c.n;
    if (d < rm) ++c.n_minus;
  }
  return c;
}

Complex boundary_zoom_point(const Potential& pot, const Droplet& s, int n, double theta, double l) {
  Complex q = s.boundary_point(theta);
  double dq = pot.lap(q);
  if (!(dq > 0)) throw ModelViolation("boundary zoom: Laplacian vanishes at the boundary point");
  return q + l / std::sqrt(n * dq) * std::polar(1.0, s.normal_angle(theta));
}

namespace {

double segment_distance(Complex z, Complex a, Complex b) {
  Complex ab = b - a;
  double t = std::norm(ab) > 0 ? std::clamp(std::real((z - a) * std::conj(ab)) / std::norm(ab), 0.0, 1.0) : 0.0;
  return std::abs(z - (a + t * ab));
}

}  // namespace

double inner_distance(const Droplet& s, Complex z) {
  double r = std::abs(z);
  switch (s.kind()) {
    case DropletKind::Disc: return std::max(0.0, s.radius() - r);
    case DropletKind::Annulus: return std::max(0.0, std::min(s.r_out() - r, r - s.r_in()));
    case DropletKind::Empirical: {
      const auto& h = s.hull();
      if (s.delta(z) > 0) return 0;
      if (h.size() < 3) return 0;
      double d = std::numeric_limits<double>::infinity();
      bool inside = true;
      for (std::size_t i = 0; i < h.size(); ++i) {
        Complex a = h[i], b = h[(i + 1) % h.size()];
        d = std::min(d, segment_distance(z, a, b));
        if (std::imag(std::conj(b - a) * (z - a)) < 0) inside = false;
      }
      return inside ? d + s.margin() : std::max(0.0, s.margin() - d);
    }
  }
  return 0;
}

std::vector<Complex> adversarial_centers(const Droplet& s, int n, double L, Regime regime) {
  double pitch = 0.5 / std::sqrt(double(n));
  double r = L / std::sqrt(double(n));
  std::vector<Complex> out;
  if (regime == Regime::Bulk) {
    auto [lo, hi] = s.bounding_box();
    for (double x = lo.real(); x <= hi.real(); x += pitch)
      for (double y = lo.imag(); y <= hi.imag(); y += pitch) {
        Complex z(x, y);
        if (inner_distance(s, z) >= r) out.push_back(z);
      }
  } else {
    // outer boundary sampled at arclength pitch
    double len = 2 * kPi * s.extent();
    int k = std::max(8, int(std::ceil(len / pitch)));
    for (int i = 0; i < k; ++i) out.push_back(s.boundary_point(2 * kPi * i / k));
  }
  return out;
}

ZoomCounts zoom_counts(const Configuration& cfg, const Potential& pot, const Zoom& zoom, double L) {
  Droplet S = droplet(pot);
  ZoomCounts zc;
  auto count = [&](Complex p) { return count_disc(cfg, p, L, 0).n; };
  if (zoom.rule != ZoomRule::Adversarial) {
    Complex p = zoom.rule == ZoomRule::Fixed ? zoom.point
                                             : boundary_zoom_point(pot, S, cfg.n(), zoom.theta, zoom.l);
    zc.min_count = zc.max_count = count(p);
    zc.argmin = zc.argmax = p;
    zc.delta_q = pot.lap(zoom.rule == ZoomRule::Fixed ? p : S.boundary_point(zoom.theta));
    return zc;
  }
  auto centers = adversarial_centers(S, cfg.n(), L, zoom.regime);
  if (centers.empty()) throw ConfigError("zoom_counts: no disc of this radius fits inside the droplet");
  zc.min_count = std::numeric_limits<int>::max();
  zc.max_count = -1;
  for (Complex p : centers) {
    int c = count(p);
    if (c < zc.min_count) {
      zc.min_count = c;
      zc.argmin = p;
    }
    if (c > zc.max_count) {
      zc.max_count = c;
      zc.argmax = p;
    }
  }
  zc.delta_q = pot.lap(centers.front());
  return zc;
}

std::vector<Configuration> family_tail(const std::vector<Configuration>& family) {
  std::vector<int> ns;
  for (const auto& c : family) ns.push_back(c.n());
  std::sort(ns.begin(), ns.end());
  ns.erase(std::unique(ns.begin(), ns.end()), ns.end());
  if (ns.empty()) return {};
  int n_half = ns[ns.size() / 2];
  std::vector<Configuration> out;
  for (const auto& c : family)
    if (c.n() >= n_half) out.push_back(c);
  return out;
}

namespace {

double expected_density(const Zoom& zoom, double dq) {
  if (zoom.rule == ZoomRule::Adversarial) return zoom.regime == Regime::Bulk ? dq : 0.5 * dq;
  if (zoom.rule == ZoomRule::BoundaryNormal) return 0.5 * dq;  // l = 0; otherwise see the profile
  return dq;
}

}  // namespace

std::vector<DensityRow> bl_density(const std::vector<Configuration>& family, const Potential& pot,
                                   const Zoom& zoom, const std::vector<double>& L_grid) {
  auto tail = family_tail(family);
  if (tail.empty()) throw ConfigError("bl_density: empty family");
  Droplet S = droplet(pot);
  std::vector<DensityRow> rows;
  for (double L : L_grid) {
    DensityRow row;
    row.L = L;
    row.tail_min = std::numeric_limits<double>::infinity();
    row.tail_max = -std::numeric_limits<double>::infinity();
    double dq = 0;
    for (const auto& cfg : tail) {
      ZoomCounts zc = zoom_counts(cfg, pot, zoom, L);
      row.tail_min = std::min(row.tail_min, zc.min_count / (L * L));
      row.tail_max = std::max(row.tail_max, zc.max_count / (L * L));
      dq = zc.delta_q;
    }
    row.expected = expected_density(zoom, dq);
    if (zoom.rule == ZoomRule::Fixed && S.delta(zoom.point) > 0) row.expected = 0;
    rows.push_back(row);
  }
  return rows;
}

DiscrepancyResult discrepancy(const std::vector<Configuration>& family, const Potential& pot, const Zoom& zoom,
                              double L, Regime regime) {
  if (!(L >= 2)) throw ConfigError("discrepancy: L must be at least 2");
  auto tail = family_tail(family);
  if (tail.empty()) throw ConfigError("discrepancy: empty family");
  DiscrepancyResult r;
  r.L = L;
  for (const auto& cfg : tail) {
    ZoomCounts zc = zoom_counts(cfg, pot, zoom, L);
    double e = (regime == Regime::Bulk ? 1.0 : 0.5) * zc.delta_q * L * L;
    r.residual = std::max({r.residual, std::abs(zc.min_count - e), std::abs(zc.max_count - e)});
  }
  double scale = std::pow(L, 5.0 / 3.0) * (regime == Regime::Bulk ? 1.0 : std::log(L));
  r.normalized = r.residual / scale;
  return r;
}

double vacuum_distance(const Configuration& cfg, const Droplet& s) {
  double d = 0;
  for (Complex z : cfg.points) d = std::max(d, s.delta(z));
  return d;
}

double psi6(const std::vector<Complex>& pts, const std::vector<bool>& bulk_mask) {
  if (bulk_mask.size() != pts.size()) throw ConfigError("psi6: mask size mismatch");
  std::size_t bulk = std::count(bulk_mask.begin(), bulk_mask.end(), true);
  if (bulk < 7) throw ConfigError("psi6: need at least 7 bulk points");
  double total = 0;
  std::vector<std::pair<double, int>> d;
  for (std::size_t a = 0; a < pts.size(); ++a) {
    if (!bulk_mask[a]) continue;
    d.clear();
    for (std::size_t b = 0; b < pts.size(); ++b)
      if (b != a) d.emplace_back(std::norm(pts[b] - pts[a]), int(b));
    std::size_t k = std::min<std::size_t>(6, d.size());
    std::partial_sort(d.begin(), d.begin() + k, d.end());
    Complex s = 0;
    for (std::size_t i = 0; i < k; ++i) s += std::polar(1.0, 6 * std::arg(pts[d[i].second] - pts[a]));
    total += std::abs(s) / double(k);
  }
  return total / double(bulk);
}

double psi6(const Configuration& cfg, const Droplet& s, double bulk_margin) {
  std::vector<bool> mask(cfg.points.size());
  for (std::size_t i = 0; i < mask.size(); ++i) mask[i] = inner_distance(s, cfg.points[i]) > bulk_margin;
  return psi6(cfg.points, mask);
}

StatReport stat_report(const Configuration& cfg, const Potential& pot, const std::vector<double>& L_grid,
                       double s) {
  Droplet S = droplet(pot);
  StatReport rep;
  rep.n = cfg.n();
  rep.spacing = spacing(cfg);
  rep.vacuum_distance = vacuum_distance(cfg, S);
  double sn = std::sqrt(double(cfg.n()));
  try {
    rep.psi6 = psi6(cfg, S, 2 / sn);
  } catch (const ConfigError&) {
    rep.psi6 = std::numeric_limits<double>::quiet_NaN();
  }
  std::vector<std::pair<Complex, std::string>> zooms = {{0, "bulk"},
                                                        {S.boundary_point(0), "boundary"},
                                                        {S.boundary_point(0) * 1.5, "exterior"}};
  for (auto& [p, label] : zooms)
    for (double L : L_grid) rep.counts.push_back({p, L, count_disc(cfg, p, L, s), label});
  return rep;
}

double median(std::vector<double> v) {
  if (v.empty()) throw ConfigError("median: empty input");
  std::sort(v.begin(), v.end());
  std::size_t k = v.size() / 2;
  return v.size() % 2 ? v[k] : 0.5 * (v[k - 1] + v[k]);
}

SeparationScan separation_scan(const Potential& pot, const std::vector<double>& c_values,
                               const std::vector<int>& n_values, int seeds, int sweeps, std::uint64_t seed) {
  if (c_values.empty() || n_values.empty() || seeds < 1) throw ConfigError("separation_scan: empty grid");
  std::vector<int> ns = n_values;
  std::sort(ns.begin(), ns.end());
  int n_half = ns[ns.size() / 2];
  SeparationScan scan;
  scan.c_values = c_values;
  double fit = 0;
  std::uint64_t job = 0;
  for (double c : c_values) {
    std::vector<double> tail;
    for (int n : ns) {
      SeparationRow row;
      row.c = c;
      row.n = n;
      for (int k = 0; k < seeds; ++k) {
        auto g = sample_gibbs(pot, n, beta_from_c(c, n), sweeps, derive_seed(seed, job++));
        row.spacings.push_back(spacing(g.config));
      }
      row.min = *std::min_element(row.spacings.begin(), row.spacings.end());
      row.median = median(row.spacings);
      if (n >= n_half) tail.insert(tail.end(), row.spacings.begin(), row.spacings.end());
      scan.rows.push_back(row);
    }
    scan.tail_min.push_back(*std::min_element(tail.begin(), tail.end()));
    scan.tail_median.push_back(median(tail));
    fit += std::log(scan.tail_median.back()) + 1.5 / c;
  }
  scan.s0_prefactor = std::exp(fit / double(c_values.size()));
  return scan;
}

}  // namespace cglab
