#include "mte/tail_analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "mte/errors.hpp"
#include "mte/omega_code.hpp"
#include "mte/summation.hpp"

namespace mte {

Ccdf Ccdf::from_samples(std::vector<double> samples) {
  if (samples.empty()) throw DomainError("empirical_ccdf: empty sample");
  std::sort(samples.begin(), samples.end());
  Ccdf out;
  out.sorted_ = std::move(samples);
  return out;
}

double Ccdf::survival(double v) const {
  const auto it = std::upper_bound(sorted_.begin(), sorted_.end(), v);
  return static_cast<double>(sorted_.end() - it) / static_cast<double>(sorted_.size());
}

std::vector<std::pair<double, double>> Ccdf::levels() const {
  std::vector<std::pair<double, double>> out;
  const auto n = static_cast<double>(sorted_.size());
  for (std::size_t i = 0; i < sorted_.size();) {
    std::size_t j = i;
    while (j < sorted_.size() && sorted_[j] == sorted_[i]) ++j;
    out.emplace_back(sorted_[i], static_cast<double>(sorted_.size() - j) / n);
    i = j;
  }
  return out;
}

double loglog_slope(std::span<const double> u, std::span<const double> s, double lo, double hi) {
  if (u.size() != s.size()) throw FitError("loglog_slope: u and s differ in length");
  std::vector<double> xs, ys;
  for (std::size_t i = 0; i < u.size(); ++i) {
    if (u[i] < lo || u[i] > hi || !(u[i] > 0.0) || !(s[i] > 0.0)) continue;
    xs.push_back(std::log(u[i]));
    ys.push_back(std::log(s[i]));
  }
  std::vector<double> distinct = ys;
  std::sort(distinct.begin(), distinct.end());
  distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
  if (distinct.size() < 10) throw FitError("loglog_slope: fewer than 10 distinct survival levels in window");

  const auto n = static_cast<double>(xs.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  if (!(sxx > 0.0)) throw FitError("loglog_slope: degenerate window");
  return sxy / sxx;
}

double loglog_slope(const Ccdf& ccdf, double lo, double hi) {
  std::vector<double> u, s;
  for (const auto& [v, level] : ccdf.levels()) {
    u.push_back(v);
    s.push_back(level);
  }
  return loglog_slope(u, s, lo, hi);
}

double hill_estimator(std::span<const double> samples, std::size_t k) {
  const std::size_t n = samples.size();
  if (k < 1 || k >= n) throw DomainError("hill_estimator: 1 <= k < n required");
  std::vector<double> sorted(samples.begin(), samples.end());
  for (double v : sorted) {
    if (!(v > 0.0)) throw DomainError("hill_estimator: samples must be positive");
  }
  std::sort(sorted.begin(), sorted.end());
  const double threshold = std::log(sorted[n - k - 1]);
  CompensatedSum acc;
  for (std::size_t i = n - k; i < n; ++i) acc += std::log(sorted[i]) - threshold;
  const double gamma = acc.value() / static_cast<double>(k);
  if (gamma <= 0.0) return std::numeric_limits<double>::infinity();
  return 1.0 / gamma;
}

double conditional_gap_tail_exact(const PrimePrior& prior, double x, double u) {
  if (!(x > 0.0)) throw DomainError("conditional_gap_tail_exact: x > 0 required");
  if (!(u > 0.0)) throw DomainError("conditional_gap_tail_exact: u > 0 required");
  return prior.tail_mass(1.0 + u / x);
}

MixingMeasure MixingMeasure::make(std::vector<std::pair<double, double>> atoms) {
  if (atoms.empty()) throw DomainError("mixing measure needs at least one atom");
  CompensatedSum total;
  for (const auto& [x, w] : atoms) {
    if (!(x > 0.0) || !std::isfinite(x)) throw DomainError("mixing measure atoms must be positive");
    if (!(w > 0.0)) throw DomainError("mixing measure weights must be positive");
    total += w;
  }
  if (std::fabs(total.value() - 1.0) > 1e-12) throw DomainError("mixing measure weights must sum to 1");
  return MixingMeasure{std::move(atoms)};
}

double MixingMeasure::sample(Rng& rng) const {
  const double u = rng.uniform01();
  double acc = 0.0;
  for (const auto& [x, w] : atoms) {
    acc += w;
    if (u < acc) return x;
  }
  return atoms.back().first;
}

double mixture_gap_tail(const PrimePrior& prior, const MixingMeasure& nu, double u) {
  CompensatedSum acc;
  for (const auto& [x, w] : nu.atoms) acc += w * conditional_gap_tail_exact(prior, x, u);
  return acc.value();
}

double dkw_epsilon(std::size_t n, double alpha) {
  if (n == 0 || !(alpha > 0.0 && alpha < 1.0)) throw DomainError("dkw_epsilon: n >= 1, alpha in (0,1)");
  return std::sqrt(std::log(2.0 / alpha) / (2.0 * static_cast<double>(n)));
}

DkwComparison dkw_compare(const Ccdf& empirical, std::span<const double> points,
                          const std::function<double(double)>& exact, double alpha) {
  DkwComparison cmp;
  cmp.epsilon = dkw_epsilon(empirical.size(), alpha);
  cmp.points = points.size();
  for (double v : points) {
    const double d = std::fabs(empirical.survival(v) - exact(v));
    cmp.sup_distance = std::max(cmp.sup_distance, d);
    if (d > cmp.epsilon) ++cmp.violations;
  }
  return cmp;
}

std::vector<double> gap_support_points(const PrimePrior& prior, std::span<const double> xs) {
  std::vector<double> pts;
  pts.reserve(xs.size() * prior.primes().size());
  for (double x : xs) {
    for (std::uint64_t p : prior.primes()) pts.push_back(x * static_cast<double>(p - 1));
  }
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  return pts;
}

double slow_variation_factor(SlowVariation mode, double beta, double y) {
  if (!(y > 1.0)) throw DomainError("slow_variation_factor: y > 1 required");
  const double ln_y = std::log(y);
  switch (mode) {
    case SlowVariation::none:
      return 1.0;
    case SlowVariation::log_power:
      return std::pow(ln_y, -beta);
    case SlowVariation::omega_exact: {
      const auto floor_y = static_cast<std::uint64_t>(std::floor(y));
      const double len = static_cast<double>(omega_len(floor_y));
      return std::exp(beta * ln_y - beta * len * std::log(2.0) - std::log(ln_y));
    }
  }
  return 1.0;
}

SlopeFit regular_variation_slope(const PrimePrior& prior, double x, double u_lo, double u_hi,
                                 SlowVariation mode, std::size_t grid_points) {
  if (!(u_lo > 0.0 && u_hi > u_lo)) throw FitError("regular_variation_slope: need 0 < u_lo < u_hi");
  if (grid_points < 10) throw FitError("regular_variation_slope: need at least 10 grid points");
  std::vector<double> u(grid_points), s(grid_points);
  const double step = std::log(u_hi / u_lo) / static_cast<double>(grid_points - 1);
  for (std::size_t i = 0; i < grid_points; ++i) {
    u[i] = (i + 1 == grid_points) ? u_hi : u_lo * std::exp(step * static_cast<double>(i));
    const double y = 1.0 + u[i] / x;
    s[i] = conditional_gap_tail_exact(prior, x, u[i]) / slow_variation_factor(mode, prior.beta(), y);
  }
  SlopeFit fit;
  fit.slope = loglog_slope(u, s, u_lo, u_hi);
  fit.u_lo = u_lo;
  fit.u_hi = u_hi;
  fit.deviation_from_proof = fit.slope - (1.0 - prior.beta());
  fit.deviation_from_statement = fit.slope + prior.beta();
  return fit;
}

std::pair<double, double> default_fit_window(const PrimePrior& prior, double x, std::size_t n) {
  if (n == 0) throw DomainError("default_fit_window: n >= 1 required");
  const double level = 100.0 / static_cast<double>(n);
  const double u_max = x * (static_cast<double>(prior.p_max()) - 1.0);
  // 100 grid points per decade from u = x/100 upward.
  for (double lg = std::log10(x) - 2.0;; lg += 0.01) {
    const double u = std::pow(10.0, lg);
    if (u >= u_max) break;
    if (conditional_gap_tail_exact(prior, x, u) < level) return {u / 10.0, u};
  }
  return {u_max / 10.0, u_max};
}

}  // namespace mte
