#include "mte/reproduce.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <numeric>
#include <span>
#include <sstream>

#include <json.hpp>

#include "mte/empirics.hpp"
#include "mte/errors.hpp"
#include "mte/mte_engine.hpp"
#include "mte/prime_prior.hpp"
#include "mte/primes.hpp"
#include "mte/tail_analysis.hpp"

namespace mte {
namespace {

// Pinned thresholds.
constexpr double kAveragingRelTol = 0.05;
constexpr double kDkwAlpha = 1e-6;
constexpr double kSlopeTol = 0.15;
constexpr double kSlopeWindowLo = 1e3;
constexpr double kSlopeWindowHi = 1e6;
constexpr double kFitATol = 0.02;
constexpr double kScaledKlMax = 0.01;

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

Check make_check(std::string name, double value, std::string requirement, bool passed) {
  return Check{std::move(name), value, std::move(requirement), passed};
}

nlohmann::ordered_json checks_json(const std::vector<Check>& checks) {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const auto& c : checks) {
    arr.push_back({{"name", c.name}, {"value", c.value}, {"requirement", c.requirement}, {"passed", c.passed}});
  }
  return arr;
}

std::vector<double> to_doubles(const std::vector<BigNat>& values) {
  std::vector<double> out;
  out.reserve(values.size());
  for (const auto& v : values) out.push_back(v.to_double());
  return out;
}

std::string survival_csv(const Ccdf& emp, double u_lo, double u_hi, const std::function<double(double)>& exact) {
  std::ostringstream os;
  os.precision(10);
  os << "u,empirical_survival,exact_survival\n";
  constexpr int kPoints = 200;
  const double step = std::log(u_hi / u_lo) / (kPoints - 1);
  for (int i = 0; i < kPoints; ++i) {
    const double u = u_lo * std::exp(step * i);
    os << u << ',' << emp.survival(u) << ',' << exact(u) << '\n';
  }
  return os.str();
}

}  // namespace

bool SuiteResult::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.passed; });
}

SuiteResult reproduce_averaging(const ReproduceOptions& opt) {
  SuiteResult res;
  res.suite = "averaging";
  res.seed = opt.seed;
  const auto prior = PrimePrior::build(opt.averaging_beta, opt.averaging_p_max);
  const auto m = prior.moments();
  const auto trajs = simulate_many(prior, opt.averaging_steps, opt.seed, opt.averaging_seeds, 100, opt.workers);

  double worst_len = 0.0, worst_sum = 0.0, worst_growth = 0.0;
  std::ostringstream per_seed;
  per_seed.precision(10);
  per_seed << "seed_index,seed,len_x_per_t,mean_len_p,log2_x_per_t,growth_rate\n";
  nlohmann::ordered_json seeds = nlohmann::ordered_json::array();
  std::vector<double> early, late;
  for (std::size_t k = 0; k < trajs.size(); ++k) {
    const auto rows = averaging_series(trajs[k]);
    const auto& last = rows.back();
    const double rel_len = std::fabs(last.len_x_per_t - m.mean_log2_p) / m.mean_log2_p;
    const double rel_sum = std::fabs(last.mean_len_p - m.mean_len_p) / m.mean_len_p;
    const double g = growth_rate(trajs[k]);
    worst_len = std::max(worst_len, rel_len);
    worst_sum = std::max(worst_sum, rel_sum);
    worst_growth = std::max(worst_growth, std::fabs(g - m.mean_ln_p) / m.mean_ln_p);
    per_seed << k << ',' << trajs[k].seed << ',' << last.len_x_per_t << ',' << last.mean_len_p << ','
             << last.log2_x_per_t << ',' << g << '\n';
    seeds.push_back({{"seed", trajs[k].seed}, {"len_x_per_t", last.len_x_per_t}, {"mean_len_p", last.mean_len_p}});
    for (const auto& r : rows) {
      if (r.t == 100) early.push_back(r.log2_x_per_t);
    }
    late.push_back(last.log2_x_per_t);
  }
  auto variance = [](const std::vector<double>& v) {
    if (v.size() < 2) return 0.0;
    const double mean = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
    double s = 0.0;
    for (double x : v) s += (x - mean) * (x - mean);
    return s / static_cast<double>(v.size() - 1);
  };

  res.checks.push_back(make_check("terminal len_X/T vs E[log2 P] (worst seed, rel)", worst_len,
                                  "<= " + fmt(kAveragingRelTol), worst_len <= kAveragingRelTol));
  res.checks.push_back(make_check("(1/T) sum len(P_i) vs E[len P] (worst seed, rel)", worst_sum,
                                  "<= " + fmt(kAveragingRelTol), worst_sum <= kAveragingRelTol));
  res.checks.push_back(make_check("ln(X_T)/T vs E[ln P] (worst seed, rel)", worst_growth,
                                  "<= " + fmt(kAveragingRelTol), worst_growth <= kAveragingRelTol));
  if (!early.empty() && opt.averaging_steps > 100) {
    const double ve = variance(early), vl = variance(late);
    res.checks.push_back(make_check("spread of log2_X/t shrinks (var at T / var at t=100)", vl / ve, "< 1", vl < ve));
  }
  res.checks.push_back(make_check("logarithmic overhead E[len P] - E[log2 P]", m.mean_len_p - m.mean_log2_p, "> 0",
                                  m.mean_len_p > m.mean_log2_p));

  std::ostringstream series;
  series.precision(10);
  series << "t,len_x_per_t,mean_len_p,log2_x_per_t\n";
  for (const auto& r : averaging_series(trajs.front())) {
    series << r.t << ',' << r.len_x_per_t << ',' << r.mean_len_p << ',' << r.log2_x_per_t << '\n';
  }
  res.files["terminal_ratios.csv"] = per_seed.str();
  res.files["averaging_series_seed0.csv"] = series.str();

  nlohmann::ordered_json doc;
  doc["suite"] = res.suite;
  doc["seed"] = res.seed;
  doc["prior"] = prior.id();
  doc["steps"] = opt.averaging_steps;
  doc["moments"] = {{"mean_log2_P", m.mean_log2_p}, {"mean_len_P", m.mean_len_p}, {"mean_ln_P", m.mean_ln_p}};
  doc["per_seed"] = seeds;
  doc["checks"] = checks_json(res.checks);
  doc["passed"] = res.passed();
  res.report_json = doc.dump(2);
  return res;
}

SuiteResult reproduce_tails(const ReproduceOptions& opt) {
  SuiteResult res;
  res.suite = "tails";
  res.seed = opt.seed;
  nlohmann::ordered_json doc;
  doc["suite"] = res.suite;
  doc["seed"] = res.seed;

  const auto prior = PrimePrior::build(opt.gap_beta, opt.gap_p_max);
  doc["gap_prior"] = prior.id();
  nlohmann::ordered_json conditional = nlohmann::ordered_json::array();
  std::uint64_t stream = 0;
  for (double x : {1.0, 10.0, 1000.0}) {
    Rng rng(derive_seed(opt.seed, stream++));
    const auto gaps = to_doubles(gap_samples(prior, BigNat(static_cast<std::uint64_t>(x)), opt.gap_samples, rng));
    const auto emp = Ccdf::from_samples(gaps);
    const double xs[] = {x};
    auto exact = [&](double u) { return u <= 0.0 ? 1.0 : conditional_gap_tail_exact(prior, x, u); };
    const auto cmp = dkw_compare(emp, gap_support_points(prior, xs), exact, kDkwAlpha);
    const auto k = static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(gaps.size()))));
    const double hill = hill_estimator(gaps, k);
    res.checks.push_back(make_check("DKW conditional x=" + fmt(x) + " (sup |emp - exact|)", cmp.sup_distance,
                                    "<= " + fmt(cmp.epsilon), cmp.violations == 0));
    conditional.push_back({{"x", x},
                           {"sup_distance", cmp.sup_distance},
                           {"epsilon", cmp.epsilon},
                           {"dkw_violations", cmp.violations},
                           {"hill_index", hill},
                           {"hill_k", k}});
    res.files["conditional_x" + std::to_string(static_cast<std::uint64_t>(x)) + ".csv"] =
        survival_csv(emp, x * 0.5, x * static_cast<double>(opt.gap_p_max), exact);
  }
  doc["conditional"] = conditional;

  const auto nu = MixingMeasure::make({{1.0, 0.5}, {10.0, 0.3}, {1000.0, 0.2}});
  {
    Rng rng(derive_seed(opt.seed, stream++));
    std::vector<double> gaps;
    gaps.reserve(opt.gap_samples);
    for (std::uint64_t i = 0; i < opt.gap_samples; ++i) {
      const double x = nu.sample(rng);
      gaps.push_back(x * static_cast<double>(prior.sample(rng) - 1));
    }
    const auto emp = Ccdf::from_samples(gaps);
    const double xs[] = {1.0, 10.0, 1000.0};
    auto exact = [&](double u) { return u <= 0.0 ? 1.0 : mixture_gap_tail(prior, nu, u); };
    const auto cmp = dkw_compare(emp, gap_support_points(prior, xs), exact, kDkwAlpha);
    res.checks.push_back(make_check("DKW mixture nu=0.5d1+0.3d10+0.2d1000 (sup |emp - exact|)", cmp.sup_distance,
                                    "<= " + fmt(cmp.epsilon), cmp.violations == 0));
    doc["mixture"] = {{"sup_distance", cmp.sup_distance}, {"epsilon", cmp.epsilon}, {"dkw_violations", cmp.violations}};
    res.files["mixture.csv"] = survival_csv(emp, 0.5, 1000.0 * static_cast<double>(opt.gap_p_max), exact);
  }

  const auto primes = sieve_primes(opt.slope_p_max);
  nlohmann::ordered_json slopes = nlohmann::ordered_json::array();
  std::ostringstream slope_csv;
  slope_csv.precision(10);
  slope_csv << "beta,removal,slope,proof_exponent,statement_exponent\n";
  for (double beta : {1.5, 2.0, 3.0}) {
    const auto p = PrimePrior::build(beta, opt.slope_p_max, primes);
    const auto exact_fit = regular_variation_slope(p, 1.0, kSlopeWindowLo, kSlopeWindowHi, SlowVariation::omega_exact);
    const auto log_fit = regular_variation_slope(p, 1.0, kSlopeWindowLo, kSlopeWindowHi, SlowVariation::log_power);
    const auto raw_fit = regular_variation_slope(p, 1.0, kSlopeWindowLo, kSlopeWindowHi, SlowVariation::none);
    res.checks.push_back(make_check("slope beta=" + fmt(beta) + " minus (1-beta), exact slow-variation removal",
                                    exact_fit.deviation_from_proof, "|.| <= " + fmt(kSlopeTol),
                                    std::fabs(exact_fit.deviation_from_proof) <= kSlopeTol));
    for (const auto& [name, f] : {std::pair{"omega_exact", exact_fit}, std::pair{"log_power", log_fit},
                                  std::pair{"none", raw_fit}}) {
      slopes.push_back({{"beta", beta},
                        {"removal", name},
                        {"slope", f.slope},
                        {"deviation_from_proof_1_minus_lambda", f.deviation_from_proof},
                        {"deviation_from_statement_minus_lambda", f.deviation_from_statement}});
      slope_csv << beta << ',' << name << ',' << f.slope << ',' << 1.0 - beta << ',' << -beta << '\n';
    }
  }
  doc["slope_window"] = {kSlopeWindowLo, kSlopeWindowHi};
  doc["slopes"] = slopes;
  res.files["slopes.csv"] = slope_csv.str();
  doc["checks"] = checks_json(res.checks);
  doc["passed"] = res.passed();
  res.report_json = doc.dump(2);
  return res;
}

SuiteResult reproduce_empirics_synthetic(const ReproduceOptions& opt) {
  SuiteResult res;
  res.suite = "empirics-synthetic";
  res.seed = opt.seed;
  Rng rng(derive_seed(opt.seed, 0));
  IngestResult data;
  data.sizes = synthetic_sizes(opt.synthetic_a, opt.synthetic_count, opt.synthetic_min_bits, opt.synthetic_max_bits, rng);
  const auto r = fit_report(data);

  res.checks.push_back(make_check("fitted a vs " + fmt(opt.synthetic_a), r.fit.a,
                                  "|a - " + fmt(opt.synthetic_a) + "| <= " + fmt(kFitATol),
                                  std::fabs(r.fit.a - opt.synthetic_a) <= kFitATol));
  res.checks.push_back(make_check("KL(obs||scaled) nats", r.kl_scaled, "< " + fmt(kScaledKlMax), r.kl_scaled < kScaledKlMax));
  res.checks.push_back(make_check("KL(obs||scaled) < KL(obs||uniform)", r.kl_uniform - r.kl_scaled, "> 0",
                                  r.kl_scaled < r.kl_uniform));
  res.checks.push_back(make_check("KL(obs||scaled) < KL(obs||pure)", r.kl_pure - r.kl_scaled, "> 0",
                                  r.kl_scaled < r.kl_pure));
  res.checks.push_back(make_check("KL(obs||uniform) < KL(obs||pure)", r.kl_pure - r.kl_uniform, "> 0",
                                  r.kl_uniform < r.kl_pure));
  res.checks.push_back(make_check("fitted a < ln 2", r.fit.a, "< 0.693147", r.fit.a < std::log(2.0)));

  res.files["histogram.csv"] = fit_report_csv(r);
  auto doc = nlohmann::ordered_json::parse(fit_report_json(r));
  doc["suite"] = res.suite;
  doc["seed"] = res.seed;
  doc["ground_truth_a"] = opt.synthetic_a;
  doc["checks"] = checks_json(res.checks);
  doc["passed"] = res.passed();
  res.report_json = doc.dump(2);
  return res;
}

SuiteResult reproduce(const std::string& suite, const ReproduceOptions& opt) {
  if (suite == "averaging") return reproduce_averaging(opt);
  if (suite == "tails") return reproduce_tails(opt);
  if (suite == "empirics-synthetic") return reproduce_empirics_synthetic(opt);
  throw DomainError("unknown reproduce suite '" + suite + "' (tails, averaging, empirics-synthetic)");
}

void write_suite(const SuiteResult& result, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  {
    std::ofstream f(dir / "report.json", std::ios::binary);
    f << result.report_json << '\n';
  }
  for (const auto& [name, content] : result.files) {
    std::ofstream f(dir / name, std::ios::binary);
    f << content;
  }
}

}  // namespace mte
