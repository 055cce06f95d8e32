#include "mte/cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "mte/empirics.hpp"
#include "mte/errors.hpp"
#include "mte/mte_engine.hpp"
#include "mte/omega_code.hpp"
#include "mte/prime_prior.hpp"
#include "mte/ptm_ensemble.hpp"
#include "mte/reproduce.hpp"
#include "mte/tail_analysis.hpp"

namespace mte {
namespace {

namespace fs = std::filesystem;
using ojson = nlohmann::ordered_json;

constexpr const char* kOutDirEnv = "MTE_OUT_DIR";
constexpr double kTailsAlpha = 1e-6;

struct Globals {
  std::uint64_t seed = kDefaultSeed;
  std::string out;
  std::string format = "csv";
  bool bits = false;
};

std::string read_file(const fs::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw DomainError("cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

void write_file(const fs::path& path, const std::string& content) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream f(path, std::ios::binary);
  if (!f) throw DomainError("cannot write '" + path.string() + "'");
  f << content;
}

// --out wins, then $MTE_OUT_DIR/<default_name>, then stdout.
std::optional<fs::path> resolve_out(const std::string& explicit_path, const std::string& default_name) {
  if (!explicit_path.empty()) return fs::path(explicit_path);
  if (const char* dir = std::getenv(kOutDirEnv); dir != nullptr && *dir != '\0') return fs::path(dir) / default_name;
  return std::nullopt;
}

void emit(const Globals& g, const std::string& default_name, const std::string& content, std::ostream& out) {
  if (auto path = resolve_out(g.out, default_name)) {
    write_file(*path, content);
  } else {
    out << content;
  }
}

std::vector<double> split_doubles(const std::string& text) {
  std::vector<double> values;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != item.size()) throw DomainError("not a number: '" + item + "'");
    values.push_back(v);
  }
  return values;
}

std::ostringstream csv_stream() {
  std::ostringstream os;
  os.precision(17);
  return os;
}

PrimePrior load_prior(const std::string& path, double beta, std::uint64_t p_max) {
  if (!path.empty()) return PrimePrior::from_json(read_file(path));
  if (beta > 0.0 && p_max >= 2) return PrimePrior::build(beta, p_max);
  throw DomainError("give --prior FILE or both --beta and --pmax");
}

// Empirical pmf of sampled primes; the seed is recorded in both formats.
std::string empirical_pmf(const Globals& g, const std::map<BigNat, std::uint64_t>& counts, std::uint64_t n) {
  if (g.format == "json") {
    ojson doc;
    doc["seed"] = g.seed;
    doc["draws"] = n;
    ojson primes = ojson::array(), masses = ojson::array();
    for (const auto& [p, c] : counts) {
      primes.push_back(p.to_decimal());
      masses.push_back(static_cast<double>(c) / static_cast<double>(n));
    }
    doc["primes"] = primes;
    doc["masses"] = masses;
    return doc.dump(2) + "\n";
  }
  auto os = csv_stream();
  os << "# seed=" << g.seed << "\nprime,mass\n";
  for (const auto& [p, c] : counts) os << p.to_decimal() << ',' << static_cast<double>(c) / static_cast<double>(n) << '\n';
  return os.str();
}

std::string law_output(const Globals& g, const PrimeLaw& law) {
  if (g.format == "json") {
    ojson doc;
    doc["primes"] = law.primes;
    doc["masses"] = law.masses;
    doc["remainder_bound"] = law.remainder_bound;
    return doc.dump(2) + "\n";
  }
  auto os = csv_stream();
  os << "prime,mass\n";
  for (std::size_t i = 0; i < law.primes.size(); ++i) os << law.primes[i] << ',' << law.masses[i] << '\n';
  return os.str();
}

Ensemble parse_ensemble(const std::vector<std::string>& components, const std::string& weights) {
  if (components.empty()) {
    return Ensemble::make({PtmParams::make(0.3, 0.3, 0.4), PtmParams::make(0.15, 0.55, 0.3)}, {0.4, 0.6});
  }
  std::vector<PtmParams> params;
  for (const auto& c : components) {
    const auto v = split_doubles(c);
    if (v.size() != 3) throw DomainError("--component expects p0,p1,pS");
    params.push_back(PtmParams::make(v[0], v[1], v[2]));
  }
  std::vector<double> w = weights.empty() ? std::vector<double>(params.size(), 1.0 / static_cast<double>(params.size()))
                                          : split_doubles(weights);
  return Ensemble::make(std::move(params), std::move(w));
}

MixingMeasure parse_nu(const std::string& text) {
  const auto doc = nlohmann::json::parse(text);
  const auto& atoms = doc.is_object() ? doc.at("atoms") : doc;
  std::vector<std::pair<double, double>> out;
  for (const auto& a : atoms) {
    if (a.is_array()) {
      out.emplace_back(a.at(0).get<double>(), a.at(1).get<double>());
    } else {
      out.emplace_back(a.at("x").get<double>(), a.at("weight").get<double>());
    }
  }
  return MixingMeasure::make(std::move(out));
}

struct TailsRun {
  std::vector<double> gaps;
  std::function<double(double)> exact;
  std::vector<double> xs;
  double window_x = 1.0;
};

int finish_tails(const Globals& g, const PrimePrior& prior, TailsRun run, const std::string& mode,
                 const std::string& summary_path, std::size_t hill_k, std::ostream& out, std::ostream& err) {
  const auto emp = Ccdf::from_samples(std::move(run.gaps));
  const auto cmp = dkw_compare(emp, gap_support_points(prior, run.xs), run.exact, kTailsAlpha);
  const auto [lo, hi] = default_fit_window(prior, run.window_x, emp.size());
  const std::size_t k = hill_k > 0 ? hill_k
                                   : static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(emp.size()))));

  ojson summary;
  summary["seed"] = g.seed;
  summary["prior"] = prior.id();
  summary["n"] = emp.size();
  try {
    summary["slope"] = loglog_slope(emp, lo, hi);
  } catch (const FitError&) {
    summary["slope"] = nullptr;
  }
  summary["hill_index"] = hill_estimator(emp.sorted(), k);
  summary["hill_k"] = k;
  summary["dkw_violations"] = cmp.violations;
  summary["dkw_epsilon"] = cmp.epsilon;
  summary["sup_distance"] = cmp.sup_distance;
  summary["window"] = {lo, hi};
  const auto fit = regular_variation_slope(prior, run.window_x, lo, hi, SlowVariation::omega_exact);
  summary["slope_exact_removed"] = fit.slope;
  summary["deviation_from_proof_1_minus_lambda"] = fit.deviation_from_proof;
  summary["deviation_from_statement_minus_lambda"] = fit.deviation_from_statement;

  auto os = csv_stream();
  os << "# seed=" << g.seed << "\nu,empirical_survival,exact_survival\n";
  const double u_lo = run.xs.front() * 0.5;
  const double u_hi = run.xs.back() * static_cast<double>(prior.p_max());
  constexpr int kPoints = 200;
  const double step = std::log(u_hi / u_lo) / (kPoints - 1);
  for (int i = 0; i < kPoints; ++i) {
    const double u = u_lo * std::exp(step * i);
    os << u << ',' << emp.survival(u) << ',' << run.exact(u) << '\n';
  }
  const auto csv_path = resolve_out(g.out, "tails_" + mode + ".csv");
  if (csv_path) {
    write_file(*csv_path, os.str());
  } else {
    out << os.str();
  }
  const std::string text = summary.dump(2) + "\n";
  if (!summary_path.empty()) {
    write_file(summary_path, text);
  } else if (csv_path) {
    out << text;
  } else {
    err << text;
  }
  return 0;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Gibbs prime priors, multiplicative chains and codelength statistics", "mte"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_option("--seed", g.seed, "Master seed for every random stream")->capture_default_str();
  app.add_option("--out", g.out, "Output file or directory (default: $MTE_OUT_DIR/<name>, else stdout)");
  app.add_option("--format", g.format, "Output format")->check(CLI::IsMember({"csv", "json"}))->capture_default_str();
  app.add_flag("--bits", g.bits, "Report divergences and fit coefficients in bits instead of nats");

  std::function<int()> action;

  // omega
  auto* omega = app.add_subcommand("omega", "Elias omega codec");
  omega->require_subcommand(1);
  std::string omega_arg;
  auto* enc = omega->add_subcommand("encode", "Codeword of a decimal integer n >= 1");
  enc->add_option("n", omega_arg)->required();
  enc->callback([&] {
    action = [&] {
      out << omega_encode(BigNat::from_decimal(omega_arg)).to_string() << '\n';
      return 0;
    };
  });
  auto* dec = omega->add_subcommand("decode", "Decode a concatenation of codewords, one value per line");
  dec->add_option("bits", omega_arg)->required();
  dec->callback([&] {
    action = [&] {
      const auto bits = BitString::from_string(omega_arg);
      for (std::size_t off = 0; off < bits.size();) {
        const auto d = omega_decode(bits, off);
        out << d.value.to_decimal() << '\n';
        off += d.consumed;
      }
      return 0;
    };
  });
  auto* len = omega->add_subcommand("len", "Codelength of a decimal integer n >= 1");
  len->add_option("n", omega_arg)->required();
  len->callback([&] {
    action = [&] {
      out << omega_len(BigNat::from_decimal(omega_arg)) << '\n';
      return 0;
    };
  });

  // prior
  auto* prior_cmd = app.add_subcommand("prior", "Truncated Gibbs prior on primes");
  prior_cmd->require_subcommand(1);
  double beta = 0.0;
  std::uint64_t p_max = 0;
  std::string prior_path;
  auto* build = prior_cmd->add_subcommand("build", "Build and serialize a prior as JSON");
  build->add_option("--beta", beta)->required();
  build->add_option("--pmax", p_max)->required();
  build->callback([&] {
    action = [&] {
      emit(g, "prior.json", PrimePrior::build(beta, p_max).to_json() + "\n", out);
      return 0;
    };
  });
  auto* mom = prior_cmd->add_subcommand("moments", "E[log2 P], E[len P], E[ln P] and the truncation estimate");
  mom->add_option("--prior", prior_path);
  mom->add_option("--beta", beta);
  mom->add_option("--pmax", p_max);
  mom->callback([&] {
    action = [&] {
      const auto p = load_prior(prior_path, beta, p_max);
      const auto m = p.moments();
      std::string text;
      if (g.format == "json") {
        ojson doc{{"prior", p.id()}, {"mean_log2_P", m.mean_log2_p}, {"mean_len_P", m.mean_len_p},
                  {"mean_ln_P", m.mean_ln_p}, {"truncation_bias", p.truncation_bias()}};
        text = doc.dump(2) + "\n";
      } else {
        auto os = csv_stream();
        os << "beta,p_max,mean_log2_P,mean_len_P,mean_ln_P,truncation_bias\n"
           << p.beta() << ',' << p.p_max() << ',' << m.mean_log2_p << ',' << m.mean_len_p << ',' << m.mean_ln_p << ','
           << p.truncation_bias() << '\n';
        text = os.str();
      }
      emit(g, "moments." + g.format, text, out);
      return 0;
    };
  });
  std::vector<double> ys;
  auto* tail = prior_cmd->add_subcommand("tail", "Exact tail mass P(P > y)");
  tail->add_option("--prior", prior_path);
  tail->add_option("--beta", beta);
  tail->add_option("--pmax", p_max);
  tail->add_option("--y", ys, "Thresholds")->required();
  tail->callback([&] {
    action = [&] {
      const auto p = load_prior(prior_path, beta, p_max);
      auto os = csv_stream();
      os << "y,tail_mass\n";
      for (double y : ys) os << y << ',' << p.tail_mass(y) << '\n';
      emit(g, "tail.csv", os.str(), out);
      return 0;
    };
  });
  std::vector<std::uint64_t> cutoffs{1000, 10000, 100000, 1000000};
  auto* div = prior_cmd->add_subcommand("divergence", "Truncated E[ln P] across cutoffs");
  div->add_option("--beta", beta)->required();
  div->add_option("--cutoffs", cutoffs)->capture_default_str();
  div->callback([&] {
    action = [&] {
      const auto values = divergence_diagnostic(beta, cutoffs);
      auto os = csv_stream();
      os << "cutoff,mean_ln_P\n";
      for (std::size_t i = 0; i < cutoffs.size(); ++i) os << cutoffs[i] << ',' << values[i] << '\n';
      emit(g, "divergence.csv", os.str(), out);
      return 0;
    };
  });

  // ptm
  auto* ptm = app.add_subcommand("ptm", "Probabilistic emitter and prime-filtered laws");
  ptm->require_subcommand(1);
  double p0 = 0.45, p1 = 0.45, ps = 0.1;
  std::uint64_t draws = 100000;
  std::uint64_t max_attempts = kDefaultMaxAttempts;
  auto add_params = [&](CLI::App* sub) {
    sub->add_option("--p0", p0)->capture_default_str();
    sub->add_option("--p1", p1)->capture_default_str();
    sub->add_option("--ps", ps)->capture_default_str();
  };
  auto* sample = ptm->add_subcommand("sample", "Empirical prime-filtered pmf from rejection sampling");
  add_params(sample);
  sample->add_option("--n", draws)->capture_default_str();
  sample->add_option("--max-attempts", max_attempts)->capture_default_str();
  sample->callback([&] {
    action = [&] {
      const auto params = PtmParams::make(p0, p1, ps);
      Rng rng(derive_seed(g.seed, 0));
      std::map<BigNat, std::uint64_t> counts;
      for (std::uint64_t i = 0; i < draws; ++i) ++counts[sample_prime_filtered(params, rng, max_attempts)];
      emit(g, "ptm_sample." + g.format, empirical_pmf(g, counts, draws), out);
      return 0;
    };
  });
  auto* law = ptm->add_subcommand("law", "Exact prime-filtered law truncated at --pmax");
  add_params(law);
  law->add_option("--pmax", p_max)->required();
  law->callback([&] {
    action = [&] {
      emit(g, "ptm_law." + g.format, law_output(g, prime_conditional_exact(PtmParams::make(p0, p1, ps), p_max)), out);
      return 0;
    };
  });
  std::string mode_name = "A";
  std::vector<std::string> components;
  std::string weights;
  auto* equiv = ptm->add_subcommand("equiv", "Empirical pmf of an ensemble under mode A, B or C");
  equiv->add_option("--mode", mode_name)->check(CLI::IsMember({"A", "B", "C"}))->capture_default_str();
  equiv->add_option("--component", components, "p0,p1,pS (repeatable)");
  equiv->add_option("--weights", weights, "w1,w2,... (default uniform)");
  equiv->add_option("--n", draws)->capture_default_str();
  equiv->add_option("--max-attempts", max_attempts)->capture_default_str();
  equiv->callback([&] {
    action = [&] {
      const auto ens = parse_ensemble(components, weights);
      const auto mode = mode_name == "A" ? EnsembleMode::A : mode_name == "B" ? EnsembleMode::B : EnsembleMode::C;
      Rng rng(derive_seed(g.seed, 0));
      std::map<BigNat, std::uint64_t> counts;
      for (std::uint64_t i = 0; i < draws; ++i) ++counts[ensemble_sample(ens, mode, rng, max_attempts)];
      emit(g, "ptm_equiv_" + mode_name + "." + g.format, empirical_pmf(g, counts, draws), out);
      return 0;
    };
  });

  // simulate
  auto* sim = app.add_subcommand("simulate", "Sample trajectories of X_{t+1} = X_t * P_{t+1}");
  std::uint64_t steps = 10000, seeds = 1, thin = 100;
  unsigned workers = 0;
  std::string series_path;
  sim->add_option("--prior", prior_path);
  sim->add_option("--beta", beta);
  sim->add_option("--pmax", p_max);
  sim->add_option("--steps", steps)->capture_default_str();
  sim->add_option("--seeds", seeds)->capture_default_str();
  sim->add_option("--thin", thin)->capture_default_str();
  sim->add_option("--workers", workers, "Worker threads (0 = hardware concurrency)");
  sim->add_option("--series", series_path, "Also write the running averages CSV here");
  sim->callback([&] {
    action = [&] {
      const auto p = load_prior(prior_path, beta, p_max);
      const auto trajs = simulate_many(p, steps, g.seed, seeds, thin, workers);
      auto os = csv_stream();
      os << "seed,t,prime,log2_X,len_X\n";
      for (const auto& tr : trajs) {
        for (const auto& s : tr.steps) os << tr.seed << ',' << s.t << ',' << s.prime << ',' << s.log2_x << ',' << s.len_x << '\n';
      }
      emit(g, "trajectories.csv", os.str(), out);
      if (!series_path.empty()) {
        auto ss = csv_stream();
        ss << "seed,t,len_X_per_t,mean_len_P,log2_X_per_t\n";
        for (const auto& tr : trajs) {
          for (const auto& r : averaging_series(tr)) {
            ss << tr.seed << ',' << r.t << ',' << r.len_x_per_t << ',' << r.mean_len_p << ',' << r.log2_x_per_t << '\n';
          }
        }
        write_file(series_path, ss.str());
      }
      return 0;
    };
  });

  // tails
  auto* tails = app.add_subcommand("tails", "Gap-tail samples against the exact survival function");
  tails->require_subcommand(1);
  double x = 1.0;
  std::uint64_t n = 1000000;
  std::size_t hill_k = 0;
  std::string nu_path, summary_path;
  auto add_tail_opts = [&](CLI::App* sub) {
    sub->add_option("--prior", prior_path);
    sub->add_option("--beta", beta);
    sub->add_option("--pmax", p_max);
    sub->add_option("--n", n)->capture_default_str();
    sub->add_option("--hill-k", hill_k, "Order statistics for the Hill estimate (default ceil(sqrt n))");
    sub->add_option("--summary", summary_path, "JSON summary path");
  };
  auto* cond = tails->add_subcommand("conditional", "Gaps x(P - 1) for a fixed state x");
  add_tail_opts(cond);
  cond->add_option("--x", x)->capture_default_str();
  cond->callback([&] {
    action = [&] {
      const auto p = load_prior(prior_path, beta, p_max);
      if (!(x >= 1.0) || x != std::floor(x)) throw DomainError("--x must be a positive integer");
      Rng rng(derive_seed(g.seed, 0));
      TailsRun run;
      for (const auto& gap : gap_samples(p, BigNat(static_cast<std::uint64_t>(x)), n, rng)) run.gaps.push_back(gap.to_double());
      run.exact = [&p, x](double u) { return u <= 0.0 ? 1.0 : conditional_gap_tail_exact(p, x, u); };
      run.xs = {x};
      run.window_x = x;
      return finish_tails(g, p, std::move(run), "conditional", summary_path, hill_k, out, err);
    };
  });
  auto* mix = tails->add_subcommand("mixture", "Gaps with the state drawn from a finite mixing measure");
  add_tail_opts(mix);
  mix->add_option("--nu", nu_path, "JSON {\"atoms\": [{\"x\": ..., \"weight\": ...}, ...]}")->required();
  mix->callback([&] {
    action = [&] {
      const auto p = load_prior(prior_path, beta, p_max);
      const auto nu = parse_nu(read_file(nu_path));
      Rng rng(derive_seed(g.seed, 0));
      TailsRun run;
      run.gaps.reserve(n);
      for (std::uint64_t i = 0; i < n; ++i) {
        const double xi = nu.sample(rng);
        run.gaps.push_back(xi * static_cast<double>(p.sample(rng) - 1));
      }
      run.exact = [&p, &nu](double u) { return u <= 0.0 ? 1.0 : mixture_gap_tail(p, nu, u); };
      for (const auto& [xi, w] : nu.atoms) run.xs.push_back(xi);
      std::sort(run.xs.begin(), run.xs.end());
      run.window_x = run.xs.back();
      return finish_tails(g, p, std::move(run), "mixture", summary_path, hill_k, out, err);
    };
  });

  // fit
  auto* fit = app.add_subcommand("fit", "Codelength histogram of file sizes against three models");
  std::string input, input_format = "plain", csv_path;
  bool weighted = false;
  fit->add_option("--input", input, "Sizes file, Packages index, or package-index JSON file/directory")->required();
  fit->add_option("--format", input_format, "Input format")
      ->check(CLI::IsMember({"plain", "debian", "pypi"}))
      ->capture_default_str();
  fit->add_option("--csv", csv_path, "Also write the per-codelength model table here");
  fit->add_flag("--weighted", weighted, "Count-weighted least squares for the scaled model");
  fit->callback([&] {
    action = [&] {
      IngestResult data;
      if (input_format == "plain") {
        data = ingest_plain(read_file(input));
      } else if (input_format == "debian") {
        data = ingest_debian(read_file(input));
      } else {
        std::vector<NamedDocument> docs;
        if (fs::is_directory(input)) {
          std::vector<fs::path> files;
          for (const auto& e : fs::directory_iterator(input)) {
            if (e.is_regular_file() && e.path().extension() == ".json") files.push_back(e.path());
          }
          std::sort(files.begin(), files.end());
          for (const auto& f : files) docs.push_back({f.filename().string(), read_file(f)});
        } else {
          docs.push_back({fs::path(input).filename().string(), read_file(input)});
        }
        data = ingest_pypi(docs);
      }
      const auto report = fit_report(data, g.bits, weighted);
      emit(g, "fit_report.json", fit_report_json(report) + "\n", out);
      if (!csv_path.empty()) write_file(csv_path, fit_report_csv(report));
      return 0;
    };
  });

  // reproduce
  auto* repro = app.add_subcommand("reproduce", "Run a fixed-seed acceptance experiment and write its report");
  std::string suite;
  repro->add_option("suite", suite)->required()->check(CLI::IsMember({"tails", "averaging", "empirics-synthetic"}));
  repro->add_option("--workers", workers, "Worker threads for the averaging suite");
  repro->callback([&] {
    action = [&] {
      ReproduceOptions opt;
      opt.seed = g.seed;
      opt.workers = workers;
      const auto result = reproduce(suite, opt);
      fs::path dir = g.out;
      if (dir.empty()) {
        const char* env = std::getenv(kOutDirEnv);
        dir = (env != nullptr && *env != '\0') ? fs::path(env) / ("reproduce-" + suite) : fs::path("reproduce-" + suite);
      }
      write_suite(result, dir);
      for (const auto& c : result.checks) {
        out << (c.passed ? "PASS  " : "FAIL  ") << c.name << ": " << c.value << " (" << c.requirement << ")\n";
      }
      out << "report: " << (dir / "report.json").string() << '\n';
      if (!result.passed()) {
        err << "reproduce " << suite << ": failed checks:\n";
        for (const auto& c : result.checks) {
          if (!c.passed) err << "  " << c.name << '\n';
        }
        return 1;
      }
      return 0;
    };
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "mte: " << e.what() << "\n\n" << app.help();
    return 2;
  }

  try {
    return action ? action() : 2;
  } catch (const DecodeError& e) {
    err << "mte: decode error: " << e.what() << '\n';
  } catch (const ParseError& e) {
    err << "mte: parse error: " << e.what() << '\n';
  } catch (const AbortError& e) {
    err << "mte: aborted: " << e.what() << '\n';
  } catch (const std::exception& e) {
    err << "mte: " << e.what() << '\n';
  }
  return 1;
}

}  // namespace mte
