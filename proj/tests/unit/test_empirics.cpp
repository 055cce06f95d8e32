#include <doctest.h>

#include <cmath>
#include <json.hpp>

#include "mte/empirics.hpp"
#include "mte/errors.hpp"
#include "mte/omega_code.hpp"

using namespace mte;

TEST_CASE("debian ingestion") {
  auto r = ingest_debian("Package: foo\nSize: 1234\n\n");
  CHECK(r.sizes == std::vector<std::uint64_t>{1234});
  CHECK(r.skipped == 0);

  r = ingest_debian("Package: a\nSize: 10\n\nPackage: b\nVersion: 1\n");
  CHECK(r.sizes == std::vector<std::uint64_t>{10});
  CHECK(r.skipped == 1);

  r = ingest_debian("Package: z\nSize: 0\n");
  CHECK(r.sizes.empty());
  CHECK(r.skipped == 1);

  r = ingest_debian(
      "# comment\nPackage: c\nDescription: short\n long continuation\n .\nsize: 77\n\n\n\nPackage: d\nSize: 5\n");
  CHECK(r.sizes == std::vector<std::uint64_t>{77, 5});

  try {
    ingest_debian("Package: a\nSize: 3\nthis is not a field\n");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 3);
  }
  CHECK_THROWS_AS(ingest_debian(" orphan continuation\n"), ParseError);
  CHECK_THROWS_AS(ingest_debian("Size: x\n"), ParseError);
}

TEST_CASE("package index ingestion") {
  const std::vector<NamedDocument> two{{"p", R"({"releases": {"1.0": [{"size": 10}, {"size": 20}]}})"}};
  auto r = ingest_pypi(two);
  CHECK(r.sizes == std::vector<std::uint64_t>{10, 20});

  const std::vector<NamedDocument> empty{{"p", R"({"releases": {}})"}};
  r = ingest_pypi(empty);
  CHECK(r.sizes.empty());

  const std::vector<NamedDocument> strict{{"p", R"({"releases": {"1": [{"size": "10"}, {"filename": "x"}, {"size": 5}]}})"}};
  r = ingest_pypi(strict);
  CHECK(r.sizes == std::vector<std::uint64_t>{5});
  CHECK(r.skipped == 2);

  const std::vector<NamedDocument> urls{{"p", R"({"info": {}, "urls": [{"size": 3}]})"}};
  CHECK(ingest_pypi(urls).sizes == std::vector<std::uint64_t>{3});

  const std::vector<NamedDocument> broken{{"good", R"({"releases": {}})"}, {"broken-doc", "{not json"}};
  try {
    ingest_pypi(broken);
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(std::string(e.what()).find("broken-doc") != std::string::npos);
  }
}

TEST_CASE("plain ingestion") {
  CHECK(ingest_plain("5\n7\n").sizes == std::vector<std::uint64_t>{5, 7});
  CHECK(ingest_plain("").sizes.empty());
  const auto z = ingest_plain("0\n\n3\n");
  CHECK(z.sizes == std::vector<std::uint64_t>{3});
  CHECK(z.skipped == 1);
  try {
    ingest_plain("x");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 1);
  }
}

TEST_CASE("codelength histogram") {
  const std::vector<std::uint64_t> s{2, 3, 4};
  const auto h = codelength_histogram(s);
  CHECK(h.bins == std::map<std::uint64_t, std::uint64_t>{{3, 2}, {6, 1}});
  CHECK(h.probs()[0] == doctest::Approx(2.0 / 3.0));
  CHECK(h.probs()[1] == doctest::Approx(1.0 / 3.0));
  const std::vector<std::uint64_t> one{1};
  CHECK(codelength_histogram(one).probs() == std::vector<double>{1.0});
  const std::vector<std::uint64_t> sixteen{16, 16};
  CHECK(codelength_histogram(sixteen).bins == std::map<std::uint64_t, std::uint64_t>{{11, 2}});
  const std::vector<std::uint64_t> zeros{0, 0};
  CHECK_THROWS_AS(codelength_histogram(zeros), DomainError);
}

namespace {

CodelengthHistogram hist_from(std::map<std::uint64_t, std::uint64_t> bins) {
  CodelengthHistogram h;
  h.bins = std::move(bins);
  for (const auto& [l, c] : h.bins) h.total += c;
  return h;
}

}  // namespace

TEST_CASE("uniform and pure models") {
  CHECK(model_uniform(hist_from({{3, 1}, {6, 1}, {7, 1}})).probs == std::vector<double>(3, 1.0 / 3.0));
  CHECK(model_uniform(hist_from({{3, 5}})).probs == std::vector<double>{1.0});
  CHECK(model_uniform(hist_from({{3, 1}, {6, 2}, {7, 3}, {9, 4}})).probs == std::vector<double>(4, 0.25));
  auto p = model_pure_omega(hist_from({{3, 1}, {6, 1}})).probs;
  CHECK(p[0] == doctest::Approx(8.0 / 9.0));
  CHECK(p[1] == doctest::Approx(1.0 / 9.0));
  CHECK(model_pure_omega(hist_from({{3, 4}})).probs == std::vector<double>{1.0});
  p = model_pure_omega(hist_from({{3, 1}, {4, 1}})).probs;
  CHECK(p[0] == doctest::Approx(2.0 / 3.0));
  CHECK(p[1] == doctest::Approx(1.0 / 3.0));
}

TEST_CASE("scaled fit") {
  // Exact exponential counts: P(l) proportional to e^{-0.5 l} on l = 10..30.
  CodelengthHistogram h;
  for (std::uint64_t l = 10; l <= 30; ++l) {
    const auto c = static_cast<std::uint64_t>(std::llround(1e15 * std::exp(-0.5 * static_cast<double>(l - 10))));
    h.bins[l] = c;
    h.total += c;
  }
  const auto fit = fit_scaled(h);
  CHECK(std::fabs(fit.a - 0.5) < 1e-9);
  CHECK(fit.residual < 1e-9);
  const auto scaled = model_scaled(h, fit);
  const auto obs = observed_pmf(h);
  for (std::size_t i = 0; i < obs.probs.size(); ++i) CHECK(std::fabs(scaled.probs[i] - obs.probs[i]) < 1e-9 * obs.probs[0]);

  const auto two = fit_scaled(hist_from({{3, 7}, {6, 2}}));
  CHECK(two.residual < 1e-12);
  CHECK(two.a == doctest::Approx(std::log(7.0 / 2.0) / 3.0));
  CHECK_THROWS_AS(fit_scaled(hist_from({{3, 7}})), FitError);

  const auto bins = hist_from({{3, 5}, {6, 1}, {7, 9}, {12, 2}});
  const auto u = model_scaled(bins, ScaledFit{0.0, 1.0, 0.0});
  for (double v : u.probs) CHECK(v == doctest::Approx(0.25));
  const auto pure = model_pure_omega(bins);
  const auto ln2 = model_scaled(bins, ScaledFit{std::log(2.0), -3.0, 0.0});
  for (std::size_t i = 0; i < pure.probs.size(); ++i) CHECK(std::fabs(pure.probs[i] - ln2.probs[i]) < 1e-12);

  // Count weighting changes the answer on noisy data but not on exact data.
  CHECK(std::fabs(fit_scaled(h, true).a - 0.5) < 1e-9);
}

TEST_CASE("kl divergence") {
  const std::vector<double> p{0.2, 0.3, 0.5};
  CHECK(kl_divergence(p, p) == 0.0);
  const std::vector<double> a{0.5, 0.5}, b{0.75, 0.25};
  CHECK(kl_divergence(a, b) == doctest::Approx(0.5 * std::log(4.0 / 3.0)).epsilon(1e-14));
  CHECK(kl_divergence(a, b) == doctest::Approx(0.14384).epsilon(1e-4));
  CHECK(kl_divergence(a, b, true) == doctest::Approx(0.20752).epsilon(1e-4));
  const std::vector<double> c{1.0, 0.0}, d{0.5, 0.5};
  CHECK(kl_divergence(c, d) == doctest::Approx(std::log(2.0)));
  CHECK_THROWS_AS(kl_divergence(d, c), DomainError);
  Rng rng(3);
  for (int t = 0; t < 100; ++t) {
    std::vector<double> x(6), y(6);
    double sx = 0, sy = 0;
    for (int i = 0; i < 6; ++i) {
      x[i] = rng.uniform01() + 1e-3;
      y[i] = rng.uniform01() + 1e-3;
      sx += x[i];
      sy += y[i];
    }
    for (int i = 0; i < 6; ++i) {
      x[i] /= sx;
      y[i] /= sy;
    }
    REQUIRE(kl_divergence(x, y) >= 0.0);
    REQUIRE(kl_divergence(x, x) == 0.0);
  }
}

TEST_CASE("gibbs alignment") {
  const std::vector<std::pair<std::uint64_t, double>> point{{5, 1.0}};
  auto g = gibbs_alignment(point);
  CHECK(g.entropy == 0.0);
  CHECK(g.mean_len == 6.0);
  CHECK(g.alignment == 6.0);

  const double k3 = kraft_partial_sum(3);
  const std::vector<std::pair<std::uint64_t, double>> kraft{{1, 0.5 / k3}, {2, 0.125 / k3}, {3, 0.125 / k3}};
  g = gibbs_alignment(kraft);
  CHECK(g.alignment == doctest::Approx(-std::log2(k3)).epsilon(1e-13));
  CHECK(g.alignment == doctest::Approx(0.415).epsilon(1e-3));

  const std::vector<std::pair<std::uint64_t, double>> uni{{2, 0.5}, {3, 0.5}};
  g = gibbs_alignment(uni);
  CHECK(g.entropy == doctest::Approx(1.0));
  CHECK(g.mean_len == doctest::Approx(3.0));
  CHECK(g.alignment == doctest::Approx(2.0));
}

TEST_CASE("fit report formats") {
  IngestResult data;
  data.sizes = {2, 3, 4, 5, 16, 17, 100, 1000, 1000, 70000};
  data.skipped = 2;
  const auto r = fit_report(data);
  const auto doc = nlohmann::json::parse(fit_report_json(r));
  for (const char* key : {"bins", "probs", "kl_uniform", "kl_pure", "kl_scaled", "a", "c", "residual", "skipped"}) {
    CHECK(doc.contains(key));
  }
  CHECK(doc["skipped"] == 2);
  CHECK(doc["units"] == "nats");
  const auto rb = fit_report(data, true);
  CHECK(rb.kl_uniform == doctest::Approx(r.kl_uniform / std::log(2.0)));
  const auto csv = fit_report_csv(r);
  CHECK(csv.rfind("l,P_obs,P_uniform,P_pure,P_scaled\n", 0) == 0);
  CHECK(fit_report_json(r) == fit_report_json(fit_report(data)));
}

TEST_CASE("synthetic sizes follow the requested codelength law") {
  Rng rng(10);
  const auto sizes = synthetic_sizes(0.45, 200000, 5, 17, rng);
  CHECK(sizes.size() == 200000);
  const auto h = codelength_histogram(sizes);
  double z = 0.0;
  for (const auto& [l, c] : h.bins) z += std::exp(-0.45 * static_cast<double>(l));
  for (const auto& [l, c] : h.bins) {
    const double expect = std::exp(-0.45 * static_cast<double>(l)) / z;
    const double sigma = std::sqrt(expect * (1 - expect) / 200000.0);
    CHECK(std::fabs(static_cast<double>(c) / 200000.0 - expect) < 5 * sigma);
  }
  for (auto s : sizes) {
    REQUIRE(s >= 16);
    REQUIRE(s < (1u << 17));
  }
}
