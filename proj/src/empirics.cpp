#include "mte/empirics.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <sstream>

#include <json.hpp>

#include "mte/errors.hpp"
#include "mte/omega_code.hpp"
#include "mte/summation.hpp"

namespace mte {
namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

bool parse_u64(std::string_view s, std::uint64_t& out) {
  if (s.empty()) return false;
  const auto* end = s.data() + s.size();
  const auto res = std::from_chars(s.data(), end, out);
  return res.ec == std::errc() && res.ptr == end;
}

bool iequals(std::string_view a, std::string_view b) {
  return a.size() == b.size() && std::equal(a.begin(), a.end(), b.begin(), [](char x, char y) {
           return std::tolower(static_cast<unsigned char>(x)) == std::tolower(static_cast<unsigned char>(y));
         });
}

// Calls fn(line, 1-based line number) for every line, tolerating CRLF.
template <typename Fn>
void for_each_line(std::string_view text, Fn&& fn) {
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    const auto nl = text.find('\n', pos);
    const auto end = nl == std::string_view::npos ? text.size() : nl;
    auto line = text.substr(pos, end - pos);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    fn(line, ++line_no);
    if (nl == std::string_view::npos) break;
    pos = nl + 1;
  }
}

LengthPmf normalized(const std::vector<std::uint64_t>& lengths, const std::vector<double>& log_weights) {
  const double top = *std::max_element(log_weights.begin(), log_weights.end());
  LengthPmf out{lengths, std::vector<double>(lengths.size())};
  CompensatedSum z;
  for (std::size_t i = 0; i < lengths.size(); ++i) {
    out.probs[i] = std::exp(log_weights[i] - top);
    z += out.probs[i];
  }
  for (double& p : out.probs) p /= z.value();
  return out;
}

void require_bins(const CodelengthHistogram& hist) {
  if (hist.bins.empty()) throw DomainError("histogram has no bins");
}

}  // namespace

IngestResult ingest_debian(std::string_view text) {
  IngestResult out;
  bool in_stanza = false;
  bool have_field = false;
  bool have_size = false;
  std::uint64_t size = 0;

  auto close_stanza = [&] {
    if (!in_stanza) return;
    if (have_size && size > 0) {
      out.sizes.push_back(size);
    } else {
      ++out.skipped;
    }
    in_stanza = have_field = have_size = false;
    size = 0;
  };

  for_each_line(text, [&](std::string_view line, std::size_t line_no) {
    if (trim(line).empty()) {
      close_stanza();
      return;
    }
    if (line.front() == '#') return;
    if (line.front() == ' ' || line.front() == '\t') {
      if (!have_field) throw ParseError("Debian index: continuation line outside a field", line_no);
      return;
    }
    const auto colon = line.find(':');
    if (colon == std::string_view::npos || colon == 0) {
      throw ParseError("Debian index: expected 'Key: value'", line_no);
    }
    const auto key = line.substr(0, colon);
    if (key.find_first_of(" \t") != std::string_view::npos) {
      throw ParseError("Debian index: field name contains whitespace", line_no);
    }
    in_stanza = have_field = true;
    if (iequals(key, "Size")) {
      if (have_size) throw ParseError("Debian index: duplicate Size field", line_no);
      if (!parse_u64(trim(line.substr(colon + 1)), size)) {
        throw ParseError("Debian index: Size is not a nonnegative integer", line_no);
      }
      have_size = true;
    }
  });
  close_stanza();
  return out;
}

IngestResult ingest_pypi(std::span<const NamedDocument> docs) {
  IngestResult out;
  for (const auto& doc : docs) {
    nlohmann::json root;
    try {
      root = nlohmann::json::parse(doc.text);
    } catch (const nlohmann::json::exception& e) {
      throw ParseError("package index document '" + doc.name + "': " + e.what(), 0);
    }
    if (!root.is_object()) throw ParseError("package index document '" + doc.name + "': not an object", 0);

    auto take_file = [&](const nlohmann::json& file) {
      if (!file.is_object()) {
        ++out.skipped;
        return;
      }
      const auto it = file.find("size");
      if (it == file.end() || !(it->is_number_unsigned() || it->is_number_integer())) {
        ++out.skipped;
        return;
      }
      if (it->is_number_integer() && it->get<std::int64_t>() <= 0) {
        ++out.skipped;
        return;
      }
      out.sizes.push_back(it->get<std::uint64_t>());
    };

    // "releases" lists every version; "urls" only the latest, so it is a fallback.
    if (const auto rel = root.find("releases"); rel != root.end()) {
      if (!rel->is_object()) throw ParseError("package index document '" + doc.name + "': releases is not an object", 0);
      for (const auto& [version, files] : rel->items()) {
        if (!files.is_array()) {
          throw ParseError("package index document '" + doc.name + "': release " + version + " is not a list", 0);
        }
        for (const auto& f : files) take_file(f);
      }
    } else if (const auto urls = root.find("urls"); urls != root.end() && urls->is_array()) {
      for (const auto& f : *urls) take_file(f);
    } else {
      throw ParseError("package index document '" + doc.name + "': no releases or urls", 0);
    }
  }
  return out;
}

IngestResult ingest_plain(std::string_view text) {
  IngestResult out;
  for_each_line(text, [&](std::string_view line, std::size_t line_no) {
    const auto t = trim(line);
    if (t.empty()) return;
    std::uint64_t v = 0;
    if (!parse_u64(t, v)) throw ParseError("sizes file: not a nonnegative integer", line_no);
    if (v == 0) {
      ++out.skipped;
    } else {
      out.sizes.push_back(v);
    }
  });
  return out;
}

std::vector<std::uint64_t> CodelengthHistogram::lengths() const {
  std::vector<std::uint64_t> out;
  out.reserve(bins.size());
  for (const auto& [len, count] : bins) out.push_back(len);
  return out;
}

std::vector<double> CodelengthHistogram::probs() const {
  std::vector<double> out;
  out.reserve(bins.size());
  for (const auto& [len, count] : bins) out.push_back(static_cast<double>(count) / static_cast<double>(total));
  return out;
}

CodelengthHistogram codelength_histogram(std::span<const std::uint64_t> sizes) {
  CodelengthHistogram hist;
  for (std::uint64_t n : sizes) {
    if (n == 0) continue;
    ++hist.bins[omega_len(n)];
    ++hist.total;
  }
  if (hist.total == 0) throw DomainError("codelength_histogram: no sizes >= 1");
  return hist;
}

LengthPmf observed_pmf(const CodelengthHistogram& hist) {
  require_bins(hist);
  return LengthPmf{hist.lengths(), hist.probs()};
}

LengthPmf model_uniform(const CodelengthHistogram& hist) {
  require_bins(hist);
  const auto lengths = hist.lengths();
  return LengthPmf{lengths, std::vector<double>(lengths.size(), 1.0 / static_cast<double>(lengths.size()))};
}

LengthPmf model_pure_omega(const CodelengthHistogram& hist) {
  require_bins(hist);
  const auto lengths = hist.lengths();
  std::vector<double> logw;
  for (auto l : lengths) logw.push_back(-static_cast<double>(l) * std::log(2.0));
  return normalized(lengths, logw);
}

ScaledFit fit_scaled(const CodelengthHistogram& hist, bool count_weighted) {
  if (hist.bins.size() < 2) throw FitError("fit_scaled: need at least two observed codelengths");
  std::vector<double> x, y, w;
  for (const auto& [len, count] : hist.bins) {
    x.push_back(static_cast<double>(len));
    y.push_back(-std::log(static_cast<double>(count) / static_cast<double>(hist.total)));
    w.push_back(count_weighted ? static_cast<double>(count) : 1.0);
  }
  double sw = 0.0, mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sw += w[i];
    mx += w[i] * x[i];
    my += w[i] * y[i];
  }
  mx /= sw;
  my /= sw;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += w[i] * (x[i] - mx) * (x[i] - mx);
    sxy += w[i] * (x[i] - mx) * (y[i] - my);
  }
  ScaledFit fit;
  fit.a = sxy / sxx;
  fit.c = my - fit.a * mx;
  double sq = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = y[i] - (fit.a * x[i] + fit.c);
    sq += r * r;
  }
  fit.residual = std::sqrt(sq / static_cast<double>(x.size()));
  return fit;
}

LengthPmf model_scaled(const CodelengthHistogram& hist, const ScaledFit& fit) {
  require_bins(hist);
  const auto lengths = hist.lengths();
  std::vector<double> logw;
  for (auto l : lengths) logw.push_back(-fit.a * static_cast<double>(l) - fit.c);
  return normalized(lengths, logw);
}

double kl_divergence(std::span<const double> p, std::span<const double> q, bool in_bits) {
  if (p.size() != q.size()) throw DomainError("kl_divergence: P and Q must share a support");
  CompensatedSum acc;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] <= 0.0) continue;
    if (q[i] <= 0.0) throw DomainError("kl_divergence: Q vanishes where P is positive");
    acc += p[i] * std::log(p[i] / q[i]);
  }
  const double nats = std::max(0.0, acc.value());
  return in_bits ? nats / std::log(2.0) : nats;
}

GibbsAlignment gibbs_alignment(std::span<const std::pair<std::uint64_t, double>> mu) {
  CompensatedSum total, entropy, mean_len, alignment;
  for (const auto& [n, m] : mu) {
    if (n == 0) throw DomainError("gibbs_alignment: support must be >= 1");
    if (m < 0.0) throw DomainError("gibbs_alignment: negative mass");
    if (m == 0.0) continue;
    const double len = static_cast<double>(omega_len(n));
    const double lg = std::log2(m);
    total += m;
    entropy += -m * lg;
    mean_len += m * len;
    alignment += m * (len + lg);
  }
  if (std::fabs(total.value() - 1.0) > 1e-9) throw DomainError("gibbs_alignment: masses must sum to 1");
  return GibbsAlignment{alignment.value(), entropy.value(), mean_len.value()};
}

FitReport fit_report(const IngestResult& data, bool in_bits, bool count_weighted) {
  FitReport r;
  r.hist = codelength_histogram(data.sizes);
  r.skipped = data.skipped;
  r.in_bits = in_bits;
  r.observed = observed_pmf(r.hist);
  r.uniform = model_uniform(r.hist);
  r.pure = model_pure_omega(r.hist);
  r.fit = fit_scaled(r.hist, count_weighted);
  r.scaled = model_scaled(r.hist, r.fit);
  r.kl_uniform = kl_divergence(r.observed.probs, r.uniform.probs, in_bits);
  r.kl_pure = kl_divergence(r.observed.probs, r.pure.probs, in_bits);
  r.kl_scaled = kl_divergence(r.observed.probs, r.scaled.probs, in_bits);
  return r;
}

std::string fit_report_json(const FitReport& r) {
  const double scale = r.in_bits ? 1.0 / std::log(2.0) : 1.0;
  nlohmann::ordered_json doc;
  nlohmann::ordered_json bins = nlohmann::ordered_json::object();
  nlohmann::ordered_json probs = nlohmann::ordered_json::object();
  for (std::size_t i = 0; i < r.observed.lengths.size(); ++i) {
    const auto key = std::to_string(r.observed.lengths[i]);
    bins[key] = r.hist.bins.at(r.observed.lengths[i]);
    probs[key] = r.observed.probs[i];
  }
  doc["units"] = r.in_bits ? "bits" : "nats";
  doc["total"] = r.hist.total;
  doc["bins"] = bins;
  doc["probs"] = probs;
  doc["kl_uniform"] = r.kl_uniform;
  doc["kl_pure"] = r.kl_pure;
  doc["kl_scaled"] = r.kl_scaled;
  doc["a"] = r.fit.a * scale;
  doc["c"] = r.fit.c * scale;
  doc["residual"] = r.fit.residual * scale;
  doc["a_below_ln2"] = r.fit.a < std::log(2.0);
  doc["skipped"] = r.skipped;
  return doc.dump(2);
}

std::string fit_report_csv(const FitReport& r) {
  std::ostringstream os;
  os.precision(17);
  os << "l,P_obs,P_uniform,P_pure,P_scaled\n";
  for (std::size_t i = 0; i < r.observed.lengths.size(); ++i) {
    os << r.observed.lengths[i] << ',' << r.observed.probs[i] << ',' << r.uniform.probs[i] << ','
       << r.pure.probs[i] << ',' << r.scaled.probs[i] << '\n';
  }
  return os.str();
}

std::vector<std::uint64_t> synthetic_sizes(double a, std::uint64_t count, unsigned min_bits, unsigned max_bits,
                                           Rng& rng) {
  if (min_bits < 1 || max_bits < min_bits || max_bits > 63) {
    throw DomainError("synthetic_sizes: need 1 <= min_bits <= max_bits <= 63");
  }
  std::vector<double> cumulative;
  double acc = 0.0;
  for (unsigned b = min_bits; b <= max_bits; ++b) {
    acc += std::exp(-a * static_cast<double>(omega_len_for_bit_length(b)));
    cumulative.push_back(acc);
  }
  std::vector<std::uint64_t> sizes;
  sizes.reserve(count);
  for (std::uint64_t i = 0; i < count; ++i) {
    const double u = rng.uniform01() * acc;
    const auto k = static_cast<unsigned>(std::upper_bound(cumulative.begin(), cumulative.end(), u) - cumulative.begin());
    const unsigned b = min_bits + std::min<unsigned>(k, max_bits - min_bits);
    // Uniform in [2^(b-1), 2^b).
    const std::uint64_t offset = b == 1 ? 0 : rng() >> (65 - b);
    sizes.push_back((std::uint64_t{1} << (b - 1)) + offset);
  }
  return sizes;
}

}  // namespace mte
