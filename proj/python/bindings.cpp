#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "mte/bignat.hpp"
#include "mte/empirics.hpp"
#include "mte/errors.hpp"
#include "mte/mte_engine.hpp"
#include "mte/omega_code.hpp"
#include "mte/prime_prior.hpp"
#include "mte/ptm_ensemble.hpp"
#include "mte/reproduce.hpp"
#include "mte/tail_analysis.hpp"

namespace py = pybind11;

// Python int <-> BigNat through the decimal representation.
namespace pybind11::detail {
template <>
struct type_caster<mte::BigNat> {
  PYBIND11_TYPE_CASTER(mte::BigNat, const_name("int"));

  bool load(handle src, bool) {
    if (!PyLong_Check(src.ptr())) return false;
    if (PyObject_RichCompareBool(src.ptr(), py::int_(0).ptr(), Py_LT) == 1) {
      throw py::value_error("natural numbers only");
    }
    value = mte::BigNat::from_decimal(py::str(src).cast<std::string>());
    return true;
  }

  static handle cast(const mte::BigNat& n, return_value_policy, handle) {
    return PyLong_FromString(n.to_decimal().c_str(), nullptr, 10);
  }
};
}  // namespace pybind11::detail

namespace {

std::string bits_to_str(const mte::BitString& b) { return b.to_string(); }

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Elias omega codes, Gibbs prime priors, multiplicative chains and codelength fits";

  py::register_exception<mte::DomainError>(m, "DomainError", PyExc_ValueError);
  py::register_exception<mte::DecodeError>(m, "DecodeError", PyExc_ValueError);
  py::register_exception<mte::ParseError>(m, "ParseError", PyExc_ValueError);
  py::register_exception<mte::AbortError>(m, "AbortError", PyExc_RuntimeError);
  py::register_exception<mte::FitError>(m, "FitError", PyExc_RuntimeError);

  // codec
  m.def("omega_encode", [](const mte::BigNat& n) { return bits_to_str(mte::omega_encode(n)); }, py::arg("n"));
  m.def(
      "omega_decode",
      [](const std::string& bits, std::size_t offset) {
        const auto d = mte::omega_decode(mte::BitString::from_string(bits), offset);
        return py::make_tuple(d.value, d.consumed);
      },
      py::arg("bits"), py::arg("offset") = 0, "Returns (value, bits consumed).");
  m.def("omega_len", py::overload_cast<const mte::BigNat&>(&mte::omega_len), py::arg("n"));
  m.def("kraft_partial_sum", &mte::kraft_partial_sum, py::arg("n"));
  m.def("near_additivity_defect", py::overload_cast<const mte::BigNat&, const mte::BigNat&>(&mte::near_additivity_defect),
        py::arg("a"), py::arg("b"));

  // prior
  py::class_<mte::PriorMoments>(m, "PriorMoments")
      .def_readonly("mean_log2_p", &mte::PriorMoments::mean_log2_p)
      .def_readonly("mean_len_p", &mte::PriorMoments::mean_len_p)
      .def_readonly("mean_ln_p", &mte::PriorMoments::mean_ln_p);
  py::class_<mte::PrimePrior>(m, "PrimePrior")
      .def_static("build", py::overload_cast<double, std::uint64_t>(&mte::PrimePrior::build), py::arg("beta"),
                  py::arg("p_max"))
      .def_static("from_json", &mte::PrimePrior::from_json)
      .def("to_json", &mte::PrimePrior::to_json)
      .def_property_readonly("beta", &mte::PrimePrior::beta)
      .def_property_readonly("p_max", &mte::PrimePrior::p_max)
      .def_property_readonly("primes",
                             [](const mte::PrimePrior& p) { return std::vector<std::uint64_t>(p.primes().begin(), p.primes().end()); })
      .def_property_readonly("masses",
                             [](const mte::PrimePrior& p) { return std::vector<double>(p.masses().begin(), p.masses().end()); })
      .def("mass", &mte::PrimePrior::mass)
      .def("tail_mass", &mte::PrimePrior::tail_mass)
      .def("moments", &mte::PrimePrior::moments)
      .def(
          "sample",
          [](const mte::PrimePrior& p, std::uint64_t count, std::uint64_t seed) {
            mte::Rng rng(seed);
            std::vector<std::uint64_t> out(count);
            for (auto& v : out) v = p.sample(rng);
            return out;
          },
          py::arg("count"), py::arg("seed") = mte::kDefaultSeed);
  m.def("divergence_diagnostic", &mte::divergence_diagnostic, py::arg("beta"), py::arg("cutoffs"));

  // emitter
  py::class_<mte::PtmParams>(m, "PtmParams")
      .def(py::init(&mte::PtmParams::make), py::arg("p0"), py::arg("p1"), py::arg("ps"))
      .def_readonly("p0", &mte::PtmParams::p0)
      .def_readonly("p1", &mte::PtmParams::p1)
      .def_readonly("ps", &mte::PtmParams::ps);
  m.def("integer_prob_exact", &mte::integer_prob_exact, py::arg("params"), py::arg("n"));
  m.def(
      "prime_conditional_exact",
      [](const mte::PtmParams& params, std::uint64_t p_max) {
        const auto law = mte::prime_conditional_exact(params, p_max);
        return py::make_tuple(law.primes, law.masses);
      },
      py::arg("params"), py::arg("p_max"), "Returns (primes, masses).");
  m.def(
      "sample_prime_filtered",
      [](const mte::PtmParams& params, std::uint64_t count, std::uint64_t seed) {
        mte::Rng rng(seed);
        std::vector<mte::BigNat> out;
        for (std::uint64_t i = 0; i < count; ++i) out.push_back(mte::sample_prime_filtered(params, rng));
        return out;
      },
      py::arg("params"), py::arg("count"), py::arg("seed") = mte::kDefaultSeed);

  // chain
  m.def(
      "simulate",
      [](const mte::PrimePrior& prior, std::uint64_t steps, std::uint64_t seed, std::uint64_t thin) {
        mte::Rng rng(seed);
        const auto tr = mte::simulate(prior, steps, rng, thin);
        py::list rows;
        for (const auto& s : tr.steps) rows.append(py::make_tuple(s.t, s.prime, s.log2_x, s.len_x, s.sum_len_p));
        return py::make_tuple(rows, tr.final_state);
      },
      py::arg("prior"), py::arg("steps"), py::arg("seed") = mte::kDefaultSeed, py::arg("thin") = 100,
      "Returns ([(t, prime, log2_x, len_x, sum_len_p), ...], final state).");

  // tails
  m.def("conditional_gap_tail_exact", &mte::conditional_gap_tail_exact, py::arg("prior"), py::arg("x"), py::arg("u"));
  m.def("hill_estimator", [](const std::vector<double>& s, std::size_t k) { return mte::hill_estimator(s, k); },
        py::arg("samples"), py::arg("k"));
  m.def("dkw_epsilon", &mte::dkw_epsilon, py::arg("n"), py::arg("alpha"));

  // empirics
  m.def(
      "fit_sizes",
      [](const std::vector<std::uint64_t>& sizes, bool bits) {
        mte::IngestResult data{sizes, 0};
        return mte::fit_report_json(mte::fit_report(data, bits));
      },
      py::arg("sizes"), py::arg("bits") = false, "Fit report as a JSON string.");
  m.def("kl_divergence",
        [](const std::vector<double>& p, const std::vector<double>& q, bool bits) { return mte::kl_divergence(p, q, bits); },
        py::arg("p"), py::arg("q"), py::arg("bits") = false);
  m.def(
      "gibbs_alignment",
      [](const std::vector<std::pair<std::uint64_t, double>>& mu) {
        const auto g = mte::gibbs_alignment(mu);
        return py::make_tuple(g.alignment, g.entropy, g.mean_len);
      },
      py::arg("mu"), "Returns (alignment, entropy, mean codelength), all in bits.");

  m.def(
      "reproduce",
      [](const std::string& suite, std::uint64_t seed) {
        mte::ReproduceOptions opt;
        opt.seed = seed;
        py::gil_scoped_release release;
        return mte::reproduce(suite, opt).report_json;
      },
      py::arg("suite"), py::arg("seed") = mte::kDefaultSeed, "Report JSON of a reproduction suite.");
}
