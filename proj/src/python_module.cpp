#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "randapprox/approxsets.hpp"
#include "randapprox/cli.hpp"
#include "randapprox/intervals.hpp"
#include "randapprox/config.hpp"
#include "randapprox/experiments.hpp"
#include "randapprox/randmodel.hpp"
#include "randapprox/stats.hpp"

namespace py = pybind11;
using namespace randapprox;

namespace {

// Exact rationals cross the boundary as "num/den" strings; Python callers
// can hand them to fractions.Fraction unchanged.
std::string rat_str(const Rat& r) { return rat_to_string(r); }

PsiSpec make_psi(const std::string& family, const std::vector<std::string>& params, bool clamp_quarter) {
    PsiSpec spec;
    spec.family = psi_family_from_name(family);
    for (const auto& s : params) spec.params.push_back(parse_rational(s));
    spec.clamp_quarter = clamp_quarter;
    spec.validate();
    return spec;
}

ProbSpec make_prob(const std::string& family, const std::vector<std::string>& params) {
    ProbSpec spec;
    spec.family = prob_family_from_name(family);
    for (const auto& s : params) spec.params.push_back(parse_rational(s));
    spec.validate();
    return spec;
}

NumeratorSet make_explicit(std::uint64_t n, std::vector<std::uint64_t> members) {
    NumeratorSet set;
    set.n = n;
    set.kind = SetKind::Explicit;
    set.members = std::move(members);
    return set;
}

ExperimentConfig config_from_string(const std::string& text) { return config_from_json(Json::parse(text)); }

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Exact measures and seeded experiments for rational approximation with randomly "
              "restricted numerators";
    m.attr("__version__") = kToolVersion;
    m.attr("prf_version") = kPrfVersion;

    py::register_exception<ConfigError>(m, "ConfigError");
    py::register_exception<InputError>(m, "InputError");
    py::register_exception<ResourceError>(m, "ResourceError");

    py::class_<PsiSpec>(m, "PsiSpec");
    py::class_<ProbSpec>(m, "ProbSpec");
    m.def("psi_spec", &make_psi, py::arg("family"), py::arg("params"), py::arg("clamp_quarter") = false,
          "Approximation-speed family; params are exact rational strings");
    m.def("prob_spec", &make_prob, py::arg("family"), py::arg("params"),
          "Selection-probability family; params are exact rational strings");

    m.def("eval_psi", [](const PsiSpec& spec, std::uint64_t n) { return rat_str(eval_psi(spec, n).to_rat()); });
    m.def("eval_p", [](const ProbSpec& spec, std::uint64_t n) {
        const ProbValue v = eval_p(spec, n);
        return py::make_tuple(rat_str(v.value), v.threshold.to_string());
    });
    m.def("partial_sum",
          [](const PsiSpec& psi, const ProbSpec& p, std::uint64_t n) { return rat_str(partial_sum(psi, p, n)); });
    m.def("sparse_sequence", &sparse_sequence, py::arg("psi"), py::arg("p"), py::arg("t_max"), py::arg("n_cap"));

    m.def("s_set", [](std::uint64_t n, const std::string& eps) { return s_set(n, parse_rational(eps)).members; });
    m.def("s_count_in_arc",
          [](std::uint64_t n, const std::string& eps, const std::string& lo, const std::string& hi) {
              return s_count_in_arc(n, parse_rational(eps), Arc::half(parse_rational(lo), parse_rational(hi)));
          });
    m.def("phi_divisor_sum", [](std::uint64_t n, double threshold) {
        return phi_divisor_sum(n, static_cast<long double>(threshold));
    });

    py::class_<MembershipOracle>(m, "MembershipOracle")
        .def(py::init([](std::uint64_t seed, const ProbSpec& p, const std::string& eps, std::uint64_t n_max) {
                 return MembershipOracle(seed, p, parse_rational(eps), n_max);
             }),
             py::arg("seed"), py::arg("p"), py::arg("eps"), py::arg("n_max"))
        .def("member", &MembershipOracle::member)
        .def("sample_p", [](const MembershipOracle& o, std::uint64_t n) { return o.sample_p(n).members; })
        .def("sample_q", [](const MembershipOracle& o, std::uint64_t n) { return o.sample_q(n).members; });

    m.def("approx_set_measure", [](std::uint64_t n, std::vector<std::uint64_t> members, const std::string& psi) {
        const Rat v = parse_rational(psi);
        const Int units = (rat_num(v) << 64) / rat_den(v);
        return rat_str(build_e(make_explicit(n, std::move(members)), Dyadic64{units.convert_to<std::uint64_t>()})
                           .arcs.measure());
    });
    m.def("approx_set_arcs", [](std::uint64_t n, std::vector<std::uint64_t> members, const std::string& psi) {
        const Rat v = parse_rational(psi);
        const Int units = (rat_num(v) << 64) / rat_den(v);
        return to_json_array(
            build_e(make_explicit(n, std::move(members)), Dyadic64{units.convert_to<std::uint64_t>()}).arcs);
    });
    m.def("expected_measure_q", [](std::uint64_t n, const PsiSpec& psi, const ProbSpec& p, const std::string& eps,
                                   const std::string& lo, const std::string& hi) {
        return rat_str(
            expected_measure_q(n, psi, p, parse_rational(eps), Arc::half(parse_rational(lo), parse_rational(hi))));
    });
    m.def("expected_overlap_q",
          [](std::uint64_t m_, std::uint64_t n, const PsiSpec& psi, const ProbSpec& p, const std::string& eps) {
              return rat_str(expected_overlap_q(m_, n, psi, p, parse_rational(eps)));
          });

    m.def("qia_experiment", [](const std::string& config_json) {
        const QiaSeries series = qia_experiment(config_from_string(config_json));
        py::dict out;
        out["checkpoints"] = series.checkpoints;
        out["truncated"] = series.truncated;
        out["min_ratio_over_lambda"] = series.min_ratio_over_lambda
                                           ? py::object(py::str(rat_str(*series.min_ratio_over_lambda)))
                                           : py::object(py::none());
        py::list points;
        for (const QiaPoint& pt : series.points) {
            py::dict row;
            row["t"] = pt.t;
            row["n_t"] = pt.n_t;
            row["arc"] = pt.arc;
            row["numerator"] = rat_str(pt.numerator_sum);
            row["denominator"] = rat_str(pt.denominator_sum);
            if (pt.ratio) row["ratio"] = rat_str(*pt.ratio);
            points.append(row);
        }
        out["points"] = points;
        return out;
    });

    m.def("window_coverage", [](const std::string& config_json, const std::string& mode, const std::string& method) {
        const CoverageResult res =
            window_coverage(config_from_string(config_json), mode == "Q" ? HitMode::Q : HitMode::P,
                            method == "exact" ? CoverageMethod::Exact : CoverageMethod::Grid);
        py::dict out;
        out["fraction"] = res.fraction;
        out["grid"] = res.grid;
        out["hits"] = res.hits;
        if (res.exact_measure) out["exact_measure"] = rat_str(*res.exact_measure);
        return out;
    });

    m.def("run_cli", &cli_main, "Drive the command-line interface; returns the exit status");
    m.def("set_worker_threads", &set_worker_threads);
}
