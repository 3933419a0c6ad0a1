// Pre-build oracle runner: computes every constant the CI suite asserts
// (exact minima, empirical bound constants, observed coverage at the frozen
// seeds) and writes configs/frozen_thresholds.json. Run once from the repo
// root when a config, seed, or the PRF version changes.

#include <cstdio>
#include <iostream>

#include "randapprox/config.hpp"
#include "randapprox/csv.hpp"
#include "randapprox/stats.hpp"

using namespace randapprox;

namespace {

std::string dbl(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace

int main(int argc, char** argv) {
    const std::string root = argc > 1 ? argv[1] : ".";
    const ExperimentConfig div = config_from_json(load_json_file(root + "/configs/divergent.json"));
    const ExperimentConfig conv = config_from_json(load_json_file(root + "/configs/convergent.json"));
    const ExperimentConfig varsub = config_from_json(load_json_file(root + "/configs/varsub.json"));

    Json out;
    out["oracle_run"] = {{"id", "prebuild-2026-08-08"}, {"tool_version", kToolVersion}, {"prf_version", kPrfVersion}};

    {
        const Arc j = Arc::half(Rat(0), Rat(1, 4));
        const LemmaSReport r = verify_lemma_s(100, 10000, Rat(1, 2), j);
        out["lemma_s"] = {{"arc", Json::array({"0", "1/4"})},
                          {"epsilon", "1/2"},
                          {"n_lo", "100"},
                          {"n_hi", "10000"},
                          {"min_ratio", rat_to_string(r.min_ratio)},
                          {"min_ratio_dec", rat_to_decimal(r.min_ratio)},
                          {"argmin_n", std::to_string(r.argmin_n)},
                          {"first_positive_n", std::to_string(r.first_positive_n)}};
        std::cout << "lemma_s min ratio " << rat_to_decimal(r.min_ratio) << " at n=" << r.argmin_n << "\n";
    }

    {
        const QiaSeries series = qia_experiment(div);
        out["qia"] = {{"seed", std::to_string(div.seed)},
                      {"min_ratio_over_lambda", rat_to_string(*series.min_ratio_over_lambda)},
                      {"min_ratio_over_lambda_dec", rat_to_decimal(*series.min_ratio_over_lambda)},
                      {"t_reached", std::to_string(series.checkpoints.size())},
                      {"n_top", std::to_string(series.checkpoints.back())}};
        std::cout << "qia min ratio/lambda " << rat_to_decimal(*series.min_ratio_over_lambda) << " over t="
                  << series.checkpoints.size() << " checkpoints (N_T=" << series.checkpoints.back() << ")\n";
    }

    {
        ExperimentConfig det = div;
        det.p = ProbSpec::constant(Rat(1));
        det.psi = PsiSpec::constant(Rat(1, 4));
        det.epsilon = Rat(1);
        det.t_max = 8;
        const QiaSeries series = qia_experiment(det);
        out["qia_deterministic"] = {{"min_ratio_over_lambda", rat_to_string(*series.min_ratio_over_lambda)},
                                    {"min_ratio_over_lambda_dec", rat_to_decimal(*series.min_ratio_over_lambda)},
                                    {"t_reached", std::to_string(series.checkpoints.size())},
                                    {"n_top", std::to_string(series.checkpoints.back())}};
        std::cout << "qia deterministic min ratio/lambda " << rat_to_decimal(*series.min_ratio_over_lambda)
                  << "\n";
    }

    {
        std::vector<std::uint64_t> grid;
        for (std::uint64_t n = 100; n <= 2000; n += 100) grid.push_back(n);
        const OverlapBoundReport r = verify_overlap_bound(grid, div.psi, div.p, div.epsilon);
        out["overlap_bound"] = {{"n_grid_lo", "100"},
                                {"n_grid_hi", "2000"},
                                {"n_grid_step", "100"},
                                {"max_c", rat_to_string(r.max_ratio)},
                                {"max_c_dec", rat_to_decimal(r.max_ratio)},
                                {"observed_slope", dbl(r.log_slope)},
                                {"slope_max", "0.01"}};
        std::cout << "overlap bound max C " << rat_to_decimal(r.max_ratio) << " slope " << r.log_slope << "\n";
    }

    {
        const VarSubaddReport r = verify_var_subadditivity(varsub.psi, varsub.p, varsub.epsilon, varsub.window_hi,
                                                           varsub.partition, varsub.trials, varsub.seed);
        out["var_subadd"] = {{"tau", "1/10"},
                             {"observed_ratio", dbl(r.ratio)},
                             {"lhs_var", rat_to_string(r.lhs_var)},
                             {"rhs_sum_var", rat_to_string(r.rhs_sum_var)}};
        std::cout << "var subadd ratio " << r.ratio << "\n";
    }

    {
        const VartwoReport r = verify_vartwo_bound(varsub.psi, varsub.p, varsub.epsilon, varsub.window_hi,
                                                   varsub.partition, varsub.trials, varsub.seed);
        out["vartwo"] = {{"max_c_allowed", dbl(r.max_c)}, {"observed_max_c", dbl(r.max_c)}};
        std::cout << "vartwo max C " << r.max_c << "\n";
    }

    {
        const DichotomyReport r = dichotomy_experiment(conv, div);
        out["coverage"] = {{"divergent_min", "19/20"},
                           {"convergent_max", "1/10"},
                           {"tail_max", "3/100"},
                           {"observed_divergent", dbl(r.div_coverage)},
                           {"observed_convergent", dbl(r.conv_coverage)},
                           {"observed_tail", rat_to_string(r.conv_tail_bound)},
                           {"observed_tail_dec", rat_to_decimal(r.conv_tail_bound)}};
        std::cout << "dichotomy div " << r.div_coverage << " conv " << r.conv_coverage << " tail "
                  << rat_to_decimal(r.conv_tail_bound) << "\n";
    }

    write_text_file(root + "/configs/frozen_thresholds.json", canonical_dump(out));
    std::cout << "wrote " << root << "/configs/frozen_thresholds.json\n";
    return 0;
}
