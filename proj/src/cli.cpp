#include "nelsonlab/cli.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <ostream>

#include "CLI11.hpp"

#include "nelsonlab/checks.hpp"
#include "nelsonlab/counterterm.hpp"
#include "nelsonlab/jsonio.hpp"
#include "nelsonlab/kernels.hpp"
#include "nelsonlab/nelson_bound.hpp"
#include "nelsonlab/partitions.hpp"
#include "nelsonlab/paths.hpp"
#include "nelsonlab/phi.hpp"
#include "nelsonlab/polaron_bound.hpp"
#include "nelsonlab/quadrature.hpp"
#include "nelsonlab/verify.hpp"

namespace nelsonlab {

namespace {

Json breakdown_json(const BoundBreakdown& bd) {
    return Json{{"term_cross", bd.term_cross},
                {"term_diag", bd.term_diag},
                {"term_cluster", bd.term_cluster},
                {"term_short_range", bd.term_short_range},
                {"total", bd.total}};
}

Json bound_params_json(const BoundParams& bp) {
    return Json{{"theta", bp.theta},
                {"phi", bp.phi_param},
                {"eps", bp.epsilon},
                {"p", bp.p}};
}

std::uint64_t default_seed() {
    if (const char* env = std::getenv("NELSON_LAB_SEED")) {
        char* end = nullptr;
        const unsigned long long v = std::strtoull(env, &end, 10);
        if (end && *end == '\0') return v;
    }
    return 1;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Explicit lower bounds for the renormalized Nelson model and the polaron, "
                 "with Monte Carlo cross-checks"};
    app.name("nelsonlab");
    app.require_subcommand(1);

    double tol = 1e-10;
    app.add_option("--tol", tol, "Quadrature tolerance threaded to all integrals")
        ->check(CLI::PositiveNumber);
    std::uint64_t seed = default_seed();
    app.add_option("--seed", seed, "Global random seed (default: NELSON_LAB_SEED or 1)");

    // constants
    auto* constants_cmd =
        app.add_subcommand("constants", "Norms of phi and the derived bound constants");
    double c_theta = 1.5, c_phi = 0.0, c_eps = 1.0;
    constants_cmd->add_option("--theta", c_theta, "theta in (1,2)");
    constants_cmd->add_option("--phi", c_phi, "phi in [0,1)");
    constants_cmd->add_option("--eps", c_eps, "epsilon > 0");

    // counterterm
    auto* counterterm_cmd = app.add_subcommand("counterterm", "Renormalization counterterm Q");
    double q_alpha = 1.0, q_mu = 0.0, q_lambda = 1.0;
    int q_n = 1;
    counterterm_cmd->add_option("--alpha", q_alpha, "coupling")->required();
    counterterm_cmd->add_option("--mu", q_mu, "meson mass");
    counterterm_cmd->add_option("--lambda", q_lambda, "UV cutoff")->required();
    counterterm_cmd->add_option("--n", q_n, "particle count");

    // bound
    auto* bound_cmd = app.add_subcommand("bound", "Four-term lower bound on E + Q");
    double b_alpha = 0.0;
    int b_n = 1;
    BoundParams b_params;
    bool b_p_given = false;
    bound_cmd->add_option("--alpha", b_alpha, "coupling")->required();
    bound_cmd->add_option("--n", b_n, "particle count")->required();
    bound_cmd->add_option("--theta", b_params.theta, "theta in (1,2)");
    bound_cmd->add_option("--phi", b_params.phi_param, "phi in [0,1)");
    bound_cmd->add_option("--eps", b_params.epsilon, "epsilon > 0");
    bound_cmd->add_option("--p", b_params.p, "Hoelder exponent p > 1")
        ->each([&](const std::string&) { b_p_given = true; });

    // optimize
    auto* optimize_cmd = app.add_subcommand("optimize", "Optimize the bound parameters");
    double o_alpha = 0.0;
    int o_n = 1;
    OptimizeConfig o_cfg;
    optimize_cmd->add_option("--alpha", o_alpha, "coupling")->required();
    optimize_cmd->add_option("--n", o_n, "particle count")->required();
    optimize_cmd->add_option("--starts", o_cfg.starts_per_axis, "multi-start grid per axis");
    optimize_cmd->add_option("--opt-tol", o_cfg.simplex_tol, "simplex convergence tolerance");

    // polaron
    auto* polaron_cmd = app.add_subcommand("polaron", "Polaron energy bounds");
    double p_alpha = 0.0;
    int p_n = 1;
    polaron_cmd->add_option("--alpha", p_alpha, "coupling")->required();
    polaron_cmd->add_option("--n", p_n, "electron count")->required();

    // simulate
    auto* simulate_cmd =
        app.add_subcommand("simulate", "Feynman-Kac Monte Carlo over Brownian ensembles");
    std::string s_model = "nelson";
    ModelParams s_params;
    SimConfig s_cfg;
    s_cfg.t_final = 4.0;
    s_cfg.n_paths = 1000;
    std::string s_check, s_csv;
    simulate_cmd->add_option("--model", s_model, "nelson | polaron")
        ->check(CLI::IsMember({"nelson", "polaron"}));
    simulate_cmd->add_option("--alpha", s_params.alpha, "coupling")->required();
    simulate_cmd->add_option("--mu", s_params.mu, "meson mass");
    simulate_cmd->add_option("--lambda", s_params.lambda_uv, "UV cutoff")->required();
    simulate_cmd->add_option("--n", s_params.n, "particle count");
    simulate_cmd->add_option("--t", s_cfg.t_final, "time horizon T");
    simulate_cmd->add_option("--dt", s_cfg.dt, "time step");
    simulate_cmd->add_option("--paths", s_cfg.n_paths, "number of paths");
    simulate_cmd->add_option("--threads", s_cfg.n_threads, "worker threads (0 = auto)");
    simulate_cmd
        ->add_option("--check", s_check,
                     "expectation | energy | clark-ocone | supermartingale")
        ->check(CLI::IsMember({"expectation", "energy", "clark-ocone", "supermartingale"}));
    double s_p = 2.0;
    simulate_cmd->add_option("--p", s_p, "Hoelder exponent for --check supermartingale");
    simulate_cmd->add_option("--dump-csv", s_csv, "write per-path samples as CSV");

    // partition
    auto* partition_cmd =
        app.add_subcommand("partition", "Admissible pair partitions from Latin squares");
    int part_n = 2;
    bool part_verify_min = false;
    int holder_trials = 0;
    partition_cmd->add_option("--n", part_n, "particle count")->required();
    partition_cmd->add_flag("--verify-min", part_verify_min,
                            "exhaustively verify minimality (n <= 4)");
    partition_cmd->add_option("--holder-trials", holder_trials,
                              "run the exact Hoelder product check with this many trials");

    // verify
    auto* verify_cmd = app.add_subcommand("verify", "Run the full verification suite");

    std::vector<const char*> argv;
    argv.reserve(args.size() + 1);
    argv.push_back("nelsonlab");
    for (const auto& a : args) argv.push_back(a.c_str());

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "usage error: " << e.what() << "\n\n" << app.help();
        return 2;
    }

    Json report{{"schema_version", 1}};
    try {
        if (constants_cmd->parsed()) {
            const PhiNormTable& norms = phi_norms();
            Json weighted;
            for (double a : {-1.0, -0.5, 0.0, 0.5, 0.75, 1.0})
                weighted[std::to_string(a)] = phi_weighted_sup(a);
            const DerivedConstants dc = derived_constants(c_theta, c_phi, c_eps);
            report["phi_norms"] = Json{{"sup_norm", norms.sup_norm},
                                       {"one_norm_over_x", norms.one_norm_over_x},
                                       {"weighted_sup", weighted}};
            report["params"] = Json{{"theta", c_theta}, {"phi", c_phi}, {"eps", c_eps}};
            report["constants"] = Json{{"a_theta", dc.a_theta},
                                       {"b_theta", dc.b_theta},
                                       {"c_const", dc.c_const},
                                       {"d_eps", dc.d_eps},
                                       {"f_theta", dc.f_theta}};
        } else if (counterterm_cmd->parsed()) {
            ModelParams model{q_alpha, q_mu, q_lambda, q_n};
            const double q = q_counterterm(model, tol);
            const double asym = q_log_asymptote(model);
            report["params"] = Json{{"alpha", q_alpha}, {"mu", q_mu}, {"lambda", q_lambda},
                                    {"n", q_n},         {"tol", tol}};
            report["q"] = q;
            report["log_asymptote"] = asym;
            report["ratio"] = asym != 0.0 ? q / asym : 1.0;
        } else if (bound_cmd->parsed()) {
            ModelParams model{b_alpha, 0.0, 1.0, b_n};
            const BoundBreakdown bd = evaluate_bound(model, b_params);
            report["params"] = bound_params_json(b_params);
            report["params"]["alpha"] = b_alpha;
            report["params"]["n"] = b_n;
            report["params"]["p_is_default"] = !b_p_given;
            report.update(breakdown_json(bd));
        } else if (optimize_cmd->parsed()) {
            ModelParams model{o_alpha, 0.0, 1.0, o_n};
            const OptimizeResult res = optimize_bound(model, o_cfg);
            report["params"] = Json{{"alpha", o_alpha},
                                    {"n", o_n},
                                    {"starts", o_cfg.starts_per_axis},
                                    {"opt_tol", o_cfg.simplex_tol}};
            report["best_params"] = bound_params_json(res.best);
            report["breakdown"] = breakdown_json(res.breakdown);
            report["converged"] = res.converged;
            report["evaluations"] = res.evaluations;
        } else if (polaron_cmd->parsed()) {
            const PolaronBounds pb = polaron_bounds(p_alpha, p_n);
            report["params"] = Json{{"alpha", p_alpha}, {"n", p_n}};
            report["bounds"] = Json{{"lower_cutoff", pb.lower_cutoff},
                                    {"lower_no_cutoff", pb.lower_no_cutoff},
                                    {"pekar_upper", pb.pekar_upper},
                                    {"expectation_rate", pb.expectation_rate}};
            report["alpha2_coefficient"] = pb.alpha2_coefficient;
            report["alpha2_coefficient_rounded"] = pb.alpha2_coefficient_rounded;
            report["metadata"] =
                Json{{"holder_exponent_p", 2.0},
                     {"note", "the quadratic coefficient of lower_cutoff could be halved by "
                              "taking the Hoelder exponent toward 1; the reported bound keeps "
                              "the displayed p = 2 form"}};
        } else if (simulate_cmd->parsed()) {
            s_cfg.seed = seed;
            const ModelKind kind =
                s_model == "nelson" ? ModelKind::Nelson : ModelKind::Polaron;
            validate(s_params);
            const PathEnsemble paths = sample_paths(s_cfg, s_params.n);
            const ActionStats stats = compute_action(paths, s_params, s_cfg, kind);
            report["config"] = Json{{"model", s_model},
                                    {"alpha", s_params.alpha},
                                    {"mu", s_params.mu},
                                    {"lambda", s_params.lambda_uv},
                                    {"n", s_params.n},
                                    {"t", s_cfg.t_final},
                                    {"dt", s_cfg.dt},
                                    {"paths", s_cfg.n_paths},
                                    {"seed", s_cfg.seed}};
            report["stats"] = Json{{"mean", stats.mean},
                                   {"variance", stats.variance},
                                   {"log_mean_exp", stats.log_mean_exp},
                                   {"mean_per_t", stats.mean / s_cfg.t_final}};
            if (s_check == "expectation") {
                const ExpectationReport rep = expectation_check(stats, s_params, s_cfg, kind);
                report["check"] = Json{{"type", "expectation"},
                                       {"mean_per_t", rep.mean_per_t},
                                       {"reference_rate", rep.reference_rate},
                                       {"ratio", rep.ratio},
                                       {"mc_se", rep.mc_se},
                                       {"pass", rep.pass}};
            } else if (s_check == "energy") {
                const EnergyReport rep = energy_estimate(stats, s_params, s_cfg, kind);
                report["check"] = Json{{"type", "energy"},
                                       {"fk_rate", rep.fk_rate},
                                       {"bootstrap_se", rep.bootstrap_se},
                                       {"reference", rep.reference},
                                       {"bound_magnitude", rep.bound_magnitude},
                                       {"dominance", rep.dominance},
                                       {"heavy_tail_warning", rep.heavy_tail_warning}};
            } else if (s_check == "clark-ocone") {
                if (kind != ModelKind::Nelson)
                    throw std::domain_error("clark-ocone check applies to the nelson model");
                const ClarkOconeSample coarse = clark_ocone_rho(paths, s_params, s_cfg);
                SimConfig fine_cfg = s_cfg;
                fine_cfg.dt = 0.5 * s_cfg.dt;
                const PathEnsemble fine_paths = sample_paths(fine_cfg, s_params.n);
                const ClarkOconeSample fine = clark_ocone_rho(fine_paths, s_params, fine_cfg);
                auto variance = [](const std::vector<double>& v) {
                    double mean = 0.0;
                    for (double x : v) mean += x;
                    mean /= v.size();
                    double acc = 0.0;
                    for (double x : v) acc += (x - mean) * (x - mean);
                    return v.size() > 1 ? acc / (v.size() - 1) : 0.0;
                };
                const double var_c = variance(coarse.residuals);
                const double var_f = variance(fine.residuals);
                report["check"] = Json{{"type", "clark-ocone"},
                                       {"residual_variance", var_c},
                                       {"residual_variance_half_dt", var_f},
                                       {"variance_ratio", var_f > 0 ? var_c / var_f : 0.0},
                                       {"e_a_t_reference", coarse.e_a_t_reference},
                                       {"pass", var_f > 0 && var_c / var_f >= 2.0}};
            } else if (s_check == "supermartingale") {
                if (kind != ModelKind::Nelson)
                    throw std::domain_error("supermartingale check applies to the nelson model");
                SimConfig rho_cfg = s_cfg;
                rho_cfg.seed = s_cfg.seed + 1;  // independent fresh ensemble for the rho side
                const PathEnsemble rho_paths = sample_paths(rho_cfg, s_params.n);
                const ClarkOconeSample rho = clark_ocone_rho(rho_paths, s_params, rho_cfg);
                const SupermartingaleReport rep = supermartingale_check(stats, rho, s_p);
                report["check"] = Json{{"type", "supermartingale"}, {"p", rep.p},
                                       {"lhs", rep.lhs},           {"rhs", rep.rhs},
                                       {"lhs_se", rep.lhs_se},     {"rhs_se", rep.rhs_se},
                                       {"pass", rep.pass}};
            }
            if (!s_csv.empty()) {
                std::ofstream csv(s_csv);
                if (!csv) throw std::runtime_error("cannot open CSV output file: " + s_csv);
                csv << "path_index,a_t\n";
                char buf[40];
                for (std::size_t i = 0; i < stats.samples.size(); ++i) {
                    std::snprintf(buf, sizeof(buf), "%.17g", stats.samples[i]);
                    csv << i << "," << buf << "\n";
                }
                report["csv"] = s_csv;
            }
        } else if (partition_cmd->parsed()) {
            const PairPartition part = partition_from_square(cyclic_latin_square(part_n));
            Json blocks = Json::array();
            for (const auto& block : part.blocks) {
                Json jb = Json::array();
                for (const auto& [i, j] : block) jb.push_back(Json::array({i, j}));
                blocks.push_back(jb);
            }
            report["n"] = part_n;
            report["blocks"] = blocks;
            report["admissible"] = is_admissible(part);
            if (part_verify_min) report["min_size"] = min_admissible_size(part_n);
            if (holder_trials > 0) {
                const HolderCheckReport h = holder_inequality_check(
                    part_n, holder_trials, seed);
                report["holder"] = Json{{"trials", h.trials},
                                        {"max_ratio", h.max_ratio},
                                        {"pass", h.pass}};
            }
        } else if (verify_cmd->parsed()) {
            const auto criteria = run_acceptance_criteria(&err);
            Json jc = Json::array();
            bool all_pass = true;
            for (const auto& c : criteria) {
                all_pass = all_pass && c.pass;
                jc.push_back(Json{{"id", c.id},
                                  {"name", c.name},
                                  {"pass", c.pass},
                                  {"details", c.details}});
            }
            report["criteria"] = jc;
            report["all_pass"] = all_pass;
            write_json(out, report);
            return all_pass ? 0 : 1;
        }
    } catch (const ToleranceNotReached& e) {
        Json error{{"schema_version", 1},
                   {"error", Json{{"type", "tolerance_not_reached"},
                                  {"message", e.what()},
                                  {"best_value", e.best_estimate.value},
                                  {"abs_error_estimate", e.best_estimate.abs_error_estimate}}}};
        write_json(out, error);
        return 1;
    } catch (const std::domain_error& e) {
        Json error{{"schema_version", 1},
                   {"error", Json{{"type", "domain_error"}, {"message", e.what()}}}};
        write_json(out, error);
        return 1;
    } catch (const std::exception& e) {
        Json error{{"schema_version", 1},
                   {"error", Json{{"type", "runtime_error"}, {"message", e.what()}}}};
        write_json(out, error);
        return 1;
    }

    write_json(out, report);
    return 0;
}

}  // namespace nelsonlab
