// Command-line front end: single-instance queries, sweep CSVs, Monte Carlo
// runs, and equilibrium verification. JSON goes to stdout for single
// queries, CSV to files for sweeps. Exit codes: 0 success, 1 validation
// error, 2 runtime error.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "patrol/patrol.hpp"

namespace {

using nlohmann::json;

std::uint64_t default_seed() {
    if (const char* env = std::getenv("PATROL_SEED")) {
        try {
            return std::stoull(env);
        } catch (const std::exception&) {
            throw std::invalid_argument("PATROL_SEED is not a valid unsigned integer");
        }
    }
    return 42;
}

std::string optima_path(const std::string& out) {
    const std::size_t dot = out.find_last_of('.');
    const std::size_t slash = out.find_last_of("/\\");
    if (dot == std::string::npos || (slash != std::string::npos && dot < slash))
        return out + ".optima.csv";
    return out.substr(0, dot) + ".optima.csv";
}

json coupling_to_json(const patrol::CouplingReport& rep) {
    json entries = json::array();
    for (const auto& e : rep.entries)
        entries.push_back({{"s", e.s},
                           {"paths", e.paths},
                           {"violations", e.violations},
                           {"strict_count", e.strict_count},
                           {"q_s", e.q_s},
                           {"q_s1", e.q_s1}});
    return {{"passed", rep.passed}, {"entries", entries}};
}

json equilibrium_to_json(const patrol::EquilibriumReport& rep) {
    json j{{"n", rep.n},
           {"m", rep.m},
           {"p_hat", rep.p_hat},
           {"value", rep.value},
           {"d_star", rep.d_star},
           {"delay_ties", rep.delay_ties},
           {"delay_margin", rep.delay_margin},
           {"s_argmax", rep.s_argmax},
           {"p_argmax", rep.p_argmax},
           {"s_margin", rep.s_margin},
           {"s_flatness", rep.s_flatness},
           {"passed", rep.passed}};
    if (rep.m == 2) j["m2_smallest_optimal_s"] = rep.m2_smallest_optimal_s;
    return j;
}

int run_verification(const patrol::GameConfig& game, double p, std::int64_t trials,
                     std::uint64_t seed, json& out) {
    const patrol::EquilibriumReport eq = patrol::verify_equilibrium(game);
    const patrol::CouplingReport cp =
        patrol::coupling_check(game, p, {0.3, 0.6, 0.9}, trials, seed);
    out["equilibrium"] = equilibrium_to_json(eq);
    out["coupling"] = coupling_to_json(cp);
    out["passed"] = eq.passed && cp.passed;
    return eq.passed && cp.passed ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Star-network patrol game: exact values, optima, and simulation"};
    app.require_subcommand(1);

    int n = 0, m = 0, d = 2;
    double p = -1.0, s = 1.0;
    std::int64_t trials = 1'000'000;
    std::uint64_t seed = 0;
    bool seed_given = false;
    int p_steps = 500;
    std::vector<int> m_list;
    std::string out_path;
    bool verify_flag = false;
    int exit_code = 0;

    auto add_nm = [&](CLI::App* cmd) {
        cmd->add_option("--n", n, "number of end-node locations")->required();
        cmd->add_option("--m", m, "attack duration in periods")->required();
    };

    CLI::App* value = app.add_subcommand("value", "interception probability of one instance");
    add_nm(value);
    value->add_option("--p", p, "center->end probability (default: optimal)");
    value->add_option("--s", s, "end->center reflection probability");
    value->add_option("--d", d, "attacker delay in periods");
    value->callback([&] {
        patrol::GameConfig game(n, m);
        const double pp = value->count("--p") ? p : patrol::solve(game).p_hat;
        patrol::PatrollerStrategy strat(n, pp, s);
        const double q = patrol::interception_for_delay(game, strat, d);
        json j{{"n", n}, {"m", m}, {"p", pp}, {"s", s}, {"d", d}, {"Q", q}};
        std::cout << j.dump() << "\n";
    });

    CLI::App* solve_cmd = app.add_subcommand("solve", "optimal strategy and game value");
    add_nm(solve_cmd);
    solve_cmd->callback([&] {
        const patrol::SolveResult res = patrol::solve(patrol::GameConfig(n, m));
        json j{{"n", n},
               {"m", m},
               {"p_hat", res.p_hat},
               {"r_hat", res.r_hat},
               {"value", res.value},
               {"method", patrol::to_string(res.method)},
               {"iterations", res.diagnostics.iterations},
               {"bracket_width", res.diagnostics.bracket_width},
               {"residual_p", res.diagnostics.residual_p},
               {"residual_value", res.diagnostics.residual_value}};
        std::cout << j.dump() << "\n";
    });

    CLI::App* sweep = app.add_subcommand("sweep", "Q(p) curves and optima as CSV files");
    sweep->add_option("--n", n, "number of end-node locations")->required();
    sweep->add_option("--m", m_list, "attack durations (comma separated)")
        ->required()
        ->delimiter(',');
    sweep->add_option("--p-steps", p_steps, "grid points over (0, 1/n]");
    sweep->add_option("--out", out_path, "output CSV path")->required();
    sweep->callback([&] {
        const auto rows = patrol::sweep_rows(n, m_list, p_steps);
        const auto optima = patrol::optima_rows({n}, m_list);
        const std::string opt_path = optima_path(out_path);
        std::ofstream of(out_path, std::ios::binary);
        if (!of) throw std::runtime_error("cannot write " + out_path);
        patrol::write_sweep_csv(of, rows);
        of.close();
        if (!of) throw std::runtime_error("failed writing " + out_path);
        std::ofstream oo(opt_path, std::ios::binary);
        if (!oo) throw std::runtime_error("cannot write " + opt_path);
        patrol::write_optima_csv(oo, optima);
        oo.close();
        if (!oo) throw std::runtime_error("failed writing " + opt_path);
        json j{{"out", out_path},
               {"optima_out", opt_path},
               {"rows", rows.size()},
               {"optima_rows", optima.size()}};
        std::cout << j.dump() << "\n";
    });

    CLI::App* sim = app.add_subcommand("simulate", "Monte Carlo run against the exact value");
    add_nm(sim);
    sim->add_option("--p", p, "center->end probability (default: optimal)");
    sim->add_option("--s", s, "end->center reflection probability");
    sim->add_option("--d", d, "attacker delay in periods");
    sim->add_option("--trials", trials, "number of simulated games");
    sim->add_option("--seed", seed, "RNG seed (default 42, or PATROL_SEED)")
        ->each([&](const std::string&) { seed_given = true; });
    sim->add_flag("--verify", verify_flag,
                  "also run the equilibrium and coupling verifications");
    sim->callback([&] {
        patrol::GameConfig game(n, m);
        const double pp = sim->count("--p") ? p : patrol::solve(game).p_hat;
        patrol::PatrollerStrategy strat(n, pp, s);
        const std::uint64_t sd = seed_given ? seed : default_seed();
        patrol::SimConfig cfg(game, strat, patrol::AttackerStrategy(d));
        cfg.trials = trials;
        cfg.seed = sd;
        const patrol::SimResult res = patrol::run(cfg);
        const double exact = patrol::interception_for_delay(game, strat, d);
        const double diff = std::fabs(res.q_hat - exact);
        const double z = res.half_width_95 > 0.0
                             ? diff / res.half_width_95
                             : (diff == 0.0 ? 0.0 : std::numeric_limits<double>::max());
        json j{{"n", n},
               {"m", m},
               {"p", pp},
               {"s", s},
               {"d", d},
               {"trials", res.trials},
               {"seed", sd},
               {"intercepts", res.intercept_count},
               {"timeouts", res.timeouts},
               {"q_hat", res.q_hat},
               {"half_width_95", res.half_width_95},
               {"mean_attack_start_time", res.mean_attack_start_time},
               {"exact", exact},
               {"z_score", z}};
        if (verify_flag)
            exit_code = run_verification(game, pp, std::min<std::int64_t>(trials, 200'000),
                                         sd, j);
        std::cout << j.dump() << "\n";
    });

    CLI::App* uc = app.add_subcommand("uniform-cost",
                                      "observable vs unobservable patroller values");
    add_nm(uc);
    uc->callback([&] {
        const patrol::UniformCost res = patrol::uniform_cost(patrol::GameConfig(n, m));
        json j{{"n", n},
               {"m", m},
               {"V", res.value_uniformed},
               {"V_tilde", res.value_non_uniformed},
               {"ratio", res.ratio},
               {"relative_loss", res.relative_loss}};
        std::cout << j.dump() << "\n";
    });

    CLI::App* verify = app.add_subcommand("verify", "equilibrium and coupling checks");
    add_nm(verify);
    verify->add_option("--trials", trials, "coupled paths per reflection probability");
    verify->add_option("--seed", seed, "RNG seed (default 42, or PATROL_SEED)")
        ->each([&](const std::string&) { seed_given = true; });
    verify->callback([&] {
        patrol::GameConfig game(n, m);
        const double phat = patrol::solve(game).p_hat;
        json j{{"n", n}, {"m", m}, {"p_hat", phat}};
        exit_code = run_verification(game, phat, std::min<std::int64_t>(trials, 1'000'000),
                                     seed_given ? seed : default_seed(), j);
        std::cout << j.dump() << "\n";
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return exit_code;
}
