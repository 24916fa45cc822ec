#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "sacq/commands.hpp"

int main(int argc, char** argv) {
    using namespace sacq::cli;

    CLI::App app{"String-averaging CQ feasibility solver"};
    app.require_subcommand(1);

    GenerateOptions gen;
    std::string gen_out, gen_witness;
    auto* g = app.add_subcommand("generate", "Write a synthetic problem file");
    g->add_option("kind", gen.kind, "phantom | random-feasible")->required();
    g->add_option("--out", gen_out, "Problem file to write")->required();
    g->add_option("--witness", gen_witness, "Also write the feasible witness as a solution file");
    g->add_option("--seed", gen.seed, "Random seed");
    g->add_option("--grid", gen.grid, "Phantom grid size");
    g->add_option("--angles", gen.angles, "Phantom beam angles");
    g->add_option("--beamlets", gen.beamlets, "Beamlets per angle");
    g->add_option("--kernel-width", gen.kernel_width, "Lateral dose kernel sigma, in voxels");
    g->add_option("--n", gen.n, "Unknowns (random-feasible)");
    g->add_option("--rows", gen.rows, "Rows per block (random-feasible)");
    g->add_option("--blocks", gen.blocks, "Number of blocks (random-feasible)");
    g->add_option("--alpha", gen.alpha, "Allowed violation fraction");
    g->add_option("--beta", gen.beta, "Relative bound relaxation");
    g->add_flag("!--no-pvc", gen.pvc, "Omit percentage-violation constraints");
    g->add_option("--density", gen.density, "Fraction of nonzero coefficients");
    g->add_flag("--sparse", gen.sparse, "Store matrices as triplets");
    g->add_flag("--tight", gen.tight, "Put exactly K rows over their original bound at the witness");

    SolveOptions sol;
    std::string sol_problem, sol_config, sol_out;
    std::uint64_t sol_seed = 0;
    auto* s = app.add_subcommand("solve", "Run the solver");
    s->add_option("--problem", sol_problem, "Problem file")->required();
    s->add_option("--config", sol_config, "Config file");
    s->add_option("--out", sol_out, "Output directory")->required();
    auto* seed_opt = s->add_option("--seed", sol_seed, "Seed for random-dynamic plans");
    s->add_flag("--verbose,-v", sol.verbose, "Print progress");

    CheckOptions chk;
    std::string chk_problem, chk_solution;
    auto* c = app.add_subcommand("check", "Verify a solution against a problem");
    c->add_option("--problem", chk_problem, "Problem file")->required();
    c->add_option("--solution", chk_solution, "Solution file")->required();
    c->add_option("--tol", chk.tol, "Relative violation tolerance");

    ReportOptions rep;
    std::string rep_trace, rep_out, rep_problem, rep_solution;
    auto* r = app.add_subcommand("report", "Turn a trace into plot-ready tables");
    r->add_option("--trace", rep_trace, "Trace CSV from solve")->required();
    r->add_option("--out", rep_out, "Output directory")->required();
    r->add_option("--problem", rep_problem, "Problem file, for DVH tables");
    r->add_option("--solution", rep_solution, "Solution file, for DVH tables");
    r->add_option("--dvh-points", rep.dvh_points, "DVH threshold count");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitInvalid;
    }

    if (g->parsed()) {
        gen.out = gen_out;
        if (!gen_witness.empty()) gen.witness = gen_witness;
        return cmd_generate(gen, std::cout, std::cerr);
    }
    if (s->parsed()) {
        sol.problem = sol_problem;
        if (!sol_config.empty()) sol.config = sol_config;
        sol.out = sol_out;
        if (seed_opt->count() > 0) sol.seed = sol_seed;
        return cmd_solve(sol, std::cout, std::cerr);
    }
    if (c->parsed()) {
        chk.problem = chk_problem;
        chk.solution = chk_solution;
        return cmd_check(chk, std::cout, std::cerr);
    }
    rep.trace = rep_trace;
    rep.out = rep_out;
    if (!rep_problem.empty()) rep.problem = rep_problem;
    if (!rep_solution.empty()) rep.solution = rep_solution;
    return cmd_report(rep, std::cout, std::cerr);
}
