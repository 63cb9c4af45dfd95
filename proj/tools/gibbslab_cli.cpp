#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "gibbslab/commands.hpp"

using namespace gibbslab;

namespace {

struct GridFlags {
    std::vector<double> values;
    double from = 0.0, to = 0.0, step = 0.0;
    bool ranged() const { return step > 0.0; }
};

void add_common(CLI::App* sub, CommandOptions& o) {
    sub->add_option("--model", o.model_path, "model JSON file");
    sub->add_option("--builtin", o.builtin, "bernoulli | ising | golden-mean");
    sub->add_option("--out", o.out_dir, "output directory (stdout when absent)");
    sub->add_option("--seed", o.seed, "64-bit seed");
    sub->add_option("--nmax", o.n_max, "Gibbs scan depth")->check(CLI::Range(1, 64));
    sub->add_option("--tol", o.tol, "verification tolerance");
    sub->add_option("--format", o.format, "json | csv (reports default to json, curves and ldp to csv)")->check(CLI::IsMember({"json", "csv"}));
    sub->add_option("--p", o.params.p, "bernoulli: probability of symbol 1");
    sub->add_option("--beta", o.params.beta, "ising: coupling");
    sub->add_option("--field", o.params.field, "ising: external field");
    sub->add_option("--a", o.params.a, "golden-mean: weight on symbol 1");
    sub->add_option("--alpha", o.params.alpha, "metric parameter for builtins");
}

void add_grid(CLI::App* sub, GridFlags& g, const std::string& var) {
    sub->add_option("--grid", g.values, "explicit " + var + " values")->delimiter(',');
    sub->add_option("--from", g.from, "first " + var);
    sub->add_option("--to", g.to, "last " + var);
    sub->add_option("--step", g.step, var + " spacing");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Gibbs measures of finite-memory potentials on mixing subshifts of finite type"};
    app.require_subcommand(1);
    CommandOptions o;
    GridFlags grid;

    auto* analyze = app.add_subcommand("analyze", "eigendata, pressure, gap, cone constants, Gibbs scan");
    add_common(analyze, o);
    analyze->add_option("--trace-blocks", o.trace_blocks, "cone trace length (with --out)");

    auto* verify = app.add_subcommand("verify", "check the five characterizations");
    add_common(verify, o);
    verify->add_option("--candidate-measure", o.candidate_measure_path, "JSON {block_length, pi, q} for the variational check");
    verify->add_option("--candidate-nu", o.candidate_nu, "replacement eigenmeasure for the residual check")->delimiter(',');

    auto* pcurve = app.add_subcommand("pressure-curve", "s, Lambda(s), Lambda'(s) over a grid");
    add_common(pcurve, o);
    add_grid(pcurve, grid, "s");

    auto* rcurve = app.add_subcommand("rate-curve", "t, I(t), s* over a grid");
    add_common(rcurve, o);
    add_grid(rcurve, grid, "t");

    auto* clt = app.add_subcommand("clt", "exact Birkhoff laws with CLT and local-limit diagnostics");
    add_common(clt, o);
    clt->add_option("--n-list", o.n_list, "Birkhoff lengths")->delimiter(',')->required();

    auto* ldp = app.add_subcommand("ldp", "exact -(1/n) log P(S_n/n in [a, b]) against the rate function");
    add_common(ldp, o);
    ldp->add_option("--n-list", o.n_list, "Birkhoff lengths")->delimiter(',')->required();
    ldp->add_option("--lo", o.a, "interval start")->required();
    ldp->add_option("--hi", o.b, "interval end")->required();

    auto* sample = app.add_subcommand("sample", "seeded Monte Carlo paths and Birkhoff summary");
    add_common(sample, o);
    sample->add_option("--n", o.n, "path length")->check(CLI::PositiveNumber);
    sample->add_option("--trials", o.trials, "independent paths")->check(CLI::PositiveNumber);

    auto* examples = app.add_subcommand("examples", "list or write the built-in models");
    add_common(examples, o);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitValidation;
    }

    if (grid.ranged()) {
        try {
            const auto g = make_grid(grid.from, grid.to, grid.step);
            o.grid.insert(o.grid.end(), g.begin(), g.end());
        } catch (const std::exception& e) {
            std::cerr << "error: " << e.what() << "\n";
            return kExitValidation;
        }
    }
    o.grid.insert(o.grid.end(), grid.values.begin(), grid.values.end());

    const std::string name = app.get_subcommands().front()->get_name();
    return run_command(name, o, std::cout, std::cerr);
}
