// cfdim command-line front end; all real work happens in cfdim::run.
#include "cfdim/cli.hpp"
#include "cfdim/errors.hpp"
#include "criteria.hpp"

#include <CLI11.hpp>

#include <iostream>

namespace {

using cfdim::RunConfig;

// options land in cfg.params verbatim; parsing/validation is done by run()
void param(CLI::App* app, RunConfig& cfg, const std::string& name, const std::string& help) {
    std::string key = name;
    for (auto& ch : key)
        if (ch == '-') ch = '_';
    app->add_option_function<std::string>(
        "--" + name, [&cfg, key](const std::string& v) { cfg.params[key] = v; }, help);
}

void flag(CLI::App* app, RunConfig& cfg, const std::string& name, const std::string& help) {
    std::string key = name;
    for (auto& ch : key)
        if (ch == '-') ch = '_';
    app->add_flag_callback("--" + name, [&cfg, key] { cfg.params[key] = "true"; }, help);
}

CLI::App* command(CLI::App& parent, RunConfig& cfg, const std::string& name, const std::string& canonical,
                  const std::string& help) {
    auto* sub = parent.add_subcommand(name, help);
    sub->callback([&cfg, canonical] { cfg.command = canonical; });
    return sub;
}

void schedule_opts(CLI::App* a, RunConfig& cfg) {
    param(a, cfg, "indices", "scheduled positions n_1<n_2<..., comma separated (n_1 must be 1)");
    param(a, cfg, "B", "base B > 1 (rational)");
    param(a, cfg, "alpha", "alphabet bound alpha >= 2");
    param(a, cfg, "depth", "enumeration depth");
}

void gaps_opts(CLI::App* a, RunConfig& cfg) { schedule_opts(a, cfg); }

void measure_opts(CLI::App* a, RunConfig& cfg) {
    schedule_opts(a, cfg);
    param(a, cfg, "tol", "pressure tolerance (0 = machine resolution)");
    param(a, cfg, "eps", "Hoelder slack epsilon");
    param(a, cfg, "sB", "value of s_B used for t = s_B - eps (default: extrapolated)");
    param(a, cfg, "k0", "k_0 for the constant c_I");
    flag(a, cfg, "exact", "certified summation");
}

void classify_opts(CLI::App* a, RunConfig& cfg) {
    param(a, cfg, "family", "power | exp | dexp | table | expr | expr-loglog");
    param(a, cfg, "p", "power family exponent");
    param(a, cfg, "B0", "exp family base");
    param(a, cfg, "b0", "dexp family b");
    param(a, cfg, "c0", "dexp family c");
    param(a, cfg, "table", "CSV file of n,phi(n) rows");
    param(a, cfg, "log-phi", "expression in n for log phi(n)");
    param(a, cfg, "log-log-phi", "expression in n for log log phi(n)");
    param(a, cfg, "horizon", "sample horizon for expressions");
    param(a, cfg, "alpha", "alphabet bound for pressure evaluation");
    param(a, cfg, "depths", "pressure depths");
    param(a, cfg, "tol", "pressure tolerance");
    flag(a, cfg, "exact", "certified summation");
}

} // namespace

int main(int argc, char** argv) {
    RunConfig cfg;
    std::string config_file;
    CLI::App app{"cfdim: continued-fraction decompositions, pressure and dimension estimates"};
    app.require_subcommand(1);
    app.fallthrough();  // global options may follow the subcommand
    app.add_option("--config", config_file, "key=value file; command-line values take precedence");
    app.add_option("--out", cfg.out_path, "write the artifact (JSON, or CSV for gaps) here");
    app.add_option("--threads", cfg.threads, "worker threads")->check(CLI::PositiveNumber);
    app.add_option("--budget", cfg.budget, "leaf/word budget")->check(CLI::PositiveNumber);
    app.add_option("--cache", cfg.cache_path, "pressure cache CSV (default: $CFDIM_CACHE)");

    auto* dec = command(app, cfg, "decompose", "decompose", "greedy sum/product decomposition of x");
    param(dec, cfg, "x", "rational x >= 1 (p/q or decimal)");
    param(dec, cfg, "op", "sum | product");
    param(dec, cfg, "k-max", "maximum number of steps");

    auto* pr = command(app, cfg, "pressure", "pressure", "solve f_{n,B}(s) = 1, or evaluate f at --rho");
    param(pr, cfg, "B", "base B > 1");
    param(pr, cfg, "n", "depth n >= 1");
    param(pr, cfg, "alpha", "alphabet {1..alpha}");
    param(pr, cfg, "alphabet", "explicit alphabet, comma separated");
    param(pr, cfg, "tol", "bisection tolerance");
    param(pr, cfg, "rho", "evaluate the partition sum at this rho instead of solving");
    param(pr, cfg, "bits", "starting precision for exact enclosures");
    flag(pr, cfg, "exact", "certified summation (rho must be dyadic)");
    flag(pr, cfg, "no-cache", "ignore the cache");

    auto* geo = app.add_subcommand("geometry", "fundamental intervals, gaps and the measure");
    geo->require_subcommand(1)->fallthrough();
    gaps_opts(command(*geo, cfg, "gaps", "geometry-gaps", "gap table for D_1..D_depth"), cfg);
    measure_opts(command(*geo, cfg, "measure-check", "measure-check", "measure consistency and Hoelder scan"), cfg);
    gaps_opts(command(app, cfg, "geometry-gaps", "geometry-gaps", "alias of `geometry gaps`"), cfg);
    measure_opts(command(app, cfg, "measure-check", "measure-check", "alias of `geometry measure-check`"), cfg);

    auto* dim = app.add_subcommand("dimension", "dimension estimates");
    dim->require_subcommand(1)->fallthrough();
    classify_opts(command(*dim, cfg, "classify", "classify", "classify a growth function phi"), cfg);
    classify_opts(command(app, cfg, "classify", "classify", "alias of `dimension classify`"), cfg);
    auto* df = command(*dim, cfg, "dim-f", "dim-f", "estimate dim F(B, alpha)");
    param(df, cfg, "B", "base B > 1");
    param(df, cfg, "alpha", "alphabet bound");
    param(df, cfg, "depths", "depths used for extrapolation");
    param(df, cfg, "tol", "pressure tolerance");
    flag(df, cfg, "exact", "certified summation");
    auto* eb = command(*dim, cfg, "ebc", "ebc", "nested-cover estimate of dim E(b, c)");
    param(eb, cfg, "b", "b > 1");
    param(eb, cfg, "c", "c > 1");
    param(eb, cfg, "k-max", "number of nesting levels");

    auto* lz = command(app, cfg, "luczak", "luczak", "count S(m, k) and compare with its bound");
    param(lz, cfg, "m", "m >= 1");
    param(lz, cfg, "k", "k >= 1");

    auto* nr = command(app, cfg, "nested-ratio", "nested-ratio", "ratios R_1..R_k for E(b, c)");
    param(nr, cfg, "b", "b > 1");
    param(nr, cfg, "c", "c > 1");
    param(nr, cfg, "k", "last level");

    command(app, cfg, "verify-suite", "verify-suite", "run the acceptance criteria");

    try {
        app.parse(argc, argv);
        if (!config_file.empty()) cfdim::merge_config_file(cfg, config_file);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    } catch (const cfdim::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return cfdim::run(cfg, std::cout, std::cerr, [](std::ostream& out) { return cfdim::acceptance::run_suite(out); });
}
