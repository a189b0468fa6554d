#include <iostream>

#include <CLI11.hpp>

#include "commands.hpp"
#include "weil/errors.hpp"

int main(int argc, char** argv)
{
    using namespace weil::cli;
    RunConfig cfg;
    CLI::App app{"Weil representations of SL2 and Sp_2g over residue rings"};
    app.require_subcommand(1);
    app.option_defaults()->always_capture_default();
    app.add_option("--level", cfg.level, "level p");
    app.add_option("--genus", cfg.genus, "genus g")->check(CLI::PositiveNumber);
    app.add_option("--n", cfg.n, "modulus exponent n (group mod 2^n)");
    app.add_option("--delta", cfg.delta, "divisor for the omega operator");
    app.add_option("--format", cfg.format, "json, csv or text")->check(CLI::IsMember({"json", "csv", "text"}));
    app.add_option("--out", cfg.out, "output file (default stdout)");
    app.add_option("--workers", cfg.workers, "worker threads")->check(CLI::Range(1, 256));
    app.add_option("--max-level", cfg.max_level, "largest level touched by sweeps and suites")->check(CLI::PositiveNumber);

    long ga = 0, gb = 0;
    int gp = 0;
    auto* gauss = app.add_subcommand("gauss", "quadratic Gauss sum sum_k A^(a k^2 + b k)");
    gauss->add_option("a", ga)->required();
    gauss->add_option("b", gb)->required();
    gauss->add_option("p", gp, "level")->required();

    auto* rep = app.add_subcommand("rep", "representation matrices");
    rep->require_subcommand(1);
    auto* rep_show = rep->add_subcommand("show", "print the generator matrices");

    auto* decompose = app.add_subcommand("decompose", "irreducible factors with a commutant cross-check");
    auto* charsum = app.add_subcommand("charsum", "mean squared trace over the finite group");
    charsum->add_option("--method", cfg.method, "auto, full, census or classes")
        ->check(CLI::IsMember({"auto", "full", "census", "classes"}));
    auto* census = app.add_subcommand("census", "conjugacy census of SL2(Z/2^n)");
    census->add_flag("--traces", cfg.traces, "emit the |Tr|^2 table instead of class counts");
    auto* orbits = app.add_subcommand("orbits", "orbits of the symplectic group on (Z/N)^2g, N = --level");
    auto* semiclassical = app.add_subcommand("semiclassical", "normalised Heisenberg traces of monomials");

    std::vector<std::string> suites;
    auto* verify = app.add_subcommand("verify", "run verification suites");
    verify->add_option("suites", suites, "all, census, charsum, crt, tower, egorov, semiclassical, faithful; omega (not in all)");

    for (auto* sub : {gauss, rep, rep_show, decompose, charsum, census, orbits, semiclassical, verify}) sub->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kUsage;
    }

    try {
        if (*gauss) return cmd_gauss(cfg, ga, gb, gp);
        if (*rep_show) return cmd_rep_show(cfg);
        if (*decompose) return cmd_decompose(cfg);
        if (*charsum) return cmd_charsum(cfg);
        if (*census) return cmd_census(cfg);
        if (*orbits) return cmd_orbits(cfg);
        if (*semiclassical) return cmd_semiclassical(cfg);
        if (*verify) return cmd_verify(cfg, suites);
    } catch (const weil::DefectError& e) {
        std::cerr << "defect: " << e.what() << "\n";
        return kMismatch;
    } catch (const weil::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    }
    return kUsage;
}
