#include "mhh/cli.hpp"

#include "mhh/bar.hpp"
#include "mhh/chart.hpp"
#include "mhh/error.hpp"
#include "mhh/postnikov.hpp"
#include "mhh/specseq.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <fmt/format.h>
#include <fmt/ostream.h>

#include <fstream>
#include <sstream>

namespace mhh {

namespace {

struct Options {
    std::string mode = "verify";
    int prime = 2;
    int s_max = 16;
    int t_max = -1;
    int n_max = -1;
    int r_max = 64;
    std::string preset;
    std::string format = "table";
    std::string out;
    std::string config;
};

struct ConfigError : Error {
    using Error::Error;
};

struct Problem {
    std::shared_ptr<const E2Context> ctx;
    std::unique_ptr<RuleSet> rules;
    bool builtin = false;
};

Window window_of(const Options& o)
{
    Window w;
    w.s_max = o.s_max;
    w.t_max = o.t_max >= 0 ? o.t_max : o.s_max - 1;
    if (o.n_max >= 0)
        w.n_max = o.n_max;
    w.r_max = o.r_max;
    if (w.s_max < 0 || w.t_max < 0 || w.r_max < 2)
        throw ConfigError("window bounds must be non-negative and rmax at least 2");
    return w;
}

std::vector<std::pair<std::string, int>> factors_from_json(const nlohmann::json& j)
{
    std::vector<std::pair<std::string, int>> out;
    for (const auto& f : j)
        out.push_back({f.at(0).get<std::string>(), f.at(1).get<int>()});
    return out;
}

Problem load_problem(const Options& o, const Window& w)
{
    Problem pr;
    const std::string preset = o.preset.empty() ? (o.prime == 2 ? "mhh-p2" : "mhh-odd") : o.preset;
    if (preset == "mhh-p2" || preset == "mhh-odd") {
        if ((preset == "mhh-p2") != (o.prime == 2))
            throw ConfigError(fmt::format("preset {} does not match prime {}", preset, o.prime));
        Setup s = mhh_setup(o.prime, w);
        pr.ctx = s.ctx;
        pr.rules = std::make_unique<RuleSet>(std::move(s.rules));
        pr.builtin = true;
        return pr;
    }
    std::ifstream in(preset);
    if (!in)
        throw ConfigError("cannot open presentation file " + preset);
    try {
        nlohmann::json j = nlohmann::json::parse(in);
        RingPresentation vertical = presentation_from_json(j.at("vertical"));
        RingPresentation horizontal =
            j.contains("horizontal") ? presentation_from_json(j.at("horizontal")) : horizontal_mu(o.prime);
        if (vertical.prime().value() != o.prime)
            throw ConfigError("presentation prime differs from --prime");
        pr.ctx = std::make_shared<const E2Context>(horizontal, vertical, w);
        pr.rules = std::make_unique<RuleSet>(pr.ctx->algebra);
        if (j.contains("rules")) {
            for (const auto& r : j.at("rules"))
                pr.rules->add(RuleSpec{r.at("name").get<std::string>(), factors_from_json(r.at("atom")),
                                       r.at("page").get<int>(), factors_from_json(r.at("target")),
                                       r.value("coeff", 1LL)});
        } else {
            for (const auto& spec : mhh_rule_specs(o.prime, w, vertical))
                pr.rules->add(spec);
        }
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("malformed presentation file: ") + e.what());
    } catch (const InvalidInput& e) {
        throw ConfigError(std::string("invalid presentation file: ") + e.what());
    }
    return pr;
}

Page e2_of(const Problem& pr)
{
    Page page = build_E2(pr.ctx->horizontal, pr.ctx->vertical, pr.ctx->window);
    return page;
}

std::string pass(bool ok)
{
    return ok ? "PASS" : "FAIL";
}

std::string window_text(const Window& w)
{
    std::string s = fmt::format("s<={} t<={}", w.s_max, w.t_max);
    if (w.n_max)
        s += fmt::format(" s+t<={}", *w.n_max);
    return s + fmt::format(" r<={}", w.r_max);
}

std::string generators_text(const std::vector<Generator>& gens)
{
    std::string s;
    for (const auto& g : gens)
        s += fmt::format("{}{}({},{},{})", s.empty() ? "" : " ", g.name, g.degree.s, g.degree.t, g.degree.w);
    return s.empty() ? "(none)" : s;
}

bool same_generators(const std::vector<Generator>& a, const RingPresentation& h)
{
    if (a.size() != h.num_gens())
        return false;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (a[i].name != h.table()[i].name || a[i].degree != h.table()[i].degree)
            return false;
    return true;
}

// Strict re-run with a solved horizontal algebra.
std::vector<std::string> rerun_records(const SolveResult& sr, const RingPresentation& vertical, const Window& w)
{
    auto ctx = std::make_shared<const E2Context>(polynomial_horizontal(vertical.prime().value(), sr.generators),
                                                 vertical, w);
    RuleSet rules(ctx->algebra);
    for (const auto& spec : sr.rules)
        rules.add(spec);
    RunResult rr = run(build_E2(ctx->horizontal, ctx->vertical, w), rules, true);
    return log_records(rr.log, ctx->algebra);
}

int mode_verify(const Options& o, std::ostream& out)
{
    const Window w = window_of(o);
    Problem pr = load_problem(o, w);
    RunResult rr = run(e2_of(pr), *pr.rules, true);
    Verdict v = check_convergence(rr.final_page);
    bool ok = v.pass;
    std::vector<std::string> lines;
    lines.push_back(fmt::format("mode verify prime {} window {}", o.prime, window_text(w)));
    lines.push_back(fmt::format("convergence {} ({} slots checked)", pass(v.pass), v.checked_slots));
    for (const auto& f : v.failures)
        lines.push_back("  survivor " + f);
    if (pr.builtin) {
        CrossCheck cc = cross_check(*pr.ctx, rr);
        ok = ok && cc.mismatches.empty();
        lines.push_back(fmt::format("cross_check {} ({} classes, {} mismatches)", pass(cc.mismatches.empty()),
                                    cc.checked, cc.mismatches.size()));
        for (const auto& m : cc.mismatches)
            lines.push_back("  " + m);
    }
    SolveResult sr = solve_horizontal(pr.ctx->vertical, TransgressionTable::for_vertical(pr.ctx->vertical), w);
    const bool gens_ok = sr.solved && same_generators(sr.generators, pr.ctx->horizontal);
    lines.push_back(fmt::format("solver {} generators {}{}", pass(gens_ok), generators_text(sr.generators),
                                sr.solved ? "" : " (" + sr.failure + ")"));
    ok = ok && gens_ok;
    const auto records = log_records(rr.log, pr.ctx->algebra);
    if (gens_ok) {
        const bool same = rerun_records(sr, pr.ctx->vertical, w) == records;
        lines.push_back(fmt::format("log_reproduced {} ({} records)", pass(same), records.size()));
        ok = ok && same;
    }
    lines.push_back(fmt::format("unresolved {} (edge slots only)", rr.unresolved.size()));

    if (o.format == "svg") {
        ChartSpec cs;
        cs.s_max = w.s_max;
        cs.t_max = w.t_max;
        out << emit_chart(e2_of(pr), rr.log, cs);
    } else if (o.format == "records") {
        for (const auto& l : lines)
            out << "# " << l << '\n';
        for (const auto& r : records)
            out << r << '\n';
    } else {
        for (const auto& l : lines)
            out << l << '\n';
    }
    return ok ? exit_ok : exit_check_failed;
}

int mode_solve(const Options& o, std::ostream& out)
{
    const Window w = window_of(o);
    Problem pr = load_problem(o, w);
    SolveResult sr = solve_horizontal(pr.ctx->vertical, TransgressionTable::for_vertical(pr.ctx->vertical), w);
    out << fmt::format("mode solve prime {} window {}\n", o.prime, window_text(w));
    for (const auto& s : sr.steps)
        out << "step " << s << '\n';
    out << fmt::format("solved {} generators {}\n", pass(sr.solved), generators_text(sr.generators));
    if (!sr.solved) {
        out << "failure " << sr.failure << '\n';
        return exit_check_failed;
    }
    for (const auto& r : sr.rules)
        out << fmt::format("rule d{} {} -> {}\n", r.page, r.name, r.target.front().first);
    const auto records = rerun_records(sr, pr.ctx->vertical, w);
    bool ok = true;
    if (pr.builtin) {
        RunResult rr = run(e2_of(pr), *pr.rules, true);
        ok = records == log_records(rr.log, pr.ctx->algebra);
        out << fmt::format("log_reproduced {} ({} records)\n", pass(ok), records.size());
    }
    if (o.format == "records")
        for (const auto& r : records)
            out << r << '\n';
    return ok ? exit_ok : exit_check_failed;
}

int mode_tor(const Options& o, std::ostream& out)
{
    const int b_max = o.t_max >= 0 ? o.t_max : 8;
    RingPresentation r = steenrod_inverted(o.prime, b_max);
    bool ok = true;
    out << fmt::format("mode tor prime {} b<={}\n", o.prime, b_max);
    TorReport flat = check_flatness(r, b_max);
    ok = ok && flat.pass;
    out << fmt::format("flatness {}\n", pass(flat.pass));
    for (const auto& d : flat.discrepancies)
        out << "  " << d << '\n';
    for (int n : {2, 4, 6}) {
        TorReport t = compare_truncated(r, n, b_max);
        ok = ok && t.pass;
        out << fmt::format("truncation n={} {}\n", n, pass(t.pass));
        for (const auto& d : t.discrepancies)
            out << "  " << d << '\n';
    }
    if (o.format == "records" || o.format == "table") {
        out << "# Tor(F_p, R, F_p): a b c dim\n";
        out << format_tor(tor(BarModule::base_field(r), r, BarModule::base_field(r), b_max));
    }
    return ok ? exit_ok : exit_check_failed;
}

int mode_truncate(const Options& o, std::ostream& out)
{
    const int top = o.t_max >= 0 ? o.t_max : 8;
    RingPresentation r = steenrod_inverted(o.prime, top);
    CellPresentation y = cells_from_algebra(r, top);
    bool ok = true;
    out << fmt::format("mode truncate prime {} degrees<={} cells {}\n", o.prime, top, y.size());
    for (int n = 0; n <= top; ++n) {
        IdentityReport rep = check_identities(y, n);
        ok = ok && rep.pass;
        FiberSlice f = fiber(y, n);
        out << fmt::format("n={} identities {} fiber weights [{}]\n", n, pass(rep.pass), fmt::join(f.weights, ","));
        for (const auto& v : rep.violations)
            out << "  " << v << '\n';
    }
    if (o.format == "records") {
        out << "# degree weight count\n";
        for (const auto& [k, c] : homotopy(y))
            out << k.first << '\t' << k.second << '\t' << c << '\n';
    }
    return ok ? exit_ok : exit_check_failed;
}

int mode_chart(const Options& o, std::ostream& out)
{
    const Window w = window_of(o);
    Problem pr = load_problem(o, w);
    Page e2 = e2_of(pr);
    RunResult rr = run(e2, *pr.rules, true);
    ChartSpec cs;
    cs.s_max = w.s_max;
    cs.t_max = w.t_max;
    out << emit_chart(e2, rr.log, cs);
    return exit_ok;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    Options o;
    CLI::App app{"Spectral sequence verifier for the motivic Hochschild homology computation"};
    app.add_option("mode,--mode", o.mode, "verify | solve | tor | truncate | chart")
        ->check(CLI::IsMember({"verify", "solve", "tor", "truncate", "chart"}));
    app.add_option("--prime", o.prime, "prime p");
    app.add_option("--smax", o.s_max, "largest filtration s");
    app.add_option("--tmax", o.t_max, "largest t (defaults to smax - 1; the degree bound for tor/truncate)");
    app.add_option("--nmax", o.n_max, "largest total degree s + t");
    app.add_option("--rmax", o.r_max, "last page");
    app.add_option("--preset", o.preset, "mhh-p2, mhh-odd or a JSON presentation file");
    app.add_option("--format", o.format, "table | records | svg")
        ->check(CLI::IsMember({"table", "records", "svg"}));
    app.add_option("--out", o.out, "output file (default stdout)");
    app.set_config("--config", "", "key = value configuration file; flags take precedence");
    app.allow_config_extras(CLI::config_extras_mode::error);

    std::vector<std::string> rev(args.rbegin(), args.rend());
    try {
        app.parse(rev);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return exit_ok;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return exit_bad_config;
    }

    std::ostringstream buf;
    int code = exit_ok;
    try {
        Prime check(o.prime);
        (void)check;
        if (o.mode == "verify")
            code = mode_verify(o, buf);
        else if (o.mode == "solve")
            code = mode_solve(o, buf);
        else if (o.mode == "tor")
            code = mode_tor(o, buf);
        else if (o.mode == "truncate")
            code = mode_truncate(o, buf);
        else
            code = mode_chart(o, buf);
    } catch (const ConfigError& e) {
        err << "error: " << e.what() << '\n';
        return exit_bad_config;
    } catch (const InvalidInput& e) {
        err << "error: " << e.what() << '\n';
        return exit_bad_config;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << '\n';
        return exit_internal;
    }

    if (o.out.empty()) {
        out << buf.str();
    } else {
        std::ofstream f(o.out);
        if (!f) {
            err << "error: cannot write " << o.out << '\n';
            return exit_bad_config;
        }
        f << buf.str();
    }
    return code;
}

}  // namespace mhh
