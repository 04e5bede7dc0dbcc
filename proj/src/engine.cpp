#include "mhh/error.hpp"
#include "mhh/specseq.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <climits>
#include <functional>
#include <map>

namespace mhh {

bool Window::contains(int s, int t) const
{
    if (s < 0 || t < 0 || s > s_max || t > t_max)
        return false;
    return !n_max || s + t <= *n_max;
}

bool Window::is_edge(int s, int t) const
{
    for (int r = 2; r <= r_max; ++r) {
        if (s - r >= 0 && !contains(s - r, t + r - 1))
            return true;
        if (t - r + 1 >= 0 && !contains(s + r, t - r + 1))
            return true;
    }
    return false;
}

int Window::last_page() const
{
    return std::min({r_max, s_max, t_max + 1});
}

E2Context::E2Context(RingPresentation horizontal_, RingPresentation vertical_, Window window_)
    : horizontal(std::move(horizontal_)),
      vertical(std::move(vertical_)),
      algebra(tensor(vertical, horizontal)),
      window(window_)
{
    if (window.s_max < 0 || window.t_max < 0 || window.r_max < 2)
        throw InvalidInput("window needs s_max, t_max >= 0 and r_max >= 2");
    for (const auto& g : vertical.table().all())
        if (g.degree.s != 0)
            throw InvalidInput("vertical generator outside column 0: " + g.name);
    const std::size_t nv = vertical.num_gens();
    std::vector<std::vector<Monomial>> hbasis(window.s_max + 1), vbasis(window.t_max + 1);
    for (int s = 0; s <= window.s_max; ++s)
        hbasis[s] = enumerate_basis(horizontal, s, Axis::filtration);
    for (int t = 0; t <= window.t_max; ++t)
        vbasis[t] = enumerate_basis(vertical, t, Axis::stem);

    grid_.assign(static_cast<std::size_t>(window.s_max + 1) * (window.t_max + 1), -1);
    for (int s = 0; s <= window.s_max; ++s) {
        for (int t = 0; t <= window.t_max; ++t) {
            if (!window.contains(s, t))
                continue;
            Slot slot;
            slot.s = s;
            slot.t = t;
            slot.edge = window.is_edge(s, t);
            for (const auto& h : hbasis[s]) {
                for (const auto& v : vbasis[t]) {
                    Monomial m = algebra.unit();
                    std::copy(v.exps.begin(), v.exps.end(), m.exps.begin());
                    std::copy(h.exps.begin(), h.exps.end(), m.exps.begin() + nv);
                    slot.basis.push_back(std::move(m));
                }
            }
            std::sort(slot.basis.begin(), slot.basis.end(),
                      [](const Monomial& a, const Monomial& b) { return exps_less(a.exps, b.exps); });
            for (std::size_t i = 0; i < slot.basis.size(); ++i) {
                slot.labels.push_back(to_string(slot.basis[i], algebra, false));
                slot.weights.push_back(tridegree(slot.basis[i], algebra).w);
                slot.index.emplace(slot.basis[i].exps, static_cast<int>(i));
            }
            grid_[static_cast<std::size_t>(s) * (window.t_max + 1) + t] = static_cast<int>(slots.size());
            slots.push_back(std::move(slot));
        }
    }
}

int E2Context::slot_id(int s, int t) const
{
    if (s < 0 || t < 0 || s > window.s_max || t > window.t_max)
        return -1;
    return grid_[static_cast<std::size_t>(s) * (window.t_max + 1) + t];
}

const E2Context::Slot& E2Context::slot(int s, int t) const
{
    int id = slot_id(s, t);
    if (id < 0)
        throw InvalidInput(fmt::format("slot ({}, {}) outside the window", s, t));
    return slots[id];
}

// ---- rules ----

RuleSet::RuleSet(const RingPresentation& algebra) : algebra_(algebra), inert_(algebra.num_gens(), true) {}

void RuleSet::add(const RuleSpec& spec)
{
    Monomial atom = algebra_.monomial(spec.atom);
    Monomial target = algebra_.monomial(spec.target);
    target.coeff = algebra_.prime().reduce(spec.coeff);
    add(spec.name, std::move(atom), spec.page, PolyElement(std::move(target)));
    specs_.push_back(spec);
}

void RuleSet::add(std::string name, Monomial atom, int page, PolyElement target)
{
    if (page < 2)
        throw InvalidInput("rule page must be at least 2: " + name);
    if (atom.coeff != 1 || atom.tau_exp != 0)
        throw InvalidInput("rule atom must be a plain monomial: " + name);
    if (std::all_of(atom.exps.begin(), atom.exps.end(), [](int e) { return e == 0; }))
        throw InvalidInput("rule atom cannot be the unit: " + name);
    if (target.is_zero())
        throw InvalidInput("rule target is zero: " + name);
    for (const auto& r : rules_)
        if (r.atom.exps == atom.exps)
            throw InvalidInput("duplicate rule atom: " + name);
    const TriDegree a = tridegree(atom, algebra_);
    PolyElement solved;
    for (Monomial m : target.terms()) {
        TriDegree d = tridegree(m, algebra_);
        if (d.s != a.s - page || d.t != a.t + page - 1)
            throw InvalidInput(fmt::format("rule {} target has the wrong bidegree for d^{}", name, page));
        m.tau_exp += d.w - a.w;
        solved.add_term(m, algebra_.prime());
    }
    int nonzero = 0;
    int gen = -1;
    for (std::size_t i = 0; i < atom.exps.size(); ++i) {
        if (atom.exps[i]) {
            ++nonzero;
            gen = static_cast<int>(i);
        }
    }
    if (nonzero == 1 && atom.exps[gen] == 1)
        inert_[gen] = false;
    rules_.push_back({std::move(name), std::move(atom), page, std::move(solved)});
}

DifferentialEvaluator::DifferentialEvaluator(const RuleSet& rules) : rules_(rules)
{
    order_.resize(rules.rules().size());
    for (std::size_t i = 0; i < order_.size(); ++i)
        order_[i] = static_cast<int>(i);
    std::stable_sort(order_.begin(), order_.end(),
                     [&](int a, int b) { return rules.rules()[a].page > rules.rules()[b].page; });
}

std::optional<std::vector<int>> DifferentialEvaluator::cover(const Exponents& e, int r) const
{
    const auto& rules = rules_.rules();
    std::vector<int> cand;
    for (int k : order_)
        if (rules[k].page >= r)
            cand.push_back(k);
    std::vector<int> mult(cand.size(), 0);
    Exponents rem = e;
    std::function<bool(std::size_t)> dfs = [&](std::size_t k) -> bool {
        if (k == cand.size()) {
            for (std::size_t g = 0; g < rem.size(); ++g)
                if (rem[g] > 0 && !rules_.inert(g))
                    return false;
            return true;
        }
        const Exponents& a = rules[cand[k]].atom.exps;
        int mx = INT_MAX;
        for (std::size_t g = 0; g < a.size(); ++g)
            if (a[g] > 0)
                mx = std::min(mx, rem[g] / a[g]);
        for (int x = mx; x >= 0; --x) {
            for (std::size_t g = 0; g < a.size(); ++g)
                rem[g] -= x * a[g];
            mult[k] = x;
            if (dfs(k + 1))
                return true;
            for (std::size_t g = 0; g < a.size(); ++g)
                rem[g] += x * a[g];
        }
        mult[k] = 0;
        return false;
    };
    if (!dfs(0))
        return std::nullopt;
    std::vector<int> full(rules.size(), 0);
    for (std::size_t k = 0; k < cand.size(); ++k)
        full[cand[k]] = mult[k];
    return full;
}

std::optional<PolyElement> DifferentialEvaluator::evaluate(const Monomial& m, int r) const
{
    const RingPresentation& alg = algebra();
    const Prime& P = alg.prime();
    Key key{m.exps, r};
    auto it = cache_.find(key);
    if (it == cache_.end()) {
        std::optional<PolyElement> value;
        if (auto mult = cover(m.exps, r)) {
            const auto& rules = rules_.rules();
            std::vector<Monomial> factors;
            std::vector<const PolyElement*> diffs;
            Exponents rest = m.exps;
            bool any = false;
            for (int k : order_) {
                for (int x = 0; x < (*mult)[k]; ++x) {
                    factors.push_back(rules[k].atom);
                    diffs.push_back(rules[k].page == r ? &rules[k].target : nullptr);
                    any = any || rules[k].page == r;
                    for (std::size_t g = 0; g < rest.size(); ++g)
                        rest[g] -= rules[k].atom.exps[g];
                }
            }
            factors.push_back(Monomial{1, rest, 0});
            diffs.push_back(nullptr);
            PolyElement result;
            if (any) {
                const std::size_t n = factors.size();
                std::vector<Monomial> prefix(n + 1, alg.unit()), suffix(n + 1, alg.unit());
                for (std::size_t j = 0; j < n; ++j) {
                    auto x = multiply(prefix[j], factors[j], alg);
                    if (!x)
                        throw Error("atom factorization multiplies to zero");
                    prefix[j + 1] = *x;
                }
                for (std::size_t j = n; j-- > 0;) {
                    auto x = multiply(factors[j], suffix[j + 1], alg);
                    if (!x)
                        throw Error("atom factorization multiplies to zero");
                    suffix[j] = *x;
                }
                if (prefix[n].exps != m.exps || prefix[n].tau_exp != 0)
                    throw Error("atom factorization does not reproduce the monomial");
                const Fp sign = prefix[n].coeff;  // +-1
                for (std::size_t j = 0; j < n; ++j) {
                    if (!diffs[j])
                        continue;
                    PolyElement term = multiply(multiply(PolyElement(prefix[j]), *diffs[j], alg),
                                                PolyElement(suffix[j + 1]), alg);
                    if (parity(prefix[j], alg))
                        term = term.scaled(P.neg(1), P);
                    result.add(term, P);
                }
                result = result.scaled(P.inv(sign), P);
            }
            value = std::move(result);
        }
        it = cache_.emplace(std::move(key), std::move(value)).first;
    }
    if (!it->second)
        return std::nullopt;
    PolyElement out;
    for (Monomial t : it->second->terms()) {
        t.tau_exp += m.tau_exp;
        out.add_term(t, P);
    }
    return out.scaled(m.coeff, P);
}

PolyElement DifferentialEvaluator::operator()(const PolyElement& x, int r) const
{
    PolyElement out;
    for (const auto& m : x.terms()) {
        auto v = evaluate(m, r);
        if (!v)
            throw InconsistentRules(fmt::format("d^{} of {} cannot be factored into atoms", r,
                                                to_string(m, algebra())));
        out.add(*v, algebra().prime());
    }
    return out;
}

// ---- pages ----

int Page::dim(int s, int t) const
{
    int id = ctx->slot_id(s, t);
    return id < 0 ? 0 : slots[id].dim();
}

const Subquotient& Page::at(int s, int t) const
{
    int id = ctx->slot_id(s, t);
    if (id < 0)
        throw InvalidInput(fmt::format("slot ({}, {}) outside the window", s, t));
    return slots[id];
}

std::string Page::label(int slot, int i) const
{
    const auto& rep = slots[slot].reps().at(i);
    const auto& basis = ctx->slots[slot];
    if (rep.unit)
        return basis.labels[*rep.unit];
    std::string s = "[";
    bool first = true;
    for (const auto& [k, c] : rep.vec.entries()) {
        if (!first)
            s += " + ";
        first = false;
        s += c == 1 ? basis.labels[k] : fmt::format("{} {}", c, basis.labels[k]);
    }
    return s + "]";
}

std::string role_name(Role r)
{
    switch (r) {
    case Role::permanent: return "permanent";
    case Role::source: return "source";
    case Role::target: return "target";
    case Role::synthetic: return "synthetic";
    }
    return "?";
}

Page build_E2(const RingPresentation& horizontal, const RingPresentation& vertical, const Window& window)
{
    auto ctx = std::make_shared<const E2Context>(horizontal, vertical, window);
    Page page;
    page.r = 2;
    page.ctx = ctx;
    const Prime& P = ctx->algebra.prime();
    page.slots.reserve(ctx->slots.size());
    for (const auto& slot : ctx->slots) {
        const int n = static_cast<int>(slot.basis.size());
        Subquotient sq(P, n);
        for (int i = 0; i < n; ++i)
            sq.add_rep({SparseVec::unit(i), i});
        page.slots.push_back(std::move(sq));
    }
    return page;
}

namespace {

SparseVec to_vector(const PolyElement& x, const E2Context::Slot& slot)
{
    std::vector<std::pair<int, Fp>> entries;
    for (const auto& t : x.terms()) {
        auto it = slot.index.find(t.exps);
        if (it == slot.index.end())
            throw InconsistentDifferential(fmt::format("differential leaves the E2 basis of ({}, {})", slot.s, slot.t));
        entries.push_back({it->second, t.coeff});
    }
    std::sort(entries.begin(), entries.end());
    SparseVec v;
    for (const auto& [i, c] : entries)
        v.push_back(i, c);
    return v;
}

SparseVec lift(const SparseVec& coords, const Subquotient& sq, const Prime& P)
{
    SparseVec v;
    for (const auto& [i, c] : coords.entries())
        v.axpy(c, sq.reps()[i].vec, P);
    return v;
}

}  // namespace

TurnResult turn_page(const Page& page, const DifferentialEvaluator& d, bool strict)
{
    const E2Context& ctx = *page.ctx;
    const Prime& P = ctx.algebra.prime();
    const int r = page.r;
    const std::size_t n = ctx.slots.size();
    TurnResult out;

    std::vector<std::optional<FpMatrix>> out_mats(n);
    std::vector<std::vector<SparseVec>> raw(n);  // E2 images of representatives

    for (std::size_t x = 0; x < n; ++x) {
        const auto& X = ctx.slots[x];
        const Subquotient& sx = page.slots[x];
        if (sx.dim() == 0)
            continue;
        const int y = ctx.slot_id(X.s - r, X.t + r - 1);
        if (y < 0 || page.slots[y].dim() == 0)
            continue;
        const auto& Y = ctx.slots[y];
        const Subquotient& sy = page.slots[y];
        FpMatrix mat(P, sy.dim(), sx.dim());
        raw[x].resize(sx.dim());
        for (int j = 0; j < sx.dim(); ++j) {
            const auto& rep = sx.reps()[j];
            const std::string label = page.label(static_cast<int>(x), j);
            const int w0 = X.weights[rep.vec.entries().front().first];
            PolyElement value;
            bool resolved = true;
            for (const auto& [k, c] : rep.vec.entries()) {
                auto v = d.evaluate(X.basis[k], r);
                if (!v) {
                    resolved = false;
                    break;
                }
                PolyElement shifted;
                for (Monomial t : v->terms()) {
                    t.tau_exp += X.weights[k] - w0;
                    shifted.add_term(t, P);
                }
                value.add(shifted.scaled(c, P), P);
            }
            if (!resolved) {
                if (strict && !X.edge)
                    throw InconsistentRules(
                        fmt::format("d^{} of {} in ({}, {}) cannot be factored into atoms", r, label, X.s, X.t));
                out.unresolved.push_back({r, X.s, X.t, label});
                continue;
            }
            if (value.is_zero())
                continue;
            SparseVec img = to_vector(value, Y);
            SparseVec coords;
            try {
                coords = sy.project(img);
            } catch (const InconsistentDifferential&) {
                if (strict && !X.edge && !Y.edge)
                    throw InconsistentDifferential(fmt::format("d^{}({}) = {} is not alive in ({}, {})", r, label,
                                                               to_string(value, ctx.algebra), Y.s, Y.t));
                out.unresolved.push_back({r, X.s, X.t, label});
                continue;
            }
            if (coords.empty())
                continue;
            raw[x][j] = img;
            mat.set_col(j, coords);
            out.log.push_back({r, X.s, X.t, label,
                               rep.unit ? std::optional<Monomial>(X.basis[*rep.unit]) : std::nullopt, value});
        }
        if (!mat.is_zero())
            out_mats[x] = std::move(mat);
    }

    out.next.r = r + 1;
    out.next.ctx = page.ctx;
    out.next.slots.reserve(n);
    for (std::size_t x = 0; x < n; ++x) {
        const auto& X = ctx.slots[x];
        const Subquotient& sx = page.slots[x];
        const int y = ctx.slot_id(X.s - r, X.t + r - 1);
        const int w = ctx.slot_id(X.s + r, X.t - r + 1);
        const bool has_out = out_mats[x].has_value();
        const bool has_in = w >= 0 && out_mats[w].has_value();
        if (!has_out && !has_in) {
            out.next.slots.push_back(sx);
            continue;
        }
        FpMatrix d_out = has_out ? *out_mats[x] : FpMatrix(P, 0, sx.dim());
        FpMatrix d_in = has_in ? *out_mats[w] : FpMatrix(P, sx.dim(), 0);
        Subquotient h = [&] {
            try {
                return homology(d_in, d_out);
            } catch (const InconsistentDifferential& e) {
                throw InconsistentDifferential(fmt::format("page {} at ({}, {}): {}", r, X.s, X.t, e.what()));
            }
        }();

        Subquotient next(P, sx.ambient_dim());
        for (const auto& b : sx.boundaries())
            next.add_boundary(b);
        for (const auto& b : h.boundaries())
            next.add_boundary(lift(b, sx, P));
        std::vector<bool> survives(sx.dim(), false);
        for (const auto& rep : h.reps()) {
            std::optional<int> unit;
            if (rep.unit) {
                survives[*rep.unit] = true;
                unit = sx.reps()[*rep.unit].unit;
            }
            next.add_rep({lift(rep.vec, sx, P), unit});
        }

        for (int j = 0; j < sx.dim(); ++j) {
            const auto& old = sx.reps()[j];
            if (survives[j] || !old.unit)
                continue;
            Fate f{Role::synthetic, r, std::nullopt, 0};
            if (has_out && !d_out.col(j).empty()) {
                const SparseVec& img = raw[x][j];
                const auto& Y = ctx.slots[y];
                if (img.nnz() == 1) {
                    const int k = img.entries().front().first;
                    const auto& reps_y = page.slots[y].reps();
                    bool alive = std::any_of(reps_y.begin(), reps_y.end(),
                                             [k](const Representative& rr) { return rr.unit == k; });
                    if (alive)
                        f = {Role::source, r, Y.basis[k].exps, img.entries().front().second};
                }
            } else if (has_in) {
                const auto& W = ctx.slots[w];
                const Subquotient& sw = page.slots[w];
                for (int q = 0; q < sw.dim(); ++q) {
                    const SparseVec& img = raw[w][q];
                    if (!sw.reps()[q].unit || img.nnz() != 1 || img.entries().front().first != *old.unit)
                        continue;
                    f = {Role::target, r, W.basis[*sw.reps()[q].unit].exps, img.entries().front().second};
                    break;
                }
            }
            out.deaths.emplace_back(static_cast<int>(x), *old.unit, f);
        }
        out.next.slots.push_back(std::move(next));
    }
    return out;
}

RunResult run(const Page& e2, const RuleSet& rules, bool strict, std::optional<int> last_page)
{
    DifferentialEvaluator d(rules);
    RunResult res;
    const E2Context& ctx = *e2.ctx;
    res.fates.resize(ctx.slots.size());
    for (std::size_t i = 0; i < ctx.slots.size(); ++i)
        res.fates[i].assign(ctx.slots[i].basis.size(), Fate{});
    const int last = last_page.value_or(ctx.window.last_page());
    Page page = e2;
    while (page.r <= last) {
        TurnResult tr = turn_page(page, d, strict);
        res.log.insert(res.log.end(), tr.log.begin(), tr.log.end());
        res.unresolved.insert(res.unresolved.end(), tr.unresolved.begin(), tr.unresolved.end());
        for (auto& [slot, idx, fate] : tr.deaths)
            res.fates[slot][idx] = fate;
        page = std::move(tr.next);
    }
    res.final_page = std::move(page);
    return res;
}

Verdict check_convergence(const Page& final_page)
{
    Verdict v;
    const E2Context& ctx = *final_page.ctx;
    for (std::size_t i = 0; i < ctx.slots.size(); ++i) {
        const auto& slot = ctx.slots[i];
        if (slot.edge)
            continue;
        ++v.checked_slots;
        const Subquotient& sq = final_page.slots[i];
        if (slot.s == 0 && slot.t == 0) {
            if (sq.dim() != 1 || final_page.label(static_cast<int>(i), 0) != "1")
                v.failures.push_back(fmt::format("E_{}(0, 0) has dimension {}, expected the unit", final_page.r,
                                                 sq.dim()));
            continue;
        }
        if (sq.dim() != 0) {
            std::string labels;
            for (int j = 0; j < sq.dim(); ++j)
                labels += (j ? ", " : "") + final_page.label(static_cast<int>(i), j);
            v.failures.push_back(fmt::format("E_{}({}, {}) = {{{}}}", final_page.r, slot.s, slot.t, labels));
        }
    }
    v.pass = v.failures.empty();
    return v;
}

// ---- presets ----

std::vector<RuleSpec> mhh_rule_specs(int p, const Window& w, const RingPresentation& vertical)
{
    std::vector<RuleSpec> specs;
    auto has = [&](const std::string& name) { return vertical.table().index_of(name).has_value(); };
    long long pi = 1;
    for (int i = 0; 2 * pi <= w.s_max; ++i, pi *= p) {
        const std::string tau = "tau_" + std::to_string(i);
        const int page = static_cast<int>(2 * pi);
        if (!has(tau) || !w.contains(page, 0) || !w.contains(0, page - 1))
            break;
        specs.push_back({i == 0 ? "mu_0" : fmt::format("mu_0^{}", pi), {{"mu_0", static_cast<int>(pi)}}, page,
                         {{tau, 1}}, 1});
    }
    if (p == 2)
        return specs;
    pi = 1;
    for (int i = 0;; ++i, pi *= p) {
        const int a = static_cast<int>((p - 1) * pi);
        const std::string tau = "tau_" + std::to_string(i);
        const std::string xi = "xi_" + std::to_string(i + 1);
        const int t_src = static_cast<int>(2 * pi - 1);
        const int t_tgt = static_cast<int>(2 * pi * p - 2);
        if (2 * a > w.s_max || !has(tau) || !has(xi) || !w.contains(2 * a, t_src) || !w.contains(0, t_tgt))
            break;
        specs.push_back({fmt::format("mu_0^{} {}", a, tau), {{"mu_0", a}, {tau, 1}}, 2 * a, {{xi, 1}}, 1});
    }
    return specs;
}

Setup mhh_setup(int p, const Window& w)
{
    auto vertical = steenrod_inverted(p, w.t_max);
    auto ctx = std::make_shared<const E2Context>(horizontal_mu(p), vertical, w);
    RuleSet rules(ctx->algebra);
    for (const auto& spec : mhh_rule_specs(p, w, vertical))
        rules.add(spec);
    return {ctx, std::move(rules)};
}

// ---- log formatting ----

std::string format_record(const LogEntry& e, const RingPresentation& algebra)
{
    std::string target;
    if (e.target.terms().size() == 1) {
        target = to_string(Monomial{1, e.target.terms().front().exps, 0}, algebra, false);
    } else {
        target = "[" + to_string(e.target, algebra) + "]";
    }
    return fmt::format("d{}\t({},{})\t{}\t{}\t{}\t{}", e.page, e.s, e.t, e.source, target, e.coefficient(),
                       e.tau_exp());
}

std::vector<std::string> log_records(const std::vector<LogEntry>& log, const RingPresentation& algebra)
{
    std::vector<std::string> out;
    out.reserve(log.size());
    for (const auto& e : log)
        out.push_back(format_record(e, algebra));
    return out;
}

}  // namespace mhh
