#include "mhh/error.hpp"
#include "mhh/specseq.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <map>

namespace mhh {

TransgressionTable TransgressionTable::for_vertical(const RingPresentation& vertical)
{
    TransgressionTable t;
    for (int i = 0;; ++i) {
        std::string name = "tau_" + std::to_string(i);
        if (!vertical.table().index_of(name))
            break;
        t.chain.push_back(name);
    }
    for (const auto& g : vertical.table().all())
        if (g.name.rfind("xi_", 0) == 0)
            t.kernel.insert(g.name);
    return t;
}

namespace {

using Factors = std::vector<std::pair<std::string, int>>;

class State {
public:
    State(const RingPresentation& vertical, const Window& window) : vertical_(vertical), window_(window) {}

    void rebuild(const std::vector<Generator>& gens, const std::vector<RuleSpec>& specs)
    {
        evaluator_.reset();
        rules_.reset();
        ctx_ = std::make_shared<const E2Context>(polynomial_horizontal(vertical_.prime().value(), gens), vertical_,
                                                 window_);
        rules_ = std::make_unique<RuleSet>(ctx_->algebra);
        for (const auto& s : specs)
            rules_->add(s);
        evaluator_ = std::make_unique<DifferentialEvaluator>(*rules_);
        page_ = Page{};
        page_.r = 2;
        page_.ctx = ctx_;
        page_.slots.clear();
        const Prime& P = ctx_->algebra.prime();
        for (const auto& slot : ctx_->slots) {
            Subquotient sq(P, static_cast<int>(slot.basis.size()));
            for (int i = 0; i < static_cast<int>(slot.basis.size()); ++i)
                sq.add_rep({SparseVec::unit(i), i});
            page_.slots.push_back(std::move(sq));
        }
    }

    // Advance to E^r (r >= current page).
    void advance_to(int r)
    {
        while (page_.r < r)
            page_ = turn_page(page_, *evaluator_, false).next;
    }

    const Page& page() const { return page_; }
    const E2Context& ctx() const { return *ctx_; }

    // Monomials alive as unit representatives at (s, t) on the current page.
    std::vector<Monomial> unit_survivors(int s, int t, bool& has_combination) const
    {
        std::vector<Monomial> out;
        has_combination = false;
        int id = ctx_->slot_id(s, t);
        if (id < 0)
            return out;
        for (const auto& rep : page_.slots[id].reps()) {
            if (rep.unit)
                out.push_back(ctx_->slots[id].basis[*rep.unit]);
            else
                has_combination = true;
        }
        return out;
    }

    bool alive(const Monomial& m) const
    {
        TriDegree d = tridegree(m, ctx_->algebra);
        int id = ctx_->slot_id(d.s, d.t);
        if (id < 0)
            return false;
        const auto& slot = ctx_->slots[id];
        auto it = slot.index.find(m.exps);
        if (it == slot.index.end())
            return false;
        for (const auto& rep : page_.slots[id].reps())
            if (rep.unit == it->second)
                return true;
        return false;
    }

private:
    RingPresentation vertical_;
    Window window_;
    std::shared_ptr<const E2Context> ctx_;
    std::unique_ptr<RuleSet> rules_;
    std::unique_ptr<DifferentialEvaluator> evaluator_;
    Page page_;
};

Factors power(const Factors& f, int k)
{
    Factors out = f;
    for (auto& [name, e] : out)
        e *= k;
    return out;
}

std::string factors_name(const Factors& f)
{
    std::string s;
    for (const auto& [name, e] : f) {
        if (!s.empty())
            s += ' ';
        s += e == 1 ? name : fmt::format("{}^{}", name, e);
    }
    return s;
}

}  // namespace

SolveResult solve_horizontal(const RingPresentation& vertical, const TransgressionTable& table, const Window& window)
{
    const int p = vertical.prime().value();
    SolveResult res;
    std::map<std::string, Factors> sigma;  // suspension image of a chain element, up to a unit
    State st(vertical, window);
    st.rebuild(res.generators, res.rules);

    auto fail = [&](std::string why) {
        res.solved = false;
        res.failure = std::move(why);
        return res;
    };
    auto chain_pos = [&](const std::string& name) -> int {
        auto it = std::find(table.chain.begin(), table.chain.end(), name);
        return it == table.chain.end() ? -1 : static_cast<int>(it - table.chain.begin());
    };

    for (int q = 2; window.contains(q, 0) && window.contains(0, q - 1) && !window.is_edge(0, q - 1); ++q) {
        for (int attempt = 0;; ++attempt) {
            if (attempt > 2 * static_cast<int>(vertical.num_gens()) + 4)
                return fail(fmt::format("no progress at stem {}", q - 1));
            st.advance_to(q + 1);
            bool combo = false;
            auto survivors = st.unit_survivors(0, q - 1, combo);
            if (combo)
                return fail(fmt::format("a combination survives to E_{} at (0, {})", q, q - 1));
            if (survivors.empty())
                break;
            const RingPresentation& alg = st.ctx().algebra;
            bool changed = false;
            for (const auto& m : survivors) {
                int gen = -1;
                int total = 0;
                for (std::size_t g = 0; g < m.exps.size(); ++g) {
                    total += m.exps[g];
                    if (m.exps[g])
                        gen = static_cast<int>(g);
                }
                const std::string label = to_string(m, alg, false);
                if (total != 1)
                    return fail(fmt::format("decomposable class {} survives to E_{} at (0, {})", label, q, q - 1));
                const Generator& g = alg.table()[gen];
                const int k = chain_pos(g.name);
                if (k >= 0) {
                    const bool linked = k > 0 && sigma.count(table.chain[k - 1]);
                    if (linked) {
                        Factors cand = power(sigma[table.chain[k - 1]], p);
                        Monomial cm = alg.monomial(cand);
                        if (tridegree(cm, alg).s != q || !st.alive(cm))
                            return fail(fmt::format("{} survives but {} is not available at ({}, 0)", label,
                                                    factors_name(cand), q));
                        res.rules.push_back({factors_name(cand), cand, q, {{g.name, 1}}, 1});
                        sigma[g.name] = cand;
                        res.steps.push_back(fmt::format("d{}({}) = {} via the p-th power of the suspension of {}",
                                                        q, factors_name(cand), label, table.chain[k - 1]));
                    } else {
                        const std::string name = "mu_" + std::to_string(res.generators.size());
                        const int w = tridegree(m, alg).w;
                        res.generators.push_back({name, {q, 0, w}, q % 2 ? Parity::odd : Parity::even,
                                                  GenKind::polynomial});
                        res.rules.push_back({name, {{name, 1}}, q, {{g.name, 1}}, 1});
                        sigma[g.name] = {{name, 1}};
                        res.steps.push_back(fmt::format("new generator {} in ({}, 0, {}) transgressing to {}", name,
                                                        q, w, label));
                    }
                    changed = true;
                } else if (table.kernel.count(g.name)) {
                    // xi_{i+1} must be hit by mu^{(p-1)} tau_i where mu is the suspension image of tau_i
                    const int j = std::stoi(g.name.substr(3));
                    if (j < 1 || j > static_cast<int>(table.chain.size()) || !sigma.count(table.chain[j - 1]))
                        return fail(fmt::format("{} survives with no suspension image for its partner", label));
                    const std::string& tau = table.chain[j - 1];
                    Factors src = power(sigma[tau], p - 1);
                    src.push_back({tau, 1});
                    Monomial sm = alg.monomial(src);
                    const int page = tridegree(sm, alg).s;
                    for (const auto& r : res.rules)
                        if (alg.monomial(r.atom).exps == sm.exps)
                            return fail(fmt::format("{} still survives after installing its rule", label));
                    st.advance_to(page);
                    if (!st.alive(sm))
                        return fail(fmt::format("{} survives but {} is dead before E_{}", label, factors_name(src),
                                                page));
                    res.rules.push_back({factors_name(src), src, page, {{g.name, 1}}, 1});
                    res.steps.push_back(fmt::format("d{}({}) = {}", page, factors_name(src), label));
                    changed = true;
                } else {
                    return fail(fmt::format("{} survives and has no transgression", label));
                }
            }
            if (changed)
                st.rebuild(res.generators, res.rules);
        }
        st.advance_to(q + 1);
        bool combo = false;
        auto left = st.unit_survivors(q, 0, combo);
        if (combo || !left.empty())
            return fail(fmt::format("a class survives at ({}, 0) to E_{}", q, q + 1));
    }
    res.solved = true;
    return res;
}

}  // namespace mhh
