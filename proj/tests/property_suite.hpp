#pragma once

#include "support.hpp"

#include <fmt/format.h>

#include <map>
#include <random>
#include <string>

namespace mhh::testing {

inline constexpr int kMinCases = 1000;

struct SuiteResult {
    int cases = 0;
    int failures = 0;
    int nontrivial = 0;  // cases where some differential was nonzero
    std::string first_failure;

    void fail(std::string what)
    {
        if (failures++ == 0)
            first_failure = std::move(what);
    }
    bool pass() const { return failures == 0 && cases >= kMinCases; }
};

inline Window property_window(int p)
{
    Window w;
    w.r_max = 64;
    if (p == 2) {
        w.s_max = 20;
        w.t_max = 19;
    } else {
        w.s_max = w.t_max = p == 3 ? 40 : 50;
        w.n_max = w.s_max;
    }
    return w;
}

namespace detail {

inline std::vector<int> non_edge_slots(const PageHistory& h)
{
    std::vector<int> out;
    for (std::size_t i = 0; i < h.ctx().slots.size(); ++i)
        if (!h.ctx().slots[i].edge && !h.ctx().slots[i].basis.empty())
            out.push_back(static_cast<int>(i));
    return out;
}

template <class T>
const T& pick(std::mt19937& rng, const std::vector<T>& v)
{
    return v[std::uniform_int_distribution<std::size_t>(0, v.size() - 1)(rng)];
}

inline SparseVec random_coords(std::mt19937& rng, int dim, const Prime& P)
{
    std::uniform_int_distribution<int> c(0, P.value() - 1);
    SparseVec v;
    for (int i = 0; i < dim; ++i)
        v.push_back(i, static_cast<Fp>(c(rng)));
    if (v.empty() && dim > 0)
        v.push_back(std::uniform_int_distribution<int>(0, dim - 1)(rng), 1);
    return v;
}

inline RawProduct raw_of(const Monomial& m, const RingPresentation& pres)
{
    RawProduct raw{m.coeff, {}, m.tau_exp};
    for (std::size_t i = 0; i < m.exps.size(); ++i)
        if (m.exps[i])
            raw.factors.push_back({pres.table()[i].name, m.exps[i]});
    return raw;
}

}  // namespace detail

// d_r d_r = 0 on E_r for random classes and pages.
inline SuiteResult check_d_squared(const PageHistory& h, unsigned seed)
{
    SuiteResult res;
    const Prime& P = h.algebra().prime();
    std::mt19937 rng(seed);
    const int last = h.ctx().window.last_page();
    const auto ids = detail::non_edge_slots(h);
    for (int attempt = 0; attempt < 200 * kMinCases && res.cases < kMinCases; ++attempt) {
        const int r = std::uniform_int_distribution<int>(2, last)(rng);
        const Page& page = h.page(r);
        const int x = detail::pick(rng, ids);
        const auto& X = h.ctx().slots[x];
        const int y = h.ctx().slot_id(X.s - r, X.t + r - 1);
        if (page.slots[x].dim() == 0 || y < 0 || h.ctx().slots[y].edge)
            continue;
        SparseVec cx = detail::random_coords(rng, page.slots[x].dim(), P);
        auto dy = apply_d(h, x, lift(page.slots[x], cx, P), r);
        if (!dy) {
            res.fail(fmt::format("d{} unresolved at ({}, {})", r, X.s, X.t));
            continue;
        }
        SparseVec cy;
        try {
            cy = page.slots[y].project(*dy);
        } catch (const std::exception& e) {
            res.fail(fmt::format("d{} image from ({}, {}) is not a class: {}", r, X.s, X.t, e.what()));
            continue;
        }
        auto dz = apply_d(h, y, lift(page.slots[y], cy, P), r);
        if (!dz)
            continue;
        ++res.cases;
        if (!cy.empty())
            ++res.nontrivial;
        const auto& Y = h.ctx().slots[y];
        const int z = h.ctx().slot_id(Y.s - r, Y.t + r - 1);
        const bool zero = z < 0 ? dz->empty() : page.slots[z].project(*dz).empty();
        if (!zero)
            res.fail(fmt::format("d{} d{} != 0 from ({}, {})", r, r, X.s, X.t));
    }
    return res;
}

// d(xy) = d(x) y + (-1)^|x| x d(y) whenever all three are evaluated by the atom rules.
inline SuiteResult check_leibniz(const PageHistory& h, unsigned seed)
{
    SuiteResult res;
    const RingPresentation& alg = h.algebra();
    const Prime& P = alg.prime();
    const Window& w = h.ctx().window;
    std::mt19937 rng(seed);
    const auto ids = detail::non_edge_slots(h);
    for (int attempt = 0; attempt < 400 * kMinCases && res.cases < kMinCases; ++attempt) {
        const auto& A = h.ctx().slots[detail::pick(rng, ids)];
        const auto& B = h.ctx().slots[detail::pick(rng, ids)];
        if (!w.contains(A.s + B.s, A.t + B.t))
            continue;
        const Monomial& x = detail::pick(rng, A.basis);
        const Monomial& y = detail::pick(rng, B.basis);
        auto xy = multiply(x, y, alg);
        if (!xy)
            continue;
        const int r = std::uniform_int_distribution<int>(2, w.last_page())(rng);
        auto dx = h.d->evaluate(x, r);
        auto dy = h.d->evaluate(y, r);
        auto dxy = h.d->evaluate(*xy, r);
        if (!dx || !dy || !dxy)
            continue;
        ++res.cases;
        PolyElement rhs = multiply(*dx, PolyElement(y), alg);
        PolyElement second = multiply(PolyElement(x), *dy, alg);
        rhs.add(parity(x, alg) ? second.scaled(P.neg(1), P) : second, P);
        if (!dxy->is_zero())
            ++res.nontrivial;
        if (!(*dxy == rhs))
            res.fail(fmt::format("d{}({} * {}) breaks the Leibniz rule", r, to_string(x, alg), to_string(y, alg)));
    }
    return res;
}

// Every logged and every sampled differential has tridegree (-r, r - 1, 0).
inline SuiteResult check_weight(const PageHistory& h, unsigned seed)
{
    SuiteResult res;
    const RingPresentation& alg = h.algebra();
    auto expect = [&](const TriDegree& src, const PolyElement& v, int r, const std::string& what) {
        ++res.cases;
        ++res.nontrivial;
        if (!(tridegree(v, alg) == src + TriDegree{-r, r - 1, 0}))
            res.fail("differential of " + what + " changes weight");
    };
    for (const auto& e : h.log)
        if (e.source_monomial)
            expect(tridegree(*e.source_monomial, alg), e.target, e.page, e.source);
    std::mt19937 rng(seed);
    const auto ids = detail::non_edge_slots(h);
    const int target = res.cases + kMinCases;
    for (int k = 0; k < 400 * kMinCases && res.cases < target; ++k) {
        const auto& X = h.ctx().slots[detail::pick(rng, ids)];
        Monomial m = detail::pick(rng, X.basis);
        m.tau_exp = std::uniform_int_distribution<int>(-3, 3)(rng);
        const int r = std::uniform_int_distribution<int>(2, h.ctx().window.last_page())(rng);
        auto v = h.d->evaluate(m, r);
        if (v && !v->is_zero())
            expect(tridegree(m, alg), *v, r, to_string(m, alg));
    }
    return res;
}

// dim E_{r+1} = dim E_r - rank out - rank in, and never grows.
inline SuiteResult check_monotone(const PageHistory& h)
{
    SuiteResult res;
    const auto& ctx = h.ctx();
    for (int r = 2; r - 2 + 1 < static_cast<int>(h.pages.size()); ++r) {
        std::map<std::pair<int, int>, int> out_rank, in_rank;
        for (const auto& e : h.log)
            if (e.page == r) {
                ++out_rank[{e.s, e.t}];
                ++in_rank[{e.s - r, e.t + r - 1}];
            }
        for (std::size_t i = 0; i < ctx.slots.size(); ++i) {
            const auto& X = ctx.slots[i];
            const int a = h.page(r).slots[i].dim();
            const int b = h.page(r + 1).slots[i].dim();
            ++res.cases;
            if (a != b)
                ++res.nontrivial;
            if (b > a)
                res.fail(fmt::format("E{} grows at ({}, {})", r + 1, X.s, X.t));
            else if (!X.edge && b != a - out_rank[{X.s, X.t}] - in_rank[{X.s, X.t}])
                res.fail(fmt::format("E{} at ({}, {}) is not the homology of d{}", r + 1, X.s, X.t, r));
        }
    }
    return res;
}

// Alternating sum of dimensions along each complete d_r line is unchanged by passing to E_{r+1}.
inline SuiteResult check_euler(const PageHistory& h)
{
    SuiteResult res;
    const auto& ctx = h.ctx();
    for (int r = 2; r - 2 + 1 < static_cast<int>(h.pages.size()); ++r) {
        for (const auto& start : ctx.slots) {
            if (start.s - r >= 0)
                continue;  // not the first point of its line
            long long before = 0, after = 0;
            bool clean = true;
            int sign = 1;
            for (int s = start.s, t = start.t; t >= 0; s += r, t -= r - 1, sign = -sign) {
                const int id = ctx.slot_id(s, t);
                if (id < 0)
                    break;
                clean = clean && !ctx.slots[id].edge;
                before += sign * h.page(r).slots[id].dim();
                after += sign * h.page(r + 1).slots[id].dim();
            }
            if (!clean)
                continue;
            ++res.cases;
            if (before)
                ++res.nontrivial;
            if (before != after)
                res.fail(fmt::format("Euler characteristic changes on the d{} line through ({}, {})", r, start.s,
                                     start.t));
        }
    }
    return res;
}

// normalize(normalize(x)) == normalize(x) on random unordered products.
inline SuiteResult check_normalize_idempotent(const RingPresentation& pres, unsigned seed)
{
    SuiteResult res;
    std::mt19937 rng(seed);
    for (int k = 0; k < kMinCases; ++k) {
        RawProduct raw;
        raw.coeff = std::uniform_int_distribution<int>(-5, 5)(rng);
        raw.tau_exp = std::uniform_int_distribution<int>(-2, 2)(rng);
        const int n = std::uniform_int_distribution<int>(0, 6)(rng);
        for (int j = 0; j < n; ++j)
            raw.factors.push_back({detail::pick(rng, pres.table().all()).name,
                                   std::uniform_int_distribution<int>(1, 2)(rng)});
        PolyElement once = normalize(raw, pres);
        PolyElement twice;
        for (const auto& m : once.terms())
            twice.add(normalize(detail::raw_of(m, pres), pres), pres.prime());
        ++res.cases;
        if (!once.is_zero())
            ++res.nontrivial;
        if (!(once == twice))
            res.fail("normal form changes under a second normalization");
    }
    return res;
}

// x y = (-1)^{|x||y|} y x for E_2 monomials.
inline SuiteResult check_graded_commutative(const PageHistory& h, unsigned seed)
{
    SuiteResult res;
    const RingPresentation& alg = h.algebra();
    const Prime& P = alg.prime();
    std::mt19937 rng(seed);
    const auto ids = detail::non_edge_slots(h);
    for (int k = 0; k < 100 * kMinCases && res.cases < kMinCases; ++k) {
        const Monomial& x = detail::pick(rng, h.ctx().slots[detail::pick(rng, ids)].basis);
        const Monomial& y = detail::pick(rng, h.ctx().slots[detail::pick(rng, ids)].basis);
        auto xy = multiply(x, y, alg);
        auto yx = multiply(y, x, alg);
        if (xy.has_value() != yx.has_value()) {
            res.fail("product vanishes in one order only");
            continue;
        }
        if (!xy)
            continue;
        ++res.cases;
        const bool both_odd = parity(x, alg) && parity(y, alg);
        const Fp sign = both_odd ? P.neg(1) : 1;
        if (both_odd)
            ++res.nontrivial;
        if (xy->exps != yx->exps || xy->coeff != P.mul(sign, yx->coeff))
            res.fail(fmt::format("{} and {} do not graded-commute", to_string(x, alg), to_string(y, alg)));
    }
    return res;
}

}  // namespace mhh::testing
