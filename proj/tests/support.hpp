#pragma once

#include "mhh/specseq.hpp"

#include <algorithm>
#include <memory>
#include <optional>

namespace mhh::testing {

// Every page of a run, kept so differentials can be re-evaluated on each E_r.
struct PageHistory {
    std::unique_ptr<Setup> setup;
    std::unique_ptr<DifferentialEvaluator> d;
    std::vector<Page> pages;  // pages[i].r == i + 2
    std::vector<LogEntry> log;

    const E2Context& ctx() const { return *setup->ctx; }
    const RingPresentation& algebra() const { return setup->ctx->algebra; }
    const Page& page(int r) const { return pages.at(r - 2); }
};

inline PageHistory mhh_history(int p, const Window& w)
{
    PageHistory h;
    h.setup = std::make_unique<Setup>(mhh_setup(p, w));
    h.d = std::make_unique<DifferentialEvaluator>(h.setup->rules);
    Page page;
    page.r = 2;
    page.ctx = h.setup->ctx;
    for (const auto& slot : h.setup->ctx->slots) {
        Subquotient sq(h.algebra().prime(), static_cast<int>(slot.basis.size()));
        for (int i = 0; i < static_cast<int>(slot.basis.size()); ++i)
            sq.add_rep({SparseVec::unit(i), i});
        page.slots.push_back(std::move(sq));
    }
    h.pages.push_back(page);
    for (int r = 2; r <= w.last_page(); ++r) {
        TurnResult tr = turn_page(h.pages.back(), *h.d, true);
        h.log.insert(h.log.end(), tr.log.begin(), tr.log.end());
        h.pages.push_back(std::move(tr.next));
    }
    return h;
}

// Coordinates of a homogeneous element in the basis of a slot; tau powers are dropped.
inline SparseVec coords(const PolyElement& x, const E2Context::Slot& slot)
{
    std::vector<std::pair<int, Fp>> e;
    for (const auto& m : x.terms())
        e.push_back({slot.index.at(m.exps), m.coeff});
    std::sort(e.begin(), e.end());
    SparseVec v;
    for (const auto& [i, c] : e)
        v.push_back(i, c);
    return v;
}

// d^r of an E_2 vector of slot `from`, as coordinates in the target slot; nullopt if unresolved.
inline std::optional<SparseVec> apply_d(const PageHistory& h, int from, const SparseVec& v, int r)
{
    const auto& X = h.ctx().slots[from];
    const int to = h.ctx().slot_id(X.s - r, X.t + r - 1);
    const Prime& P = h.algebra().prime();
    SparseVec out;
    for (const auto& [k, c] : v.entries()) {
        auto img = h.d->evaluate(X.basis[k], r);
        if (!img)
            return std::nullopt;
        if (img->is_zero())
            continue;
        if (to < 0)
            return std::nullopt;
        out.axpy(c, coords(*img, h.ctx().slots[to]), P);
    }
    return out;
}

inline SparseVec lift(const Subquotient& sq, const SparseVec& c, const Prime& P)
{
    SparseVec v;
    for (const auto& [i, x] : c.entries())
        v.axpy(x, sq.reps()[i].vec, P);
    return v;
}

}  // namespace mhh::testing
