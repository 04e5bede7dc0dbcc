#include "mhh/error.hpp"
#include "mhh/specseq.hpp"

#include <fmt/format.h>

#include <climits>

namespace mhh {

namespace {

struct Families {
    int mu = -1;
    std::vector<int> tau;  // tau[i] = table index of tau_i
    std::vector<int> xi;   // xi[i] = table index of xi_i, xi[0] unused

    explicit Families(const RingPresentation& alg)
    {
        mu = alg.table().index_of("mu_0").value_or(-1);
        for (int i = 0;; ++i) {
            auto k = alg.table().index_of("tau_" + std::to_string(i));
            if (!k)
                break;
            tau.push_back(*k);
        }
        xi.push_back(-1);
        for (int i = 1;; ++i) {
            auto k = alg.table().index_of("xi_" + std::to_string(i));
            if (!k)
                break;
            xi.push_back(*k);
        }
        if (mu < 0)
            throw InvalidInput("closed-form fates need mu_0 in the presentation");
        std::size_t known = 1 + tau.size() + xi.size() - 1;
        if (known != alg.num_gens())
            throw InvalidInput("closed-form fates only know mu_0, tau_i and xi_i");
    }

    int tau_at(int i) const
    {
        if (i < 0 || i >= static_cast<int>(tau.size()))
            throw InvalidInput(fmt::format("tau_{} lies outside the presentation", i));
        return tau[i];
    }
    int xi_at(int i) const
    {
        if (i < 1 || i >= static_cast<int>(xi.size()))
            throw InvalidInput(fmt::format("xi_{} lies outside the presentation", i));
        return xi[i];
    }
};

long long ipow(long long b, int e)
{
    long long r = 1;
    while (e-- > 0)
        r *= b;
    return r;
}

}  // namespace

Fate oracle_p2(const Monomial& m, const RingPresentation& alg)
{
    if (alg.prime().value() != 2)
        throw InvalidInput("oracle_p2 needs p = 2");
    Families f(alg);
    const int N = m.exps[f.mu];
    int jmin = INT_MAX;
    for (std::size_t j = 0; j < f.tau.size(); ++j)
        if (m.exps[f.tau[j]] > 0) {
            jmin = static_cast<int>(j);
            break;
        }
    if (N == 0 && jmin == INT_MAX)
        return {Role::permanent, 0, std::nullopt, 0};
    const int i = N > 0 ? valuation(N, 2) : INT_MAX;
    Exponents partner = m.exps;
    if (i <= jmin) {
        partner[f.mu] -= static_cast<int>(ipow(2, i));
        partner[f.tau_at(i)] += 1;
        return {Role::source, static_cast<int>(ipow(2, i + 1)), partner, 1};
    }
    const int k = jmin;
    partner[f.mu] += static_cast<int>(ipow(2, k));
    partner[f.tau_at(k)] -= 1;
    return {Role::target, static_cast<int>(ipow(2, k + 1)), partner, 1};
}

Fate oracle_odd(const Monomial& m, const RingPresentation& alg)
{
    const int p = alg.prime().value();
    if (p == 2)
        throw InvalidInput("oracle_odd needs an odd prime");
    Families f(alg);
    const Prime& P = alg.prime();
    const int N = m.exps[f.mu];
    int kmin = INT_MAX;
    int jmin = INT_MAX;
    for (std::size_t j = 0; j < f.tau.size(); ++j) {
        if (m.exps[f.tau[j]] > 1)
            throw InvalidInput("tau_i squared is zero for odd p");
        if (m.exps[f.tau[j]] > 0 && kmin == INT_MAX)
            kmin = static_cast<int>(j);
    }
    for (std::size_t j = 1; j < f.xi.size(); ++j)
        if (m.exps[f.xi[j]] > 0 && jmin == INT_MAX)
            jmin = static_cast<int>(j);
    if (N == 0 && kmin == INT_MAX && jmin == INT_MAX)
        return {Role::permanent, 0, std::nullopt, 0};
    const int i = N > 0 ? valuation(N, p) : INT_MAX;
    const long long n = N > 0 ? N / ipow(p, i) : 0;
    const int h = std::min({i, kmin, jmin});
    const int ph = static_cast<int>(ipow(p, h));
    Exponents partner = m.exps;

    // xi_h is hit from mu_0^{(p-1)p^{h-1}} tau_{h-1} times the rest
    if (jmin == h) {
        const int a = static_cast<int>((p - 1) * ipow(p, h - 1));
        partner[f.mu] += a;
        partner[f.tau_at(h - 1)] += 1;
        partner[f.xi_at(h)] -= 1;
        return {Role::target, 2 * a, partner, 1};
    }
    const bool has_tau_h = kmin == h;
    if (i == h && has_tau_h && (n + 1) % p == 0) {
        const int a = (p - 1) * ph;
        partner[f.mu] -= a;
        partner[f.tau_at(h)] -= 1;
        partner[f.xi_at(h + 1)] += 1;
        return {Role::source, 2 * a, partner, 1};
    }
    if (has_tau_h) {
        partner[f.mu] += ph;
        partner[f.tau_at(h)] -= 1;
        return {Role::target, 2 * ph, partner, P.reduce(i == h ? n + 1 : 1)};
    }
    partner[f.mu] -= ph;
    partner[f.tau_at(h)] += 1;
    return {Role::source, 2 * ph, partner, P.reduce(n)};
}

CrossCheck cross_check(const E2Context& ctx, const RunResult& run)
{
    CrossCheck cc;
    const RingPresentation& alg = ctx.algebra;
    const bool p2 = alg.prime().value() == 2;
    auto describe = [&](const Fate& f) {
        std::string s = fmt::format("{}@{}", role_name(f.role), f.page);
        if (f.partner)
            s += fmt::format(" partner={} coeff={}", to_string(Monomial{1, *f.partner, 0}, alg, false), f.coefficient);
        return s;
    };
    for (std::size_t i = 0; i < ctx.slots.size(); ++i) {
        const auto& slot = ctx.slots[i];
        if (slot.edge)
            continue;
        for (std::size_t k = 0; k < slot.basis.size(); ++k) {
            ++cc.checked;
            const Fate& got = run.fates[i][k];
            Fate want;
            try {
                want = p2 ? oracle_p2(slot.basis[k], alg) : oracle_odd(slot.basis[k], alg);
            } catch (const InvalidInput& e) {
                cc.mismatches.push_back(fmt::format("{}: closed form undefined ({})", slot.labels[k], e.what()));
                continue;
            }
            if (!(got == want))
                cc.mismatches.push_back(
                    fmt::format("{} at ({}, {}): engine {} vs closed form {}", slot.labels[k], slot.s, slot.t,
                                describe(got), describe(want)));
        }
    }
    return cc;
}

}  // namespace mhh
