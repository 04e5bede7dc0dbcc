#include "mhh/algebra.hpp"

#include "mhh/error.hpp"

#include <fmt/format.h>
#include <fmt/ranges.h>

#include <algorithm>
#include <functional>

namespace mhh {

GeneratorTable::GeneratorTable(std::vector<Generator> gens)
{
    for (auto& g : gens)
        push_back(std::move(g));
}

void GeneratorTable::push_back(Generator g)
{
    if (g.name.empty())
        throw InvalidInput("generator with empty name");
    if (g.name == "tau")
        throw InvalidInput("'tau' is reserved for the coefficient field");
    if (index_.count(g.name))
        throw InvalidInput("duplicate generator name: " + g.name);
    index_.emplace(g.name, static_cast<int>(gens_.size()));
    gens_.push_back(std::move(g));
}

std::optional<int> GeneratorTable::index_of(const std::string& name) const
{
    auto it = index_.find(name);
    if (it == index_.end())
        return std::nullopt;
    return it->second;
}

std::size_t ExponentsHash::operator()(const Exponents& e) const
{
    std::size_t h = 0xcbf29ce484222325ULL;
    for (int x : e) {
        h ^= static_cast<std::size_t>(x) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    }
    return h;
}

bool exps_less(const Exponents& a, const Exponents& b)
{
    for (std::size_t i = a.size(); i-- > 0;)
        if (a[i] != b[i])
            return a[i] < b[i];
    return false;
}

namespace {

std::optional<int> family_index(const std::string& name, const std::string& family)
{
    const std::string prefix = family + "_";
    if (name.rfind(prefix, 0) != 0 || name.size() == prefix.size())
        return std::nullopt;
    int v = 0;
    for (std::size_t i = prefix.size(); i < name.size(); ++i) {
        if (name[i] < '0' || name[i] > '9')
            return std::nullopt;
        v = v * 10 + (name[i] - '0');
    }
    return v;
}

}  // namespace

RingPresentation::RingPresentation(Prime prime, GeneratorTable table, RelationMode mode)
    : prime_(prime), table_(std::move(table)), mode_(mode)
{
    const int p = prime_.value();
    if ((mode_ == RelationMode::p2_pre_inversion || mode_ == RelationMode::p2_inverted) && p != 2)
        throw InvalidInput("p = 2 relation mode used with p = " + std::to_string(p));
    if (mode_ == RelationMode::odd_inverted && p == 2)
        throw InvalidInput("odd relation mode used with p = 2");

    square_target_.assign(table_.size(), -1);
    for (std::size_t i = 0; i < table_.size(); ++i) {
        const Generator& g = table_[i];
        const int deg_parity = ((g.degree.s + g.degree.t) % 2 + 2) % 2;
        if ((g.parity == Parity::odd) != (deg_parity == 1))
            throw InvalidInput("parity of " + g.name + " disagrees with its degree");
        if (p != 2 && g.parity == Parity::odd && g.kind == GenKind::polynomial)
            throw InvalidInput("odd generator " + g.name + " cannot be polynomial for odd p");
        if (g.kind == GenKind::truncated) {
            if (mode_ != RelationMode::p2_pre_inversion)
                throw InvalidInput("truncated generator " + g.name + " outside pre-inversion mode");
            auto k = family_index(g.name, "tau");
            if (!k)
                throw InvalidInput("truncated generator must be named tau_i: " + g.name);
            auto j = table_.index_of("xi_" + std::to_string(*k + 1));
            if (!j)
                throw InvalidInput("missing xi_" + std::to_string(*k + 1) + " for " + g.name);
            if (table_[*j].degree + kTauDegree != g.degree * 2)
                throw InvalidInput("degree of xi_" + std::to_string(*k + 1) + " incompatible with " + g.name);
            square_target_[i] = *j;
        }
        if (mode_ == RelationMode::odd_inverted && g.parity == Parity::odd && g.kind != GenKind::exterior)
            throw InvalidInput("odd generator " + g.name + " must be exterior");
    }
}

Monomial RingPresentation::unit() const
{
    return Monomial{1, Exponents(table_.size(), 0), 0};
}

Monomial RingPresentation::generator(const std::string& name, int exponent) const
{
    return monomial({{name, exponent}});
}

Monomial RingPresentation::monomial(const std::vector<std::pair<std::string, int>>& factors) const
{
    Monomial m = unit();
    for (const auto& [name, e] : factors) {
        if (name == "tau") {
            m.tau_exp += e;
            continue;
        }
        auto idx = table_.index_of(name);
        if (!idx)
            throw InvalidInput("unknown generator: " + name);
        if (e < 0)
            throw InvalidInput("negative exponent on " + name);
        m.exps[*idx] += e;
    }
    for (std::size_t i = 0; i < m.exps.size(); ++i)
        if (m.exps[i] > 1 && (table_[i].kind != GenKind::polynomial))
            throw InvalidInput("monomial not in normal form: " + table_[i].name);
    return m;
}

PolyElement::PolyElement(Monomial m)
{
    if (m.coeff != 0)
        terms_.push_back(std::move(m));
}

void PolyElement::add_term(const Monomial& m, const Prime& p)
{
    Fp c = p.reduce(m.coeff);
    if (c == 0)
        return;
    auto it = std::lower_bound(terms_.begin(), terms_.end(), m,
                               [](const Monomial& a, const Monomial& b) { return exps_less(a.exps, b.exps); });
    if (it != terms_.end() && it->exps == m.exps) {
        if (it->tau_exp != m.tau_exp)
            throw InvalidInput("inhomogeneous sum: tau exponents differ on equal monomials");
        it->coeff = p.add(it->coeff, c);
        if (it->coeff == 0)
            terms_.erase(it);
        return;
    }
    Monomial copy = m;
    copy.coeff = c;
    terms_.insert(it, std::move(copy));
}

void PolyElement::add(const PolyElement& other, const Prime& p)
{
    for (const auto& t : other.terms_)
        add_term(t, p);
}

PolyElement PolyElement::scaled(Fp c, const Prime& p) const
{
    PolyElement r;
    if (p.reduce(c) == 0)
        return r;
    r.terms_ = terms_;
    for (auto& t : r.terms_)
        t.coeff = p.mul(t.coeff, p.reduce(c));
    return r;
}

namespace {

// Applies exterior / truncated relations in place. Returns false if the monomial vanishes.
bool apply_relations(Monomial& m, const RingPresentation& pres)
{
    for (std::size_t i = 0; i < m.exps.size(); ++i) {
        const Generator& g = pres.table()[i];
        if (m.exps[i] < 0)
            throw InvalidInput("negative exponent on " + g.name);
        if (m.exps[i] <= 1)
            continue;
        if (g.kind == GenKind::exterior)
            return false;
        if (g.kind == GenKind::truncated) {
            int q = m.exps[i] / 2;
            m.exps[i] %= 2;
            m.exps[pres.square_target(i)] += q;
            m.tau_exp += q;
        }
    }
    return true;
}

}  // namespace

PolyElement normalize(const RawProduct& raw, const RingPresentation& pres)
{
    const Prime& P = pres.prime();
    struct F {
        int gen;
        int exp;
        bool odd;
    };
    std::vector<F> fs;
    fs.reserve(raw.factors.size());
    int tau = raw.tau_exp;
    for (const auto& f : raw.factors) {
        if (f.name == "tau") {
            tau += f.exponent;
            continue;
        }
        auto idx = pres.table().index_of(f.name);
        if (!idx)
            throw InvalidInput("unknown generator: " + f.name);
        if (f.exponent < 0)
            throw InvalidInput("negative exponent on " + f.name);
        if (f.exponent == 0)
            continue;
        fs.push_back({*idx, f.exponent, pres.is_odd(*idx) && (f.exponent % 2 == 1)});
    }
    // Koszul sign of sorting: one -1 per transposition of two odd factors.
    int swaps = 0;
    for (std::size_t a = 0; a < fs.size(); ++a)
        for (std::size_t b = a + 1; b < fs.size(); ++b)
            if (fs[a].gen > fs[b].gen && fs[a].odd && fs[b].odd)
                ++swaps;
    Monomial m = pres.unit();
    m.tau_exp = tau;
    for (const auto& f : fs)
        m.exps[f.gen] += f.exp;
    long long c = raw.coeff;
    if (swaps % 2)
        c = -c;
    m.coeff = P.reduce(c);
    if (m.coeff == 0 || !apply_relations(m, pres))
        return {};
    return PolyElement(std::move(m));
}

std::optional<Monomial> multiply(const Monomial& a, const Monomial& b, const RingPresentation& pres)
{
    const Prime& P = pres.prime();
    const std::size_t n = pres.num_gens();
    // sign: each odd factor of b moves left past the odd factors of a with larger index
    int odd_after = 0;
    int swaps = 0;
    for (std::size_t i = n; i-- > 0;) {
        if (pres.is_odd(i)) {
            if (b.exps[i] % 2 == 1)
                swaps += odd_after;
            if (a.exps[i] % 2 == 1)
                ++odd_after;
        }
    }
    Monomial m;
    m.exps.resize(n);
    for (std::size_t i = 0; i < n; ++i)
        m.exps[i] = a.exps[i] + b.exps[i];
    m.tau_exp = a.tau_exp + b.tau_exp;
    m.coeff = P.mul(a.coeff, b.coeff);
    if (swaps % 2)
        m.coeff = P.neg(m.coeff);
    if (m.coeff == 0 || !apply_relations(m, pres))
        return std::nullopt;
    return m;
}

PolyElement multiply(const PolyElement& a, const PolyElement& b, const RingPresentation& pres)
{
    PolyElement r;
    for (const auto& x : a.terms())
        for (const auto& y : b.terms())
            if (auto m = multiply(x, y, pres))
                r.add_term(*m, pres.prime());
    return r;
}

TriDegree tridegree(const Monomial& m, const RingPresentation& pres)
{
    TriDegree d = kTauDegree * m.tau_exp;
    for (std::size_t i = 0; i < m.exps.size(); ++i)
        if (m.exps[i])
            d = d + pres.table()[i].degree * m.exps[i];
    return d;
}

TriDegree tridegree(const PolyElement& x, const RingPresentation& pres)
{
    if (x.is_zero())
        throw InvalidInput("tridegree of zero");
    return tridegree(x.terms().front(), pres);
}

int parity(const Monomial& m, const RingPresentation& pres)
{
    TriDegree d = tridegree(m, pres);
    return ((d.s + d.t) % 2 + 2) % 2;
}

std::vector<Monomial> enumerate_basis(const RingPresentation& pres, int degree, Axis axis)
{
    std::vector<Monomial> out;
    if (degree < 0)
        return out;
    const auto& gens = pres.table().all();
    auto axis_deg = [axis](const Generator& g) {
        switch (axis) {
        case Axis::filtration: return g.degree.s;
        case Axis::stem: return g.degree.t;
        default: return g.degree.s + g.degree.t;
        }
    };
    std::vector<int> usable;
    for (std::size_t i = 0; i < gens.size(); ++i) {
        int d = axis_deg(gens[i]);
        if (d < 0)
            throw InvalidInput("generator " + gens[i].name + " has negative degree");
        if (d > 0)
            usable.push_back(static_cast<int>(i));
    }
    Exponents e(gens.size(), 0);
    std::function<void(std::size_t, int)> rec = [&](std::size_t k, int remaining) {
        if (remaining == 0) {
            out.push_back(Monomial{1, e, 0});
            return;
        }
        if (k == usable.size())
            return;
        const int gi = usable[k];
        const int d = axis_deg(gens[gi]);
        int max_e = remaining / d;
        if (gens[gi].kind != GenKind::polynomial)
            max_e = std::min(max_e, 1);
        for (int x = 0; x <= max_e; ++x) {
            e[gi] = x;
            rec(k + 1, remaining - x * d);
        }
        e[gi] = 0;
    };
    rec(0, degree);
    std::sort(out.begin(), out.end(), [](const Monomial& a, const Monomial& b) { return exps_less(a.exps, b.exps); });
    return out;
}

std::string to_string(const Monomial& m, const RingPresentation& pres, bool with_coeff)
{
    std::vector<std::string> parts;
    if (m.tau_exp != 0)
        parts.push_back(m.tau_exp == 1 ? std::string("tau") : fmt::format("tau^{}", m.tau_exp));
    for (std::size_t i = 0; i < m.exps.size(); ++i) {
        if (m.exps[i] == 0)
            continue;
        const auto& name = pres.table()[i].name;
        parts.push_back(m.exps[i] == 1 ? name : fmt::format("{}^{}", name, m.exps[i]));
    }
    std::string body = parts.empty() ? std::string() : fmt::format("{}", fmt::join(parts, " "));
    if (with_coeff && m.coeff != 1)
        return body.empty() ? std::to_string(m.coeff) : std::to_string(m.coeff) + " " + body;
    return body.empty() ? std::string("1") : body;
}

std::string to_string(const PolyElement& x, const RingPresentation& pres)
{
    if (x.is_zero())
        return "0";
    std::string s;
    for (const auto& t : x.terms()) {
        if (!s.empty())
            s += " + ";
        s += to_string(t, pres);
    }
    return s;
}

// ---- presets ----

namespace {

long long ipow(long long b, int e)
{
    long long r = 1;
    while (e-- > 0)
        r *= b;
    return r;
}

}  // namespace

RingPresentation steenrod_inverted(int p, int t_max)
{
    Prime P(p);
    GeneratorTable table;
    for (int i = 0; 2 * ipow(p, i) - 1 <= t_max; ++i) {
        const int pi = static_cast<int>(ipow(p, i));
        table.push_back({"tau_" + std::to_string(i), {0, 2 * pi - 1, pi - 1}, Parity::odd,
                         p == 2 ? GenKind::polynomial : GenKind::exterior});
    }
    if (p != 2) {
        for (int i = 1; 2 * ipow(p, i) - 2 <= t_max; ++i) {
            const int pi = static_cast<int>(ipow(p, i));
            table.push_back({"xi_" + std::to_string(i), {0, 2 * pi - 2, pi - 1}, Parity::even, GenKind::polynomial});
        }
    }
    return RingPresentation(P, std::move(table), p == 2 ? RelationMode::p2_inverted : RelationMode::odd_inverted);
}

RingPresentation steenrod_pre_inversion(int t_max)
{
    GeneratorTable table;
    int top = -1;
    for (int i = 0; 2 * ipow(2, i) - 1 <= t_max; ++i) {
        const int pi = static_cast<int>(ipow(2, i));
        table.push_back({"tau_" + std::to_string(i), {0, 2 * pi - 1, pi - 1}, Parity::odd, GenKind::truncated});
        top = i;
    }
    // every tau_i needs xi_{i+1} to express its square
    for (int i = 1; i <= top + 1; ++i) {
        const int pi = static_cast<int>(ipow(2, i));
        table.push_back({"xi_" + std::to_string(i), {0, 2 * pi - 2, pi - 1}, Parity::even, GenKind::polynomial});
    }
    return RingPresentation(Prime(2), std::move(table), RelationMode::p2_pre_inversion);
}

RingPresentation horizontal_mu(int p)
{
    return polynomial_horizontal(p, {{"mu_0", {2, 0, 0}, Parity::even, GenKind::polynomial}});
}

RingPresentation polynomial_horizontal(int p, const std::vector<Generator>& gens)
{
    GeneratorTable table;
    for (const auto& g : gens) {
        if (g.degree.t != 0 || g.degree.s <= 0)
            throw InvalidInput("horizontal generator must sit in (s > 0, 0): " + g.name);
        table.push_back(g);
    }
    return RingPresentation(Prime(p), std::move(table), p == 2 ? RelationMode::p2_inverted : RelationMode::free);
}

RingPresentation tensor(const RingPresentation& vertical, const RingPresentation& horizontal)
{
    if (!(vertical.prime() == horizontal.prime()))
        throw InvalidInput("tensor of presentations over different primes");
    GeneratorTable table;
    for (const auto& g : vertical.table().all())
        table.push_back(g);
    for (const auto& g : horizontal.table().all())
        table.push_back(g);
    return RingPresentation(vertical.prime(), std::move(table), vertical.mode());
}

Monomial invert_tau(const Monomial& m, const RingPresentation& from, const RingPresentation& to)
{
    if (from.mode() != RelationMode::p2_pre_inversion)
        throw InvalidInput("invert_tau expects a pre-inversion presentation");
    Monomial out = to.unit();
    out.coeff = m.coeff;
    out.tau_exp = m.tau_exp;
    for (std::size_t i = 0; i < m.exps.size(); ++i) {
        if (m.exps[i] == 0)
            continue;
        const auto& name = from.table()[i].name;
        if (auto k = family_index(name, "xi")) {
            // xi_k = tau^-1 tau_{k-1}^2
            auto j = to.table().index_of("tau_" + std::to_string(*k - 1));
            if (!j)
                throw InvalidInput("target lacks tau_" + std::to_string(*k - 1));
            out.exps[*j] += 2 * m.exps[i];
            out.tau_exp -= m.exps[i];
            continue;
        }
        auto j = to.table().index_of(name);
        if (!j)
            throw InvalidInput("target lacks " + name);
        out.exps[*j] += m.exps[i];
    }
    return out;
}

// ---- serialization ----

std::string relation_mode_name(RelationMode m)
{
    switch (m) {
    case RelationMode::p2_pre_inversion: return "p2-pre-inversion";
    case RelationMode::p2_inverted: return "p2-inverted";
    case RelationMode::odd_inverted: return "odd-inverted";
    case RelationMode::free: return "free";
    }
    return "free";
}

RelationMode relation_mode_from_name(const std::string& name)
{
    for (auto m : {RelationMode::p2_pre_inversion, RelationMode::p2_inverted, RelationMode::odd_inverted,
                   RelationMode::free})
        if (relation_mode_name(m) == name)
            return m;
    throw InvalidInput("unknown relation mode: " + name);
}

namespace {

const char* kind_name(GenKind k)
{
    switch (k) {
    case GenKind::polynomial: return "polynomial";
    case GenKind::exterior: return "exterior";
    case GenKind::truncated: return "truncated";
    }
    return "polynomial";
}

GenKind kind_from_name(const std::string& s)
{
    if (s == "polynomial")
        return GenKind::polynomial;
    if (s == "exterior")
        return GenKind::exterior;
    if (s == "truncated")
        return GenKind::truncated;
    throw InvalidInput("unknown generator kind: " + s);
}

}  // namespace

nlohmann::json to_json(const RingPresentation& pres)
{
    nlohmann::json j;
    j["prime"] = pres.prime().value();
    j["mode"] = relation_mode_name(pres.mode());
    j["generators"] = nlohmann::json::array();
    for (const auto& g : pres.table().all()) {
        j["generators"].push_back({{"name", g.name},
                                   {"s", g.degree.s},
                                   {"t", g.degree.t},
                                   {"w", g.degree.w},
                                   {"parity", g.parity == Parity::odd ? "odd" : "even"},
                                   {"kind", kind_name(g.kind)}});
    }
    return j;
}

RingPresentation presentation_from_json(const nlohmann::json& j)
{
    try {
        GeneratorTable table;
        for (const auto& g : j.at("generators")) {
            const std::string par = g.at("parity").get<std::string>();
            if (par != "odd" && par != "even")
                throw InvalidInput("parity must be odd or even");
            table.push_back({g.at("name").get<std::string>(),
                             {g.at("s").get<int>(), g.at("t").get<int>(), g.at("w").get<int>()},
                             par == "odd" ? Parity::odd : Parity::even,
                             kind_from_name(g.at("kind").get<std::string>())});
        }
        return RingPresentation(Prime(j.at("prime").get<int>()), std::move(table),
                                relation_mode_from_name(j.at("mode").get<std::string>()));
    } catch (const nlohmann::json::exception& e) {
        throw InvalidInput(std::string("malformed presentation: ") + e.what());
    }
}

}  // namespace mhh
