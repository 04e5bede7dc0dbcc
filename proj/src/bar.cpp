#include "mhh/bar.hpp"

#include "mhh/error.hpp"

#include <fmt/format.h>

#include <functional>
#include <unordered_map>

namespace mhh {

int internal_degree(const Monomial& m, const RingPresentation& pres)
{
    TriDegree d = tridegree(m, pres);
    return d.s + d.t;
}

namespace {

void check_ring(const RingPresentation& r)
{
    if (r.mode() == RelationMode::p2_pre_inversion)
        throw InvalidInput("bar complexes over the pre-inversion algebra are not supported");
    for (const auto& g : r.table().all())
        if (g.degree.s + g.degree.t <= 0)
            throw InvalidInput("bar complex needs a connected algebra; " + g.name + " has degree <= 0");
}

RingPresentation empty_presentation(const Prime& p)
{
    return RingPresentation(p, GeneratorTable{}, p.value() == 2 ? RelationMode::p2_inverted : RelationMode::free);
}

}  // namespace

BarModule::BarModule(RingPresentation s, const RingPresentation& r, std::vector<std::optional<Monomial>> images,
                     std::optional<int> truncation)
    : s_(std::move(s)), images_(std::move(images)), truncation_(truncation)
{
    if (!(s_.prime() == r.prime()))
        throw InvalidInput("module and ring over different primes");
    if (images_.size() != r.num_gens())
        throw InvalidInput("one image per ring generator required");
    for (std::size_t i = 0; i < images_.size(); ++i) {
        if (!images_[i])
            continue;
        TriDegree want = r.table()[i].degree;
        if (tridegree(*images_[i], s_) != want)
            throw InvalidInput("image of " + r.table()[i].name + " has the wrong degree");
    }
}

BarModule BarModule::base_field(const RingPresentation& r)
{
    check_ring(r);
    return BarModule(empty_presentation(r.prime()), r, std::vector<std::optional<Monomial>>(r.num_gens()));
}

BarModule BarModule::ring(const RingPresentation& r, std::optional<int> truncation)
{
    check_ring(r);
    std::vector<std::optional<Monomial>> images;
    for (const auto& g : r.table().all())
        images.push_back(r.generator(g.name));
    return BarModule(r, r, std::move(images), truncation);
}

std::vector<Monomial> BarModule::basis(int degree) const
{
    if (truncation_ && degree > *truncation_)
        return {};
    return enumerate_basis(s_, degree, Axis::total);
}

PolyElement BarModule::act(const Monomial& x, const Monomial& r, bool left) const
{
    std::optional<Monomial> img = s_.unit();
    for (std::size_t g = 0; g < r.exps.size() && img; ++g) {
        for (int e = 0; e < r.exps[g] && img; ++e) {
            if (!images_[g])
                return {};
            img = multiply(*img, *images_[g], s_);
        }
    }
    if (!img)
        return {};
    img->coeff = s_.prime().mul(img->coeff, r.coeff);
    auto prod = left ? multiply(*img, x, s_) : multiply(x, *img, s_);
    if (!prod)
        return {};
    if (truncation_ && internal_degree(*prod, s_) > *truncation_)
        return {};
    return PolyElement(*prod);
}

namespace {

// Monomials of one presentation with stable ids.
struct Registry {
    const RingPresentation* pres = nullptr;
    std::vector<Monomial> mons;
    std::vector<int> degree;
    std::vector<int> weight;
    std::vector<std::vector<int>> by_degree;
    std::unordered_map<Exponents, int, ExponentsHash> index;

    void fill(int d, const std::vector<Monomial>& basis)
    {
        if (static_cast<int>(by_degree.size()) <= d)
            by_degree.resize(d + 1);
        for (const auto& m : basis) {
            int id = static_cast<int>(mons.size());
            mons.push_back(m);
            degree.push_back(d);
            weight.push_back(tridegree(m, *pres).w);
            by_degree[d].push_back(id);
            index.emplace(m.exps, id);
        }
    }
    int id_of(const Monomial& m) const
    {
        auto it = index.find(m.exps);
        if (it == index.end())
            throw Error("monomial outside the registry");
        return it->second;
    }
};

struct Complex {
    Registry left, mid, right;
    std::map<int, std::vector<std::vector<std::vector<int>>>> words;  // c -> a -> words
};

Complex enumerate_words(const BarModule& q, const RingPresentation& r, const BarModule& m, int b)
{
    Complex cx;
    cx.left.pres = &q.presentation();
    cx.mid.pres = &r;
    cx.right.pres = &m.presentation();
    for (int d = 0; d <= b; ++d) {
        cx.left.fill(d, q.basis(d));
        cx.right.fill(d, m.basis(d));
        cx.mid.fill(d, d == 0 ? std::vector<Monomial>{} : enumerate_basis(r, d, Axis::total));
    }
    std::vector<int> word;
    std::function<void(int, int)> middle = [&](int remaining, int w) {
        // close the word with a right factor of the remaining degree
        for (int id : cx.right.by_degree[remaining]) {
            word.push_back(id);
            int a = static_cast<int>(word.size()) - 2;
            auto& byc = cx.words[w + cx.right.weight[id]];
            if (static_cast<int>(byc.size()) <= a)
                byc.resize(a + 1);
            byc[a].push_back(word);
            word.pop_back();
        }
        for (int d = 1; d <= remaining; ++d) {
            for (int id : cx.mid.by_degree[d]) {
                word.push_back(id);
                middle(remaining - d, w + cx.mid.weight[id]);
                word.pop_back();
            }
        }
    };
    for (int dl = 0; dl <= b; ++dl) {
        for (int id : cx.left.by_degree[dl]) {
            word.assign(1, id);
            middle(b - dl, cx.left.weight[id]);
        }
    }
    return cx;
}

std::vector<FpMatrix> differentials(const Complex& cx, const std::vector<std::vector<std::vector<int>>>& words,
                                    const BarModule& q, const RingPresentation& r, const BarModule& m)
{
    const Prime& P = r.prime();
    std::vector<FpMatrix> d;
    std::vector<std::map<std::vector<int>, int>> index(words.size());
    for (std::size_t a = 0; a < words.size(); ++a)
        for (std::size_t i = 0; i < words[a].size(); ++i)
            index[a].emplace(words[a][i], static_cast<int>(i));
    if (words.empty())
        return d;
    d.emplace_back(P, 0, static_cast<int>(words[0].size()));
    for (std::size_t a = 1; a < words.size(); ++a) {
        FpMatrix mat(P, static_cast<int>(words[a - 1].size()), static_cast<int>(words[a].size()));
        for (std::size_t j = 0; j < words[a].size(); ++j) {
            const auto& wd = words[a][j];
            std::map<int, Fp> col;
            auto emit = [&](std::vector<int> target, Fp c) {
                auto it = index[a - 1].find(target);
                if (it == index[a - 1].end())
                    throw Error("bar face lands outside the slice");
                Fp& slot = col[it->second];
                slot = P.add(slot, c);
            };
            const int n = static_cast<int>(a);
            for (int i = 0; i <= n; ++i) {
                const Fp sign = (i % 2) ? P.neg(1) : 1;
                std::vector<int> t;
                PolyElement merged;
                if (i == 0) {
                    merged = q.act(cx.left.mons[wd[0]], cx.mid.mons[wd[1]], false);
                    for (const auto& x : merged.terms()) {
                        t = {cx.left.id_of(x)};
                        t.insert(t.end(), wd.begin() + 2, wd.end());
                        emit(t, P.mul(sign, x.coeff));
                    }
                } else if (i == n) {
                    merged = m.act(cx.right.mons[wd[n + 1]], cx.mid.mons[wd[n]], true);
                    for (const auto& x : merged.terms()) {
                        t.assign(wd.begin(), wd.begin() + n);
                        t.push_back(cx.right.id_of(x));
                        emit(t, P.mul(sign, x.coeff));
                    }
                } else {
                    auto prod = multiply(cx.mid.mons[wd[i]], cx.mid.mons[wd[i + 1]], r);
                    if (!prod)
                        continue;
                    t.assign(wd.begin(), wd.begin() + i);
                    t.push_back(cx.mid.id_of(*prod));
                    t.insert(t.end(), wd.begin() + i + 2, wd.end());
                    emit(t, P.mul(sign, prod->coeff));
                }
            }
            SparseVec v;
            for (const auto& [row, c] : col)
                v.push_back(row, c);
            mat.set_col(static_cast<int>(j), std::move(v));
        }
        d.push_back(std::move(mat));
    }
    for (std::size_t a = 2; a < d.size(); ++a)
        if (!d[a - 1].compose(d[a]).is_zero())
            throw InconsistentDifferential(fmt::format("bar differential squares to nonzero at a = {}", a));
    return d;
}

void add_homology(TorTable& out, const std::vector<FpMatrix>& d, int b, int c)
{
    const int top = static_cast<int>(d.size());
    std::vector<int> rk(top + 1, 0);
    for (int a = 1; a < top; ++a)
        rk[a] = rank(d[a]);
    for (int a = 0; a < top; ++a) {
        const int dim = d[a].cols() - rk[a] - rk[a + 1];
        if (dim != 0)
            out[{a, b, c}] = dim;
    }
}

}  // namespace

BarSlice build_bar_slice(const BarModule& q, const RingPresentation& r, const BarModule& m, int b, int c)
{
    check_ring(r);
    Complex cx = enumerate_words(q, r, m, b);
    BarSlice slice;
    slice.b = b;
    slice.c = c;
    auto it = cx.words.find(c);
    if (it != cx.words.end())
        slice.words = it->second;
    slice.d = differentials(cx, slice.words, q, r, m);
    return slice;
}

TorTable tor(const BarModule& q, const RingPresentation& r, const BarModule& m, int b_max)
{
    check_ring(r);
    TorTable out;
    for (int b = 0; b <= b_max; ++b) {
        Complex cx = enumerate_words(q, r, m, b);
        for (const auto& [c, words] : cx.words)
            add_homology(out, differentials(cx, words, q, r, m), b, c);
    }
    return out;
}

TorReport check_flatness(const RingPresentation& r, int b_max)
{
    TorReport rep;
    TorTable t = tor(BarModule::base_field(r), r, BarModule::ring(r), b_max);
    for (const auto& [key, dim] : t) {
        auto [a, b, c] = key;
        if (a == 0 && b == 0 && c == 0 && dim == 1)
            continue;
        rep.pass = false;
        rep.discrepancies.push_back(fmt::format("Tor_{}({}, {}) = {}", a, b, c, dim));
    }
    if (!t.count({0, 0, 0})) {
        rep.pass = false;
        rep.discrepancies.push_back("Tor_0(0, 0) = 0");
    }
    return rep;
}

TorReport compare_truncated(const RingPresentation& r, int n, int b_max)
{
    TorReport rep;
    const BarModule k = BarModule::base_field(r);
    TorTable full = tor(k, r, BarModule::ring(r), std::min(n, b_max));
    TorTable cut = tor(k, r, BarModule::ring(r, n), std::min(n, b_max));
    for (const auto& [key, dim] : full) {
        auto it = cut.find(key);
        int other = it == cut.end() ? 0 : it->second;
        if (other != dim)
            rep.discrepancies.push_back(fmt::format("b={} a={} c={}: {} vs {}", std::get<1>(key), std::get<0>(key),
                                                    std::get<2>(key), dim, other));
    }
    for (const auto& [key, dim] : cut)
        if (!full.count(key))
            rep.discrepancies.push_back(fmt::format("b={} a={} c={}: 0 vs {}", std::get<1>(key), std::get<0>(key),
                                                    std::get<2>(key), dim));
    rep.pass = rep.discrepancies.empty();
    return rep;
}

std::string format_tor(const TorTable& t)
{
    std::string s;
    for (const auto& [key, dim] : t)
        s += fmt::format("{}\t{}\t{}\t{}\n", std::get<0>(key), std::get<1>(key), std::get<2>(key), dim);
    return s;
}

}  // namespace mhh
