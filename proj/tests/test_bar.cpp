#include "bar_oracle.hpp"

#include "mhh/error.hpp"

#include "doctest.h"

#include <map>

using namespace mhh;
using mhh::testing::brute_force_tor;

namespace {

RingPresentation one_generator(int p, Generator g)
{
    GeneratorTable t;
    t.push_back(g);
    RelationMode mode = p == 2 ? RelationMode::p2_inverted : RelationMode::free;
    return RingPresentation(Prime(p), t, mode);
}

TorTable tor_kk(const RingPresentation& r, int b_max)
{
    return tor(BarModule::base_field(r), r, BarModule::base_field(r), b_max);
}

// Tor of a tensor product is the product of the factors' tables
TorTable convolve(const TorTable& x, const TorTable& y, int b_max)
{
    TorTable out;
    for (const auto& [kx, dx] : x)
        for (const auto& [ky, dy] : y) {
            const int b = std::get<1>(kx) + std::get<1>(ky);
            if (b > b_max)
                continue;
            out[{std::get<0>(kx) + std::get<0>(ky), b, std::get<2>(kx) + std::get<2>(ky)}] += dx * dy;
        }
    return out;
}

}  // namespace

TEST_CASE("single generator Tor matches brute force")
{
    struct Case {
        int p;
        Generator g;
    };
    const std::vector<Case> cases{
        {2, {"tau_0", {0, 1, 0}, Parity::odd, GenKind::polynomial}},
        {2, {"tau_1", {0, 3, 1}, Parity::odd, GenKind::polynomial}},
        {3, {"tau_0", {0, 1, 0}, Parity::odd, GenKind::exterior}},
        {3, {"xi_1", {0, 4, 2}, Parity::even, GenKind::polynomial}},
        {5, {"x", {0, 2, 1}, Parity::even, GenKind::polynomial}},
        {5, {"y", {1, 2, 0}, Parity::odd, GenKind::exterior}},
    };
    for (const auto& c : cases) {
        CAPTURE(c.p);
        CAPTURE(c.g.name);
        RingPresentation r = one_generator(c.p, c.g);
        TorTable got = tor_kk(r, 12);
        CHECK(got == brute_force_tor(c.g, c.p, 12));
        const int deg = c.g.degree.s + c.g.degree.t;
        if (c.g.kind == GenKind::polynomial) {
            // exterior on one class in homological degree 1
            CHECK(got.size() == 2);
            CHECK(got.at({1, deg, c.g.degree.w}) == 1);
        } else {
            // divided powers: one class in each homological degree
            for (int a = 0; a * deg <= 12; ++a)
                CHECK(got.at({a, a * deg, a * c.g.degree.w}) == 1);
        }
    }
}

TEST_CASE("Tor over the vertical algebra is the product over generators")
{
    for (int p : {2, 3, 5}) {
        CAPTURE(p);
        const int b_max = p == 5 ? 10 : 8;
        RingPresentation r = steenrod_inverted(p, b_max);
        TorTable want{{{0, 0, 0}, 1}};
        for (const auto& g : r.table().all())
            want = convolve(want, brute_force_tor(g, p, b_max), b_max);
        CHECK(tor_kk(r, b_max) == want);
    }
}

TEST_CASE("the ring is flat over itself")
{
    for (int p : {2, 3, 5}) {
        CAPTURE(p);
        TorReport rep = check_flatness(steenrod_inverted(p, 8), 8);
        CHECK(rep.pass);
        CHECK(rep.discrepancies.empty());
    }
}

TEST_CASE("truncated coefficients agree below the truncation")
{
    for (int p : {2, 3, 5})
        for (int n : {2, 4, 6}) {
            CAPTURE(p);
            CAPTURE(n);
            TorReport rep = compare_truncated(steenrod_inverted(p, 8), n, 8);
            CHECK(rep.pass);
        }
    // above the truncation the two differ
    RingPresentation r = steenrod_inverted(2, 8);
    TorTable cut = tor(BarModule::base_field(r), r, BarModule::ring(r, 2), 4);
    CHECK(cut.size() > 1);
}

TEST_CASE("bar differential squares to zero")
{
    for (int p : {2, 3}) {
        RingPresentation r = steenrod_inverted(p, 8);
        const BarModule k = BarModule::base_field(r);
        const BarModule full = BarModule::ring(r);
        for (int b = 0; b <= 7; ++b)
            for (int c = 0; c <= 6; ++c) {
                BarSlice s = build_bar_slice(k, r, full, b, c);
                for (std::size_t a = 2; a < s.d.size(); ++a)
                    CHECK(s.d[a - 1].compose(s.d[a]).is_zero());
                for (std::size_t a = 0; a < s.d.size(); ++a)
                    CHECK(s.d[a].cols() == static_cast<int>(s.words[a].size()));
            }
    }
}

TEST_CASE("unsupported rings are rejected")
{
    RingPresentation pre = steenrod_pre_inversion(7);
    CHECK_THROWS_AS(tor_kk(pre, 4), InvalidInput);
    GeneratorTable t;
    t.push_back({"u", {0, 0, 1}, Parity::even, GenKind::polynomial});
    RingPresentation unconnected(Prime(3), t, RelationMode::free);
    CHECK_THROWS_AS(tor_kk(unconnected, 4), InvalidInput);
    RingPresentation r = steenrod_inverted(3, 8);
    CHECK_THROWS_AS(BarModule(r, r, {}), InvalidInput);
}

TEST_CASE("Tor table formatting")
{
    TorTable t{{{0, 0, 0}, 1}, {{1, 1, 0}, 1}};
    CHECK(format_tor(t) == "0\t0\t0\t1\n1\t1\t0\t1\n");
}

TEST_CASE("Tor over one polynomial generator in low stems")
{
    RingPresentation r = one_generator(2, {"tau_0", {0, 1, 0}, Parity::odd, GenKind::polynomial});
    const BarModule k = BarModule::base_field(r);
    BarSlice one = build_bar_slice(k, r, k, 1, 0);
    REQUIRE(one.words.size() == 2);
    CHECK(one.words[0].empty());
    CHECK(one.words[1].size() == 1);
    TorTable t = tor_kk(r, 2);
    CHECK(t.at({1, 1, 0}) == 1);
    // [tau_0 | tau_0] is not a cycle and [tau_0^2] is its boundary
    CHECK_FALSE(t.count({2, 2, 0}));
    CHECK_FALSE(t.count({1, 2, 0}));
}

TEST_CASE("Tor over one exterior generator has the divided power class")
{
    RingPresentation r = one_generator(3, {"tau_0", {0, 1, 0}, Parity::odd, GenKind::exterior});
    TorTable t = tor_kk(r, 2);
    CHECK(t.at({2, 2, 0}) == 1);
}

TEST_CASE("Tor does not depend on the order of generators")
{
    RingPresentation r = steenrod_inverted(2, 8);
    std::vector<Generator> rev(r.table().all().rbegin(), r.table().all().rend());
    RingPresentation s(Prime(2), GeneratorTable(rev), RelationMode::p2_inverted);
    CHECK(tor_kk(r, 8) == tor_kk(s, 8));
    CHECK(tor(BarModule::base_field(r), r, BarModule::ring(r, 4), 6) ==
          tor(BarModule::base_field(s), s, BarModule::ring(s, 4), 6));
}
