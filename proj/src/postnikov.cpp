#include "mhh/postnikov.hpp"

#include "mhh/error.hpp"

#include <fmt/format.h>

#include <algorithm>

namespace mhh {

CellPresentation::CellPresentation(std::vector<Cell> cells) : cells_(std::move(cells))
{
    std::sort(cells_.begin(), cells_.end());
}

CellPresentation truncate(const CellPresentation& y, int n)
{
    if (n == kPlusInfinity)
        return y;
    std::vector<Cell> out;
    for (const auto& c : y.cells())
        if (c.p <= n)
            out.push_back(c);
    return CellPresentation(std::move(out));
}

CellPresentation connective_cover(const CellPresentation& y, int n)
{
    std::vector<Cell> out;
    for (const auto& c : y.cells())
        if (c.p >= n)
            out.push_back(c);
    return CellPresentation(std::move(out));
}

FiberSlice fiber(const CellPresentation& y, int n)
{
    FiberSlice f{n, {}};
    for (const auto& c : y.cells())
        if (c.p == n)
            f.weights.push_back(c.q);
    std::sort(f.weights.begin(), f.weights.end());
    return f;
}

CellPresentation as_cells(const FiberSlice& f)
{
    std::vector<Cell> out;
    for (int w : f.weights)
        out.push_back({f.n, w});
    return CellPresentation(std::move(out));
}

HomotopyTable homotopy(const CellPresentation& y)
{
    HomotopyTable h;
    for (const auto& c : y.cells())
        ++h[{c.p, c.q}];
    return h;
}

CellPresentation cells_from_algebra(const RingPresentation& pres, int max_degree)
{
    std::vector<Cell> out;
    for (int d = 0; d <= max_degree; ++d)
        for (const auto& m : enumerate_basis(pres, d, Axis::total))
            out.push_back({d, tridegree(m, pres).w});
    return CellPresentation(std::move(out));
}

namespace {

int count(const HomotopyTable& h, int i, int w)
{
    auto it = h.find({i, w});
    return it == h.end() ? 0 : it->second;
}

// multiset difference a \ b; throws if b is not contained in a
CellPresentation difference(const CellPresentation& a, const CellPresentation& b)
{
    std::vector<Cell> out;
    std::set_difference(a.cells().begin(), a.cells().end(), b.cells().begin(), b.cells().end(),
                        std::back_inserter(out));
    if (out.size() + b.size() != a.size())
        throw Error("truncation is not a sub-multiset");
    return CellPresentation(std::move(out));
}

}  // namespace

IdentityReport check_identities(const CellPresentation& y, int n)
{
    IdentityReport rep;
    auto fail = [&](std::string s) {
        rep.pass = false;
        rep.violations.push_back(std::move(s));
    };
    const HomotopyTable hy = homotopy(y);
    int lo = 0, hi = 0;
    std::vector<int> weights;
    for (const auto& c : y.cells()) {
        lo = std::min(lo, c.p);
        hi = std::max(hi, c.p);
        weights.push_back(c.q);
    }
    std::sort(weights.begin(), weights.end());
    weights.erase(std::unique(weights.begin(), weights.end()), weights.end());
    // every count vanishes outside the cell range
    lo -= 1;
    hi += 1;

    const HomotopyTable ht = homotopy(truncate(y, n));
    const HomotopyTable hc = homotopy(connective_cover(y, n));
    const CellPresentation layer = difference(truncate(y, n), truncate(y, n - 1));
    const FiberSlice fib = fiber(y, n);
    if (!(layer == as_cells(fib)))
        fail(fmt::format("n={}: fiber disagrees with the difference of consecutive truncations", n));
    const HomotopyTable hf = homotopy(as_cells(fib));

    for (int i = lo; i <= hi; ++i) {
        for (int w : weights) {
            const int py = count(hy, i, w);
            // truncation: iso below n+1, zero above
            if (i <= n && count(ht, i, w) != py)
                fail(fmt::format("n={}: pi_({},{}) of the truncation is {}, expected {}", n, i, w, count(ht, i, w), py));
            if (i > n && count(ht, i, w) != 0)
                fail(fmt::format("n={}: truncation has pi_({},{}) != 0", n, i, w));
            // cover: iso from n up, zero below
            if (i >= n && count(hc, i, w) != py)
                fail(fmt::format("n={}: pi_({},{}) of the cover is {}, expected {}", n, i, w, count(hc, i, w), py));
            if (i < n && count(hc, i, w) != 0)
                fail(fmt::format("n={}: cover has pi_({},{}) != 0", n, i, w));
            // fiber: concentrated in degree n, equal to pi_n
            if (i != n && count(hf, i, w) != 0)
                fail(fmt::format("n={}: fiber has pi_({},{}) != 0", n, i, w));
            if (i == n && count(hf, i, w) != py)
                fail(fmt::format("n={}: fiber pi_({},{}) is {}, expected {}", n, i, w, count(hf, i, w), py));
        }
    }
    return rep;
}

nlohmann::json to_json(const CellPresentation& y)
{
    nlohmann::json j;
    j["cells"] = nlohmann::json::array();
    for (const auto& c : y.cells())
        j["cells"].push_back({c.p, c.q});
    return j;
}

CellPresentation cells_from_json(const nlohmann::json& j)
{
    try {
        std::vector<Cell> cells;
        for (const auto& c : j.at("cells"))
            cells.push_back({c.at(0).get<int>(), c.at(1).get<int>()});
        return CellPresentation(std::move(cells));
    } catch (const nlohmann::json::exception& e) {
        throw InvalidInput(std::string("malformed cell presentation: ") + e.what());
    }
}

}  // namespace mhh
