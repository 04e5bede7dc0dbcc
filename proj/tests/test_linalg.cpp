#include "mhh/error.hpp"
#include "mhh/linalg.hpp"

#include "doctest.h"

#include <random>

using namespace mhh;

namespace {

using Dense = std::vector<std::vector<long long>>;  // row-major

// textbook row reduction on a dense copy
int dense_rank(Dense a, int p)
{
    const int rows = static_cast<int>(a.size());
    const int cols = rows ? static_cast<int>(a[0].size()) : 0;
    int r = 0;
    for (int c = 0; c < cols && r < rows; ++c) {
        int piv = -1;
        for (int i = r; i < rows; ++i)
            if (a[i][c] % p) {
                piv = i;
                break;
            }
        if (piv < 0)
            continue;
        std::swap(a[r], a[piv]);
        long long inv = 1;
        while ((a[r][c] * inv) % p != 1)
            ++inv;
        for (auto& x : a[r])
            x = x * inv % p;
        for (int i = 0; i < rows; ++i)
            if (i != r && a[i][c] % p) {
                long long f = a[i][c];
                for (int j = 0; j < cols; ++j)
                    a[i][j] = ((a[i][j] - f * a[r][j]) % p + p) % p;
            }
        ++r;
    }
    return r;
}

Dense random_dense(std::mt19937& rng, int rows, int cols, int p, double density)
{
    std::bernoulli_distribution nz(density);
    std::uniform_int_distribution<int> val(1, p - 1);
    Dense a(rows, std::vector<long long>(cols, 0));
    for (auto& row : a)
        for (auto& x : row)
            if (nz(rng))
                x = val(rng);
    return a;
}

FpMatrix to_sparse(const Dense& a, int p, int cols)
{
    FpMatrix m(Prime(p), static_cast<int>(a.size()), cols);
    for (std::size_t i = 0; i < a.size(); ++i)
        for (int j = 0; j < cols; ++j)
            if (a[i][j])
                m.set(static_cast<int>(i), j, static_cast<Fp>(a[i][j]));
    return m;
}

}  // namespace

TEST_CASE("rank and kernel agree with dense elimination")
{
    for (int p : {2, 3, 5}) {
        std::mt19937 rng(7 * p);
        for (int k = 0; k < 1000; ++k) {
            const int rows = std::uniform_int_distribution<int>(0, 9)(rng);
            const int cols = std::uniform_int_distribution<int>(0, 9)(rng);
            Dense a = random_dense(rng, rows, cols, p, 0.35);
            FpMatrix m = to_sparse(a, p, cols);
            const int r = dense_rank(a, p);
            REQUIRE(rank(m) == r);
            auto ker = kernel_basis(m);
            CHECK(static_cast<int>(ker.size()) == cols - r);
            for (const auto& v : ker)
                CHECK(m.apply(v).empty());
            CHECK(static_cast<int>(image_basis(m).size()) == r);
        }
    }
}

TEST_CASE("homology dimension is kernel minus image")
{
    for (int p : {2, 3, 5}) {
        std::mt19937 rng(31 * p);
        for (int k = 0; k < 1000; ++k) {
            const int a = std::uniform_int_distribution<int>(0, 6)(rng);
            const int x = std::uniform_int_distribution<int>(0, 8)(rng);
            const int y = std::uniform_int_distribution<int>(0, 6)(rng);
            // d_out random, d_in built from kernel vectors of d_out so that d_out d_in = 0
            Dense out = random_dense(rng, y, x, p, 0.3);
            FpMatrix d_out = to_sparse(out, p, x);
            auto ker = kernel_basis(d_out);
            FpMatrix d_in(Prime(p), x, a);
            std::uniform_int_distribution<int> coef(0, p - 1);
            for (int j = 0; j < a; ++j) {
                SparseVec col;
                for (const auto& v : ker)
                    col.axpy(static_cast<Fp>(coef(rng)), v, Prime(p));
                d_in.set_col(j, col);
            }
            Subquotient h = homology(d_in, d_out);
            CHECK(h.dim() == static_cast<int>(ker.size()) - rank(d_in));
            for (const auto& rep : h.reps()) {
                CHECK(d_out.apply(rep.vec).empty());
                CHECK_FALSE(h.is_boundary(rep.vec));
                if (rep.unit)
                    CHECK(rep.vec == SparseVec::unit(*rep.unit));
            }
            for (int j = 0; j < a; ++j)
                CHECK(h.project(d_in.col(j)).empty());
        }
    }
}

TEST_CASE("homology keeps unit representatives and their labels")
{
    Prime p(3);
    FpMatrix d_in(p, 3, 1);
    d_in.set(0, 0, 1);
    d_in.set(1, 0, 1);
    FpMatrix d_out(p, 1, 3);
    d_out.set(0, 2, 1);
    d_out.set_col_labels({"a", "b", "c"});
    Subquotient h = homology(d_in, d_out);
    REQUIRE(h.dim() == 1);
    CHECK(h.reps()[0].unit == 0);
    CHECK(h.label(0) == "a");
    // b = (a + b) - a, so b is minus the representative
    CHECK(h.project(SparseVec::unit(1)) == [] {
        SparseVec v;
        v.push_back(0, 2);
        return v;
    }());
    CHECK_THROWS_AS(h.project(SparseVec::unit(2)), InconsistentDifferential);
}

TEST_CASE("homology of zero maps is the whole space")
{
    Prime p(5);
    FpMatrix d_in(p, 4, 0);
    FpMatrix d_out(p, 0, 4);
    d_out.set_col_labels({"w", "x", "y", "z"});
    Subquotient h = homology(d_in, d_out);
    CHECK(h.dim() == 4);
    for (int i = 0; i < 4; ++i)
        CHECK(h.reps()[i].unit == i);
    CHECK(h.label(3) == "z");
}

TEST_CASE("inconsistent differentials are rejected")
{
    Prime p(2);
    FpMatrix d_in(p, 2, 1);
    d_in.set(0, 0, 1);
    FpMatrix d_out(p, 1, 2);
    d_out.set(0, 0, 1);
    CHECK_THROWS_AS(homology(d_in, d_out), InconsistentDifferential);
    FpMatrix m(p, 2, 2);
    CHECK_THROWS_AS(m.set_row_labels({"u", "u"}), InvalidInput);
    CHECK_THROWS_AS(m.set(2, 0, 1), InvalidInput);
    CHECK_THROWS_AS(FpMatrix(p, 1, 2).compose(FpMatrix(p, 3, 1)), InvalidInput);
}

TEST_CASE("field arithmetic")
{
    for (int p : {2, 3, 5, 7, 11}) {
        Prime P(p);
        for (Fp a = 1; a < static_cast<Fp>(p); ++a)
            CHECK(P.mul(a, P.inv(a)) == 1);
        CHECK(P.reduce(-1) == static_cast<Fp>(p - 1));
        CHECK(P.pow(2, p - 1) == (p == 2 ? 0u : 1u));
    }
    CHECK(valuation(72, 2) == 3);
    CHECK(valuation(54, 3) == 3);
    CHECK_THROWS_AS(Prime(2).inv(0), Error);
}
