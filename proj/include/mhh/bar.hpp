#pragma once

#include "mhh/algebra.hpp"
#include "mhh/linalg.hpp"

#include <map>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

namespace mhh {

// An R-algebra S given by images of R's generators (nullopt = 0), optionally truncated
// above an internal degree. Internal degree of a monomial is s + t.
class BarModule {
public:
    BarModule(RingPresentation s, const RingPresentation& r, std::vector<std::optional<Monomial>> images,
              std::optional<int> truncation = std::nullopt);

    // F_p through the augmentation
    static BarModule base_field(const RingPresentation& r);
    // R itself, or R with everything above internal degree n set to zero
    static BarModule ring(const RingPresentation& r, std::optional<int> truncation = std::nullopt);

    const RingPresentation& presentation() const { return s_; }
    std::optional<int> truncation() const { return truncation_; }
    std::vector<Monomial> basis(int degree) const;
    // phi(r) * x if left, else x * phi(r); dropped above the truncation
    PolyElement act(const Monomial& x, const Monomial& r, bool left) const;

private:
    RingPresentation s_;
    std::vector<std::optional<Monomial>> images_;
    std::optional<int> truncation_;
};

int internal_degree(const Monomial& m, const RingPresentation& pres);

// Normalized bar complex B(Q, R, M) restricted to internal bidegree (b, c).
struct BarSlice {
    int b = 0;
    int c = 0;
    // words[a][i] = {left id, middle ids..., right id}
    std::vector<std::vector<std::vector<int>>> words;
    std::vector<FpMatrix> d;  // d[a]: B_a -> B_{a-1}; d[0] is the zero map out of B_0
};

BarSlice build_bar_slice(const BarModule& q, const RingPresentation& r, const BarModule& m, int b, int c);

using TorTable = std::map<std::tuple<int, int, int>, int>;  // (a, b, c) -> dimension, nonzero only

TorTable tor(const BarModule& q, const RingPresentation& r, const BarModule& m, int b_max);

struct TorReport {
    bool pass = true;
    std::vector<std::string> discrepancies;
};

// Tor(F_p, R, R) is F_p in degree (0, 0, 0).
TorReport check_flatness(const RingPresentation& r, int b_max);
// Tor(F_p, R, R_{<=n}) agrees with Tor(F_p, R, R) for b <= n.
TorReport compare_truncated(const RingPresentation& r, int n, int b_max);

std::string format_tor(const TorTable& t);

}  // namespace mhh
