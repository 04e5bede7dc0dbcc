#pragma once

#include "mhh/fp.hpp"

#include "json.hpp"

#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

namespace mhh {

// (s, t, w): filtration, stem contribution and motivic weight.
struct TriDegree {
    int s = 0;
    int t = 0;
    int w = 0;

    TriDegree operator+(const TriDegree& o) const { return {s + o.s, t + o.t, w + o.w}; }
    TriDegree operator-(const TriDegree& o) const { return {s - o.s, t - o.t, w - o.w}; }
    TriDegree operator*(int k) const { return {s * k, t * k, w * k}; }
    bool operator==(const TriDegree&) const = default;
    int total() const { return s + t; }
};

// The invertible class tau of the coefficient field lives here.
inline constexpr TriDegree kTauDegree{0, 0, -1};

enum class Parity { even, odd };
enum class GenKind { polynomial, exterior, truncated };

enum class RelationMode {
    p2_pre_inversion,  // tau_i^2 = tau * xi_{i+1}
    p2_inverted,       // everything polynomial
    odd_inverted,      // tau_i exterior, xi_i polynomial
    free,              // free graded-commutative
};

struct Generator {
    std::string name;
    TriDegree degree;
    Parity parity = Parity::even;
    GenKind kind = GenKind::polynomial;
};

class GeneratorTable {
public:
    GeneratorTable() = default;
    explicit GeneratorTable(std::vector<Generator> gens);

    void push_back(Generator g);
    std::size_t size() const { return gens_.size(); }
    const Generator& operator[](std::size_t i) const { return gens_[i]; }
    std::optional<int> index_of(const std::string& name) const;
    const std::vector<Generator>& all() const { return gens_; }

private:
    std::vector<Generator> gens_;
    std::unordered_map<std::string, int> index_;
};

using Exponents = std::vector<int>;

// coeff * tau^tau_exp * prod gen_i^exps[i], exponents indexed by table position.
struct Monomial {
    Fp coeff = 1;
    Exponents exps;
    int tau_exp = 0;

    bool operator==(const Monomial&) const = default;
};

struct ExponentsHash {
    std::size_t operator()(const Exponents& e) const;
};

// Canonical order: lexicographic on exponent vectors, the last generator most significant.
bool exps_less(const Exponents& a, const Exponents& b);

class RingPresentation {
public:
    RingPresentation(Prime prime, GeneratorTable table, RelationMode mode);

    const Prime& prime() const { return prime_; }
    const GeneratorTable& table() const { return table_; }
    RelationMode mode() const { return mode_; }
    std::size_t num_gens() const { return table_.size(); }

    // index of the generator a truncated generator squares to, -1 otherwise
    int square_target(std::size_t i) const { return square_target_[i]; }
    bool is_odd(std::size_t i) const { return table_[i].parity == Parity::odd; }

    Monomial unit() const;
    Monomial generator(const std::string& name, int exponent = 1) const;
    // product of name^exp terms, e.g. {{"mu_0", 3}, {"tau_1", 1}}; must already be in normal form
    Monomial monomial(const std::vector<std::pair<std::string, int>>& factors) const;

private:
    Prime prime_;
    GeneratorTable table_;
    RelationMode mode_;
    std::vector<int> square_target_;
};

// Homogeneous element: terms with distinct exponent vectors, sorted canonically, nonzero coefficients.
class PolyElement {
public:
    PolyElement() = default;
    explicit PolyElement(Monomial m);

    bool is_zero() const { return terms_.empty(); }
    const std::vector<Monomial>& terms() const { return terms_; }

    void add_term(const Monomial& m, const Prime& p);
    void add(const PolyElement& other, const Prime& p);
    PolyElement scaled(Fp c, const Prime& p) const;

    bool operator==(const PolyElement&) const = default;

private:
    std::vector<Monomial> terms_;
};

struct RawFactor {
    std::string name;
    int exponent = 1;
};

// An unnormalized, ordered product.
struct RawProduct {
    long long coeff = 1;
    std::vector<RawFactor> factors;
    int tau_exp = 0;
};

PolyElement normalize(const RawProduct& raw, const RingPresentation& pres);

// nullopt when the product vanishes
std::optional<Monomial> multiply(const Monomial& a, const Monomial& b, const RingPresentation& pres);
PolyElement multiply(const PolyElement& a, const PolyElement& b, const RingPresentation& pres);

TriDegree tridegree(const Monomial& m, const RingPresentation& pres);
TriDegree tridegree(const PolyElement& x, const RingPresentation& pres);  // throws on zero

// (s + t) mod 2
int parity(const Monomial& m, const RingPresentation& pres);

enum class Axis { filtration, stem, total };

// Normal-form monomials (coefficient 1, no tau) of the given degree along axis, in canonical order.
// Generators of degree 0 along the axis are excluded.
std::vector<Monomial> enumerate_basis(const RingPresentation& pres, int degree, Axis axis);

std::string to_string(const Monomial& m, const RingPresentation& pres, bool with_coeff = true);
std::string to_string(const PolyElement& x, const RingPresentation& pres);

// ---- presets ----

// Vertical algebra A(p)[tau^-1]: tau_i, xi_i with t-degree at most t_max.
RingPresentation steenrod_inverted(int p, int t_max);
// p = 2 before inverting tau: tau_i^2 = tau xi_{i+1}.
RingPresentation steenrod_pre_inversion(int t_max);
// F_p[mu_0], mu_0 in (2, 0, 0).
RingPresentation horizontal_mu(int p);
RingPresentation polynomial_horizontal(int p, const std::vector<Generator>& gens);
// Graded tensor product; vertical generators come first.
RingPresentation tensor(const RingPresentation& vertical, const RingPresentation& horizontal);

// Image of a pre-inversion monomial in the inverted algebra with the same generator names.
Monomial invert_tau(const Monomial& m, const RingPresentation& from, const RingPresentation& to);

// ---- serialization ----
nlohmann::json to_json(const RingPresentation& pres);
RingPresentation presentation_from_json(const nlohmann::json& j);
std::string relation_mode_name(RelationMode m);
RelationMode relation_mode_from_name(const std::string& name);

}  // namespace mhh
