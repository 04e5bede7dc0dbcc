#pragma once

#include "mhh/algebra.hpp"
#include "mhh/linalg.hpp"

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

namespace mhh {

// Rectangle s <= s_max, t <= t_max, optionally cut by s + t <= n_max.
struct Window {
    int s_max = 0;
    int t_max = 0;
    std::optional<int> n_max;
    int r_max = 2;

    bool contains(int s, int t) const;
    // Some d^r with 2 <= r <= r_max into or out of (s, t) crosses the boundary.
    bool is_edge(int s, int t) const;
    // pages beyond this cannot carry a differential inside the window
    int last_page() const;
};

// The E_2 term: bases of every slot in the window, shared by all later pages.
struct E2Context {
    struct Slot {
        int s = 0;
        int t = 0;
        bool edge = false;
        std::vector<Monomial> basis;  // coefficient 1, no tau, canonical order
        std::vector<std::string> labels;
        std::vector<int> weights;
        std::unordered_map<Exponents, int, ExponentsHash> index;
    };

    E2Context(RingPresentation horizontal, RingPresentation vertical, Window window);

    RingPresentation horizontal;
    RingPresentation vertical;
    RingPresentation algebra;  // vertical (x) horizontal
    Window window;
    std::vector<Slot> slots;

    int slot_id(int s, int t) const;  // -1 outside the window
    const Slot& slot(int s, int t) const;

private:
    std::vector<int> grid_;  // (s_max + 1) x (t_max + 1)
};

// Generator-level description of a rule, by name, independent of a particular table.
struct RuleSpec {
    std::string name;
    std::vector<std::pair<std::string, int>> atom;
    int page = 2;
    std::vector<std::pair<std::string, int>> target;
    long long coeff = 1;
};

struct Rule {
    std::string name;
    Monomial atom;
    int page = 2;
    PolyElement target;  // tau exponents solved so the weight matches the atom
};

// Atoms with known differentials. A generator that is not itself an atom is inert.
class RuleSet {
public:
    explicit RuleSet(const RingPresentation& algebra);

    void add(const RuleSpec& spec);
    void add(std::string name, Monomial atom, int page, PolyElement target);
    const std::vector<Rule>& rules() const { return rules_; }
    const std::vector<RuleSpec>& specs() const { return specs_; }
    bool inert(std::size_t gen) const { return inert_[gen]; }
    const RingPresentation& algebra() const { return algebra_; }

private:
    RingPresentation algebra_;
    std::vector<Rule> rules_;
    std::vector<RuleSpec> specs_;
    std::vector<bool> inert_;
};

// Evaluates d^r on monomials by splitting them into atoms and applying the Leibniz rule.
class DifferentialEvaluator {
public:
    explicit DifferentialEvaluator(const RuleSet& rules);

    // nullopt when no factorization into atoms of page >= r and inert generators exists
    std::optional<PolyElement> evaluate(const Monomial& m, int r) const;
    // throws InconsistentRules when unresolved
    PolyElement operator()(const PolyElement& x, int r) const;

    const RuleSet& rules() const { return rules_; }
    const RingPresentation& algebra() const { return rules_.algebra(); }

private:
    struct Key {
        Exponents exps;
        int r;
        bool operator==(const Key&) const = default;
    };
    struct KeyHash {
        std::size_t operator()(const Key& k) const { return ExponentsHash{}(k.exps) * 31 + k.r; }
    };
    std::optional<std::vector<int>> cover(const Exponents& e, int r) const;

    const RuleSet& rules_;
    std::vector<int> order_;  // rule indices by page descending
    mutable std::unordered_map<Key, std::optional<PolyElement>, KeyHash> cache_;
};

// E_r: per slot, a subquotient of the E_2 slot.
struct Page {
    int r = 2;
    std::shared_ptr<const E2Context> ctx;
    std::vector<Subquotient> slots;

    int dim(int s, int t) const;
    const Subquotient& at(int s, int t) const;
    // monomial label of representative i, or a bracketed combination
    std::string label(int slot, int i) const;
};

struct LogEntry {
    int page = 0;
    int s = 0;
    int t = 0;
    std::string source;
    std::optional<Monomial> source_monomial;
    PolyElement target;

    Fp coefficient() const { return target.terms().front().coeff; }
    int tau_exp() const { return target.terms().front().tau_exp; }
};

enum class Role { permanent, source, target, synthetic };

struct Fate {
    Role role = Role::permanent;
    int page = 0;
    std::optional<Exponents> partner;
    Fp coefficient = 0;
    bool operator==(const Fate&) const = default;
};

std::string role_name(Role r);

struct Unresolved {
    int page;
    int s;
    int t;
    std::string source;
};

struct TurnResult {
    Page next;
    std::vector<LogEntry> log;
    std::vector<Unresolved> unresolved;
    // (slot, basis index, fate) for monomials that died on this page
    std::vector<std::tuple<int, int, Fate>> deaths;
};

Page build_E2(const RingPresentation& horizontal, const RingPresentation& vertical, const Window& window);

// Strict mode throws on a differential that cannot be evaluated from a non-edge slot.
TurnResult turn_page(const Page& page, const DifferentialEvaluator& d, bool strict = true);

struct RunResult {
    Page final_page;
    std::vector<LogEntry> log;
    std::vector<Unresolved> unresolved;
    std::vector<std::vector<Fate>> fates;  // [slot][basis index]
};

// Turns pages r = E2.r, ..., up to and including last_page (default: window.last_page()).
RunResult run(const Page& e2, const RuleSet& rules, bool strict = true, std::optional<int> last_page = std::nullopt);

struct Verdict {
    bool pass = false;
    int checked_slots = 0;
    std::vector<std::string> failures;
};

Verdict check_convergence(const Page& final_page);

// ---- presets ----

std::vector<RuleSpec> mhh_rule_specs(int p, const Window& w, const RingPresentation& vertical);

struct Setup {
    std::shared_ptr<const E2Context> ctx;
    RuleSet rules;
};

Setup mhh_setup(int p, const Window& w);

// ---- closed-form fates ----

Fate oracle_p2(const Monomial& m, const RingPresentation& algebra);
Fate oracle_odd(const Monomial& m, const RingPresentation& algebra);

struct CrossCheck {
    int checked = 0;
    std::vector<std::string> mismatches;
};

CrossCheck cross_check(const E2Context& ctx, const RunResult& run);

// ---- solving for the horizontal algebra ----

struct TransgressionTable {
    std::vector<std::string> chain;  // tau_0, tau_1, ...: suspension images linked by p-th powers
    std::set<std::string> kernel;    // xi_i: annihilated by the suspension

    static TransgressionTable for_vertical(const RingPresentation& vertical);
};

struct SolveResult {
    bool solved = false;
    std::string failure;
    std::vector<Generator> generators;
    std::vector<RuleSpec> rules;
    std::vector<std::string> steps;
};

SolveResult solve_horizontal(const RingPresentation& vertical, const TransgressionTable& table, const Window& window);

// ---- log formatting ----

std::string format_record(const LogEntry& e, const RingPresentation& algebra);
std::vector<std::string> log_records(const std::vector<LogEntry>& log, const RingPresentation& algebra);

}  // namespace mhh
