#pragma once

#include "mhh/algebra.hpp"

#include "json.hpp"

#include <climits>
#include <map>
#include <string>
#include <vector>

namespace mhh {

// A cell of homotopy degree p and weight q.
struct Cell {
    int p = 0;
    int q = 0;
    auto operator<=>(const Cell&) const = default;
};

// Multiset of cells, kept sorted.
class CellPresentation {
public:
    CellPresentation() = default;
    explicit CellPresentation(std::vector<Cell> cells);

    const std::vector<Cell>& cells() const { return cells_; }
    std::size_t size() const { return cells_.size(); }
    bool operator==(const CellPresentation&) const = default;

private:
    std::vector<Cell> cells_;
};

inline constexpr int kPlusInfinity = INT_MAX;

struct FiberSlice {
    int n = 0;
    std::vector<int> weights;  // sorted, with multiplicity
};

using HomotopyTable = std::map<std::pair<int, int>, int>;  // (degree, weight) -> count

// Cells of degree <= n; n = kPlusInfinity returns the input.
CellPresentation truncate(const CellPresentation& y, int n);
// Cells of degree >= n.
CellPresentation connective_cover(const CellPresentation& y, int n);
// Fiber of the map from the n-th to the (n-1)-st truncation: the cells of degree n.
FiberSlice fiber(const CellPresentation& y, int n);
CellPresentation as_cells(const FiberSlice& f);
HomotopyTable homotopy(const CellPresentation& y);

// One cell per normal-form monomial of total degree <= max_degree, at (s + t, w).
CellPresentation cells_from_algebra(const RingPresentation& pres, int max_degree);

struct IdentityReport {
    bool pass = true;
    std::vector<std::string> violations;
};

// Checks, at level n, the standard identities relating truncations, covers, fibers and
// homotopy counts. The cofiber of the truncation tower is computed independently as a
// multiset difference and compared against fiber().
IdentityReport check_identities(const CellPresentation& y, int n);

nlohmann::json to_json(const CellPresentation& y);
CellPresentation cells_from_json(const nlohmann::json& j);

}  // namespace mhh
