#pragma once

#include "mhh/fp.hpp"

#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace mhh {

// Sparse vector over F_p: strictly increasing indices, nonzero values.
class SparseVec {
public:
    SparseVec() = default;
    static SparseVec unit(int i) { SparseVec v; v.entries_.push_back({i, 1}); return v; }

    bool empty() const { return entries_.empty(); }
    std::size_t nnz() const { return entries_.size(); }
    const std::vector<std::pair<int, Fp>>& entries() const { return entries_; }
    int low() const { return entries_.back().first; }  // largest index; requires !empty()
    Fp at(int i) const;

    // appends in increasing index order; zero values are skipped
    void push_back(int i, Fp v);
    // this += c * other
    void axpy(Fp c, const SparseVec& other, const Prime& p);
    void scale(Fp c, const Prime& p);

    bool operator==(const SparseVec&) const = default;

private:
    std::vector<std::pair<int, Fp>> entries_;
};

// Column-major sparse matrix over F_p with optional row/column labels.
class FpMatrix {
public:
    FpMatrix(Prime p, int rows, int cols);

    const Prime& prime() const { return p_; }
    int rows() const { return rows_; }
    int cols() const { return cols_; }

    void set(int r, int c, Fp v);
    Fp at(int r, int c) const { return cols_data_[c].at(r); }
    const SparseVec& col(int c) const { return cols_data_[c]; }
    void set_col(int c, SparseVec v);

    SparseVec apply(const SparseVec& x) const;  // this * x
    FpMatrix compose(const FpMatrix& rhs) const;  // this * rhs
    bool is_zero() const;

    void set_row_labels(std::vector<std::string> labels);
    void set_col_labels(std::vector<std::string> labels);
    const std::vector<std::string>& row_labels() const { return row_labels_; }
    const std::vector<std::string>& col_labels() const { return col_labels_; }

private:
    Prime p_;
    int rows_;
    int cols_;
    std::vector<SparseVec> cols_data_;
    std::vector<std::string> row_labels_;
    std::vector<std::string> col_labels_;
};

// Column reduction with the lowest-nonzero pivot rule, scanning columns left to right.
struct Reduction {
    std::vector<SparseVec> reduced;    // R = D V
    std::vector<SparseVec> transform;  // columns of V
    std::vector<int> pivot_col;        // column index of pivot row r, or -1
    int rank = 0;
};

Reduction reduce_columns(const FpMatrix& m);
int rank(const FpMatrix& m);
std::vector<SparseVec> kernel_basis(const FpMatrix& m);
std::vector<SparseVec> image_basis(const FpMatrix& m);

// Echelon span keyed by lowest index. Each stored vector carries a tag: its class as a combination
// of designated representatives, modulo the untagged part.
class EchelonSpan {
public:
    explicit EchelonSpan(Prime p) : p_(p) {}

    struct Reduced {
        SparseVec residual;
        SparseVec tag;
    };
    Reduced reduce(const SparseVec& v) const;
    // returns true if v was independent
    bool insert(const SparseVec& v, const SparseVec& tag);
    std::size_t size() const { return vecs_.size(); }
    bool contains(const SparseVec& v) const { return reduce(v).residual.empty(); }

private:
    Prime p_;
    std::vector<SparseVec> vecs_;
    std::vector<SparseVec> tags_;
    std::unordered_map<int, int> by_low_;
};

struct Representative {
    SparseVec vec;              // in ambient coordinates
    std::optional<int> unit;    // set when vec is the ambient basis vector e_unit
};

// ker(d_out) / im(d_in) with chosen representatives.
class Subquotient {
public:
    Subquotient(Prime p, int ambient_dim);

    int ambient_dim() const { return ambient_; }
    int dim() const { return static_cast<int>(reps_.size()); }
    const std::vector<Representative>& reps() const { return reps_; }
    const std::vector<SparseVec>& boundaries() const { return boundaries_; }
    const std::vector<std::string>& labels() const { return labels_; }
    // label of representative i: the ambient label of a unit representative, "" otherwise
    std::string label(int i) const;

    // Coordinates of a cycle in the representative basis; throws if v is not a cycle.
    SparseVec project(const SparseVec& v) const;
    bool is_boundary(const SparseVec& v) const;

    void add_boundary(const SparseVec& b);
    void add_rep(Representative r);
    void set_labels(std::vector<std::string> l) { labels_ = std::move(l); }

private:
    Prime p_;
    int ambient_;
    std::vector<SparseVec> boundaries_;
    std::vector<Representative> reps_;
    std::vector<std::string> labels_;
    EchelonSpan span_;
    EchelonSpan bspan_;
};

// Homology at the middle of A --d_in--> X --d_out--> Y. Unit vectors are preferred as
// representatives, in ambient order; the remaining dimension is filled from a kernel basis.
// Throws InconsistentDifferential if d_out * d_in != 0.
Subquotient homology(const FpMatrix& d_in, const FpMatrix& d_out);

}  // namespace mhh
