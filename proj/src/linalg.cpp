#include "mhh/linalg.hpp"

#include "mhh/error.hpp"

#include <algorithm>
#include <set>

namespace mhh {

Fp SparseVec::at(int i) const
{
    auto it = std::lower_bound(entries_.begin(), entries_.end(), i,
                               [](const std::pair<int, Fp>& e, int k) { return e.first < k; });
    return (it != entries_.end() && it->first == i) ? it->second : 0;
}

void SparseVec::push_back(int i, Fp v)
{
    if (v == 0)
        return;
    if (!entries_.empty() && entries_.back().first >= i)
        throw Error("SparseVec::push_back out of order");
    entries_.push_back({i, v});
}

void SparseVec::axpy(Fp c, const SparseVec& other, const Prime& p)
{
    if (c == 0 || other.empty())
        return;
    std::vector<std::pair<int, Fp>> out;
    out.reserve(entries_.size() + other.entries_.size());
    auto a = entries_.begin();
    auto b = other.entries_.begin();
    while (a != entries_.end() || b != other.entries_.end()) {
        if (b == other.entries_.end() || (a != entries_.end() && a->first < b->first)) {
            out.push_back(*a++);
        } else if (a == entries_.end() || b->first < a->first) {
            out.push_back({b->first, p.mul(c, b->second)});
            ++b;
        } else {
            Fp v = p.add(a->second, p.mul(c, b->second));
            if (v != 0)
                out.push_back({a->first, v});
            ++a;
            ++b;
        }
    }
    entries_ = std::move(out);
}

void SparseVec::scale(Fp c, const Prime& p)
{
    if (p.reduce(c) == 0) {
        entries_.clear();
        return;
    }
    for (auto& e : entries_)
        e.second = p.mul(e.second, c);
}

FpMatrix::FpMatrix(Prime p, int rows, int cols) : p_(p), rows_(rows), cols_(cols), cols_data_(cols)
{
    if (rows < 0 || cols < 0)
        throw InvalidInput("negative matrix dimension");
}

void FpMatrix::set(int r, int c, Fp v)
{
    if (r < 0 || r >= rows_ || c < 0 || c >= cols_)
        throw InvalidInput("matrix index out of range");
    SparseVec delta;
    delta.push_back(r, p_.reduce(v));
    Fp old = cols_data_[c].at(r);
    SparseVec& col = cols_data_[c];
    if (old != 0) {
        SparseVec rm;
        rm.push_back(r, p_.neg(old));
        col.axpy(1, rm, p_);
    }
    col.axpy(1, delta, p_);
}

void FpMatrix::set_col(int c, SparseVec v)
{
    if (c < 0 || c >= cols_)
        throw InvalidInput("column index out of range");
    if (!v.empty() && (v.entries().front().first < 0 || v.low() >= rows_))
        throw InvalidInput("column entry out of range");
    cols_data_[c] = std::move(v);
}

SparseVec FpMatrix::apply(const SparseVec& x) const
{
    SparseVec y;
    for (const auto& [j, v] : x.entries())
        y.axpy(v, cols_data_[j], p_);
    return y;
}

FpMatrix FpMatrix::compose(const FpMatrix& rhs) const
{
    if (cols_ != rhs.rows_)
        throw InvalidInput("matrix dimension mismatch in compose");
    FpMatrix out(p_, rows_, rhs.cols_);
    for (int c = 0; c < rhs.cols_; ++c)
        out.cols_data_[c] = apply(rhs.cols_data_[c]);
    return out;
}

bool FpMatrix::is_zero() const
{
    return std::all_of(cols_data_.begin(), cols_data_.end(), [](const SparseVec& v) { return v.empty(); });
}

namespace {

void check_unique(const std::vector<std::string>& labels, std::size_t n)
{
    if (labels.size() != n)
        throw InvalidInput("label count does not match dimension");
    std::set<std::string> seen(labels.begin(), labels.end());
    if (seen.size() != labels.size())
        throw InvalidInput("duplicate matrix labels");
}

}  // namespace

void FpMatrix::set_row_labels(std::vector<std::string> labels)
{
    check_unique(labels, rows_);
    row_labels_ = std::move(labels);
}

void FpMatrix::set_col_labels(std::vector<std::string> labels)
{
    check_unique(labels, cols_);
    col_labels_ = std::move(labels);
}

Reduction reduce_columns(const FpMatrix& m)
{
    const Prime& p = m.prime();
    Reduction red;
    red.reduced.reserve(m.cols());
    red.transform.reserve(m.cols());
    red.pivot_col.assign(m.rows(), -1);
    for (int j = 0; j < m.cols(); ++j) {
        SparseVec col = m.col(j);
        SparseVec v = SparseVec::unit(j);
        while (!col.empty()) {
            int k = red.pivot_col[col.low()];
            if (k < 0)
                break;
            const SparseVec& pk = red.reduced[k];
            Fp c = p.neg(p.mul(col.entries().back().second, p.inv(pk.entries().back().second)));
            col.axpy(c, pk, p);
            v.axpy(c, red.transform[k], p);
        }
        if (!col.empty()) {
            red.pivot_col[col.low()] = j;
            ++red.rank;
        }
        red.reduced.push_back(std::move(col));
        red.transform.push_back(std::move(v));
    }
    return red;
}

int rank(const FpMatrix& m)
{
    return reduce_columns(m).rank;
}

std::vector<SparseVec> kernel_basis(const FpMatrix& m)
{
    Reduction red = reduce_columns(m);
    std::vector<SparseVec> out;
    for (int j = 0; j < m.cols(); ++j)
        if (red.reduced[j].empty())
            out.push_back(std::move(red.transform[j]));
    return out;
}

std::vector<SparseVec> image_basis(const FpMatrix& m)
{
    Reduction red = reduce_columns(m);
    std::vector<SparseVec> out;
    for (int j = 0; j < m.cols(); ++j)
        if (!red.reduced[j].empty())
            out.push_back(std::move(red.reduced[j]));
    return out;
}

EchelonSpan::Reduced EchelonSpan::reduce(const SparseVec& v) const
{
    Reduced r{v, {}};
    while (!r.residual.empty()) {
        auto it = by_low_.find(r.residual.low());
        if (it == by_low_.end())
            break;
        const SparseVec& b = vecs_[it->second];
        Fp c = p_.mul(r.residual.entries().back().second, p_.inv(b.entries().back().second));
        r.residual.axpy(p_.neg(c), b, p_);
        r.tag.axpy(c, tags_[it->second], p_);
    }
    return r;
}

bool EchelonSpan::insert(const SparseVec& v, const SparseVec& tag)
{
    Reduced r = reduce(v);
    if (r.residual.empty())
        return false;
    SparseVec t = tag;
    t.axpy(p_.neg(1), r.tag, p_);
    by_low_[r.residual.low()] = static_cast<int>(vecs_.size());
    vecs_.push_back(std::move(r.residual));
    tags_.push_back(std::move(t));
    return true;
}

Subquotient::Subquotient(Prime p, int ambient_dim) : p_(p), ambient_(ambient_dim), span_(p), bspan_(p) {}

std::string Subquotient::label(int i) const
{
    const auto& r = reps_.at(i);
    if (r.unit && *r.unit < static_cast<int>(labels_.size()))
        return labels_[*r.unit];
    return "";
}

SparseVec Subquotient::project(const SparseVec& v) const
{
    auto r = span_.reduce(v);
    if (!r.residual.empty())
        throw InconsistentDifferential("vector is not a cycle of the subquotient");
    return r.tag;
}

bool Subquotient::is_boundary(const SparseVec& v) const
{
    return bspan_.contains(v);
}

void Subquotient::add_boundary(const SparseVec& b)
{
    if (!reps_.empty())
        throw Error("boundaries must be added before representatives");
    if (span_.insert(b, {})) {
        bspan_.insert(b, {});
        boundaries_.push_back(b);
    }
}

void Subquotient::add_rep(Representative r)
{
    SparseVec tag = SparseVec::unit(static_cast<int>(reps_.size()));
    if (!span_.insert(r.vec, tag))
        throw Error("representative is dependent on the existing span");
    reps_.push_back(std::move(r));
}

Subquotient homology(const FpMatrix& d_in, const FpMatrix& d_out)
{
    const Prime& p = d_out.prime();
    if (d_in.rows() != d_out.cols())
        throw InvalidInput("homology: d_in rows != d_out cols");
    const int n = d_out.cols();
    for (int j = 0; j < d_in.cols(); ++j)
        if (!d_out.apply(d_in.col(j)).empty())
            throw InconsistentDifferential("d_out * d_in != 0 at source column " + std::to_string(j));

    Subquotient h(p, n);
    if (!d_out.col_labels().empty())
        h.set_labels(d_out.col_labels());
    else if (!d_in.row_labels().empty())
        h.set_labels(d_in.row_labels());

    for (auto& b : image_basis(d_in))
        h.add_boundary(b);
    const std::vector<SparseVec> ker = kernel_basis(d_out);
    const int target = static_cast<int>(ker.size()) - static_cast<int>(h.boundaries().size());

    EchelonSpan probe(p);
    for (const auto& b : h.boundaries())
        probe.insert(b, {});
    for (int i = 0; i < n && h.dim() < target; ++i) {
        if (!d_out.col(i).empty())
            continue;
        SparseVec e = SparseVec::unit(i);
        if (probe.insert(e, {}))
            h.add_rep({e, i});
    }
    for (const auto& k : ker) {
        if (h.dim() >= target)
            break;
        auto r = probe.reduce(k);
        if (r.residual.empty())
            continue;
        probe.insert(r.residual, {});
        h.add_rep({r.residual, std::nullopt});
    }
    if (h.dim() != target)
        throw Error("homology: representative count mismatch");
    return h;
}

}  // namespace mhh
