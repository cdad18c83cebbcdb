#include "twistlab/matrix.hpp"

namespace twistlab {

Matrix Matrix::identity(FieldSpec f, int n) {
    Matrix m(f, n, n);
    for (int i = 0; i < n; ++i) m.at(i, i) = Scalar::one(f);
    return m;
}

Matrix Matrix::transpose() const {
    Matrix t(field_, cols_, rows_);
    for (int i = 0; i < rows_; ++i)
        for (int j = 0; j < cols_; ++j) t.at(j, i) = at(i, j);
    return t;
}

Matrix Matrix::mul(const Matrix& o) const {
    if (cols_ != o.rows_) throw std::invalid_argument("Matrix::mul: dimension mismatch");
    Matrix r(field_, rows_, o.cols_);
    for (int i = 0; i < rows_; ++i)
        for (int k = 0; k < cols_; ++k) {
            const Scalar& a = at(i, k);
            if (a.is_zero()) continue;
            for (int j = 0; j < o.cols_; ++j) {
                const Scalar& b = o.at(k, j);
                if (!b.is_zero()) r.at(i, j) = r.at(i, j) + a * b;
            }
        }
    return r;
}

std::vector<Scalar> Matrix::apply(const std::vector<Scalar>& v) const {
    if (int(v.size()) != cols_) throw std::invalid_argument("Matrix::apply: dimension mismatch");
    std::vector<Scalar> r(rows_, Scalar::zero(field_));
    for (int i = 0; i < rows_; ++i)
        for (int j = 0; j < cols_; ++j)
            if (!at(i, j).is_zero() && !v[j].is_zero()) r[i] = r[i] + at(i, j) * v[j];
    return r;
}

RowReduceResult row_reduce(const Matrix& m) {
    Matrix r = m;
    Matrix bc = Matrix::identity(m.field(), m.rows());
    int rank = 0;
    for (int col = 0; col < m.cols() && rank < m.rows(); ++col) {
        int piv = -1;
        for (int i = rank; i < m.rows(); ++i)
            if (!r.at(i, col).is_zero()) { piv = i; break; }
        if (piv < 0) continue;
        if (piv != rank) {
            for (int j = 0; j < m.cols(); ++j) std::swap(r.at(piv, j), r.at(rank, j));
            for (int j = 0; j < m.rows(); ++j) std::swap(bc.at(piv, j), bc.at(rank, j));
        }
        Scalar inv = r.at(rank, col).inverse();
        for (int j = 0; j < m.cols(); ++j) r.at(rank, j) = r.at(rank, j) * inv;
        for (int j = 0; j < m.rows(); ++j) bc.at(rank, j) = bc.at(rank, j) * inv;
        for (int i = 0; i < m.rows(); ++i) {
            if (i == rank || r.at(i, col).is_zero()) continue;
            Scalar c = r.at(i, col);
            for (int j = 0; j < m.cols(); ++j) r.at(i, j) = r.at(i, j) - c * r.at(rank, j);
            for (int j = 0; j < m.rows(); ++j) bc.at(i, j) = bc.at(i, j) - c * bc.at(rank, j);
        }
        ++rank;
    }
    return {std::move(r), std::move(bc), rank};
}

int rank(const Matrix& m) { return row_reduce(m).rank; }

std::vector<std::vector<Scalar>> kernel_basis(const Matrix& m) {
    RowReduceResult rr = row_reduce(m);
    std::vector<int> pivot_col(rr.rank, -1);
    std::vector<bool> is_pivot(m.cols(), false);
    for (int i = 0; i < rr.rank; ++i) {
        for (int j = 0; j < m.cols(); ++j)
            if (!rr.reduced.at(i, j).is_zero()) { pivot_col[i] = j; is_pivot[j] = true; break; }
    }
    std::vector<std::vector<Scalar>> basis;
    for (int free = 0; free < m.cols(); ++free) {
        if (is_pivot[free]) continue;
        std::vector<Scalar> v(m.cols(), Scalar::zero(m.field()));
        v[free] = Scalar::one(m.field());
        for (int i = 0; i < rr.rank; ++i) v[pivot_col[i]] = -rr.reduced.at(i, free);
        basis.push_back(std::move(v));
    }
    return basis;
}

std::optional<std::vector<Scalar>> solve(const Matrix& m, const std::vector<Scalar>& b) {
    if (int(b.size()) != m.rows())
        throw std::invalid_argument("solve: right-hand side length does not match row count");
    RowReduceResult rr = row_reduce(m);
    std::vector<Scalar> rb = rr.basis_change.apply(b);
    for (int i = rr.rank; i < m.rows(); ++i)
        if (!rb[i].is_zero()) return std::nullopt;
    std::vector<Scalar> x(m.cols(), Scalar::zero(m.field()));
    for (int i = 0; i < rr.rank; ++i) {
        int pc = -1;
        for (int j = 0; j < m.cols(); ++j)
            if (!rr.reduced.at(i, j).is_zero()) { pc = j; break; }
        x[pc] = rb[i];
    }
    // pivot coordinates are only valid when free columns contribute nothing;
    // verify m x = b exactly and reject otherwise
    std::vector<Scalar> check = m.apply(x);
    for (int i = 0; i < m.rows(); ++i)
        if (!(check[i] == b[i])) return std::nullopt;
    return x;
}

}  // namespace twistlab
