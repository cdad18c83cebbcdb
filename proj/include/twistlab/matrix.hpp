#pragma once

#include <optional>
#include <vector>

#include "twistlab/field.hpp"

namespace twistlab {

/* Dense matrix over an exact field, row-major.  All operations here are
 * exact; results are canonical so golden-file comparison is deterministic. */
class Matrix {
public:
    Matrix() = default;
    Matrix(FieldSpec f, int rows, int cols)
        : field_(f), rows_(rows), cols_(cols), entries_(size_t(rows) * cols, Scalar::zero(f)) {}

    static Matrix identity(FieldSpec f, int n);

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    FieldSpec field() const { return field_; }

    Scalar& at(int i, int j) { return entries_[size_t(i) * cols_ + j]; }
    const Scalar& at(int i, int j) const { return entries_[size_t(i) * cols_ + j]; }

    Matrix transpose() const;
    Matrix mul(const Matrix& o) const;
    std::vector<Scalar> apply(const std::vector<Scalar>& v) const;

    bool operator==(const Matrix& o) const = default;

private:
    FieldSpec field_;
    int rows_ = 0, cols_ = 0;
    std::vector<Scalar> entries_;
};

struct RowReduceResult {
    Matrix reduced;       // reduced row-echelon form, pivots are 1
    Matrix basis_change;  // basis_change * input == reduced
    int rank = 0;
};

RowReduceResult row_reduce(const Matrix& m);
int rank(const Matrix& m);

// Basis of { v : m v = 0 }; vectors have length cols, count = cols - rank.
std::vector<std::vector<Scalar>> kernel_basis(const Matrix& m);

// Exact solution of m x = b, or nullopt when b is outside the column span.
// A length mismatch of b is a usage error, reported distinctly.
std::optional<std::vector<Scalar>> solve(const Matrix& m, const std::vector<Scalar>& b);

}  // namespace twistlab
