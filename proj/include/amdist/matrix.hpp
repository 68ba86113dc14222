#pragma once

#include <numeric>
#include <vector>

#include "amdist/errors.hpp"
#include "amdist/ring.hpp"

namespace amdist {

using VertexId = int;

// Dense row-major matrix over an exact ring, with vertex-id row/column
// labels so submatrices remember where they came from.
template <ScalarRing R>
class Matrix {
public:
    Matrix() : rows_(0), cols_(0) {}
    Matrix(size_t rows, size_t cols)
        : rows_(rows), cols_(cols), data_(rows * cols, RingTraits<R>::zero()) {
        default_labels();
    }
    Matrix(size_t rows, size_t cols, std::vector<R> entries)
        : rows_(rows), cols_(cols), data_(std::move(entries)) {
        if (data_.size() != rows_ * cols_)
            throw DimensionMismatch("matrix data length does not match dimensions");
        default_labels();
    }
    Matrix(std::initializer_list<std::initializer_list<R>> init) {
        rows_ = init.size();
        cols_ = rows_ ? init.begin()->size() : 0;
        for (auto& row : init) {
            if (row.size() != cols_) throw DimensionMismatch("ragged initializer");
            data_.insert(data_.end(), row.begin(), row.end());
        }
        default_labels();
    }

    static Matrix identity(size_t n) {
        Matrix m(n, n);
        for (size_t i = 0; i < n; ++i) m(i, i) = RingTraits<R>::one();
        return m;
    }
    static Matrix ones(size_t rows, size_t cols) {
        Matrix m(rows, cols);
        for (auto& e : m.data_) e = RingTraits<R>::one();
        return m;
    }

    size_t rows() const { return rows_; }
    size_t cols() const { return cols_; }
    bool square() const { return rows_ == cols_; }

    R& operator()(size_t i, size_t j) { return data_[i * cols_ + j]; }
    const R& operator()(size_t i, size_t j) const { return data_[i * cols_ + j]; }

    const std::vector<VertexId>& row_labels() const { return row_labels_; }
    const std::vector<VertexId>& col_labels() const { return col_labels_; }
    void set_labels(std::vector<VertexId> rows, std::vector<VertexId> cols) {
        if (rows.size() != rows_ || cols.size() != cols_)
            throw DimensionMismatch("label lengths do not match dimensions");
        row_labels_ = std::move(rows);
        col_labels_ = std::move(cols);
    }

    size_t row_index(VertexId v) const {
        for (size_t i = 0; i < row_labels_.size(); ++i)
            if (row_labels_[i] == v) return i;
        throw VertexMissing("row label not present");
    }
    size_t col_index(VertexId v) const {
        for (size_t j = 0; j < col_labels_.size(); ++j)
            if (col_labels_[j] == v) return j;
        throw VertexMissing("column label not present");
    }
    bool has_row(VertexId v) const {
        for (auto r : row_labels_)
            if (r == v) return true;
        return false;
    }

    R& at_labels(VertexId r, VertexId c) { return (*this)(row_index(r), col_index(c)); }
    const R& at_labels(VertexId r, VertexId c) const {
        return (*this)(row_index(r), col_index(c));
    }

    Matrix operator+(const Matrix& o) const {
        check_same_shape(o);
        Matrix out = *this;
        for (size_t k = 0; k < data_.size(); ++k) out.data_[k] = data_[k] + o.data_[k];
        return out;
    }
    Matrix operator-(const Matrix& o) const {
        check_same_shape(o);
        Matrix out = *this;
        for (size_t k = 0; k < data_.size(); ++k) out.data_[k] = data_[k] - o.data_[k];
        return out;
    }
    Matrix operator*(const Matrix& o) const {
        if (cols_ != o.rows_) throw DimensionMismatch("matrix product shape mismatch");
        Matrix out(rows_, o.cols_);
        for (size_t i = 0; i < rows_; ++i)
            for (size_t k = 0; k < cols_; ++k) {
                const R& a = (*this)(i, k);
                if (amdist::is_zero(a)) continue;
                for (size_t j = 0; j < o.cols_; ++j)
                    out(i, j) = out(i, j) + a * o(k, j);
            }
        out.row_labels_ = row_labels_;
        out.col_labels_ = o.col_labels_;
        return out;
    }
    Matrix operator*(const R& s) const {
        Matrix out = *this;
        for (auto& e : out.data_) e = e * s;
        return out;
    }
    bool operator==(const Matrix& o) const {
        return rows_ == o.rows_ && cols_ == o.cols_ && data_ == o.data_;
    }

    Matrix transpose() const {
        Matrix out(cols_, rows_);
        for (size_t i = 0; i < rows_; ++i)
            for (size_t j = 0; j < cols_; ++j) out(j, i) = (*this)(i, j);
        out.row_labels_ = col_labels_;
        out.col_labels_ = row_labels_;
        return out;
    }

    // Submatrix keeping the given label sets, rows/cols in the order given.
    Matrix submatrix_labels(const std::vector<VertexId>& keep_rows,
                            const std::vector<VertexId>& keep_cols) const {
        Matrix out(keep_rows.size(), keep_cols.size());
        for (size_t i = 0; i < keep_rows.size(); ++i) {
            size_t ri = row_index(keep_rows[i]);
            for (size_t j = 0; j < keep_cols.size(); ++j)
                out(i, j) = (*this)(ri, col_index(keep_cols[j]));
        }
        out.set_labels(keep_rows, keep_cols);
        return out;
    }

    // Minor by positional removal of one row and one column.
    Matrix strike(size_t row, size_t col) const {
        Matrix out(rows_ - 1, cols_ - 1);
        std::vector<VertexId> rl, cl;
        for (size_t i = 0, oi = 0; i < rows_; ++i) {
            if (i == row) continue;
            rl.push_back(row_labels_[i]);
            for (size_t j = 0, oj = 0; j < cols_; ++j) {
                if (j == col) continue;
                out(oi, oj) = (*this)(i, j);
                ++oj;
            }
            ++oi;
        }
        for (size_t j = 0; j < cols_; ++j)
            if (j != col) cl.push_back(col_labels_[j]);
        out.set_labels(rl, cl);
        return out;
    }

private:
    void default_labels() {
        row_labels_.resize(rows_);
        col_labels_.resize(cols_);
        std::iota(row_labels_.begin(), row_labels_.end(), 1);
        std::iota(col_labels_.begin(), col_labels_.end(), 1);
    }
    void check_same_shape(const Matrix& o) const {
        if (rows_ != o.rows_ || cols_ != o.cols_)
            throw DimensionMismatch("matrix shapes differ");
    }

    size_t rows_, cols_;
    std::vector<R> data_;
    std::vector<VertexId> row_labels_, col_labels_;
};

template <ScalarRing R>
Matrix<R> operator*(const R& s, const Matrix<R>& m) {
    return m * s;
}

}  // namespace amdist
