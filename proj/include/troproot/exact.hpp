#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

namespace troproot {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ParseError : public Error {
public:
    using Error::Error;
};

class BudgetExceeded : public Error {
public:
    using Error::Error;
};

class PreconditionError : public Error {
public:
    using Error::Error;
};

using Int = mpz_class;
using Rat = mpq_class;
using IntVec = std::vector<Int>;
using RatVec = std::vector<Rat>;

template <class T>
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}
    Matrix(std::initializer_list<std::initializer_list<T>> init);

    static Matrix identity(std::size_t n);
    static Matrix from_rows(const std::vector<std::vector<T>>& rows, std::size_t cols = 0);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool empty() const { return rows_ == 0 || cols_ == 0; }

    T& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    const T& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    std::vector<T> row(std::size_t i) const;
    std::vector<T> col(std::size_t j) const;
    void append_row(const std::vector<T>& r);
    // Keep the first k rows.
    void truncate_rows(std::size_t k) {
        if (k < rows_) {
            rows_ = k;
            data_.resize(k * cols_);
        }
    }

    Matrix transpose() const;
    Matrix select_cols(const std::vector<std::size_t>& idx) const;
    Matrix select_rows(const std::vector<std::size_t>& idx) const;

    bool operator==(const Matrix& o) const {
        return rows_ == o.rows_ && cols_ == o.cols_ && data_ == o.data_;
    }
    bool operator!=(const Matrix& o) const { return !(*this == o); }

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<T> data_;
};

using IntMatrix = Matrix<Int>;
using RatMatrix = Matrix<Rat>;

RatMatrix to_rat(const IntMatrix& m);
RatVec to_rat(const IntVec& v);
IntMatrix hstack(const IntMatrix& a, const IntMatrix& b);
RatMatrix hstack(const RatMatrix& a, const RatMatrix& b);
RatMatrix vstack(const RatMatrix& a, const RatMatrix& b);
RatMatrix mul(const RatMatrix& a, const RatMatrix& b);
IntMatrix mul(const IntMatrix& a, const IntMatrix& b);
RatVec mul(const RatMatrix& a, const RatVec& x);

// Reduced row echelon form in place; returns pivot columns.
std::vector<std::size_t> rref(RatMatrix& m);

std::size_t rank(const RatMatrix& m);
std::size_t rank(const IntMatrix& m);
Rat determinant(RatMatrix m);
Int determinant(const IntMatrix& m);

// Columns form a basis of the right kernel (0 columns when trivial).
RatMatrix kernel_basis(const RatMatrix& m);
std::optional<RatVec> solve_affine(const RatMatrix& a, const RatVec& b);
// Unique solution of a square system, absent when singular.
std::optional<RatVec> solve_square(const RatMatrix& a, const RatVec& b);

struct SmithForm {
    IntMatrix u;
    IntMatrix d;
    IntMatrix v;
    std::vector<Int> invariant_factors() const;
};

SmithForm smith_normal_form(const IntMatrix& m);

// Index of the lattice spanned by the columns of gens in Z^rows.
Int sublattice_index(const IntMatrix& gens);
Int monomial_map_degree(const IntMatrix& m);

// Basis (as columns) of Z^N intersected with the real span of the columns.
IntMatrix saturate(const IntMatrix& gens);

// Multiply by the lcm of denominators and divide by the content.
IntVec clear_denominators(const RatVec& v);
IntVec primitive(const IntVec& v);
Int content(const IntVec& v);

// A point of {x : eq_a x = eq_b, le_a x <= le_b} with x free, or absent.
std::optional<RatVec> lp_feasible_point(const RatMatrix& eq_a, const RatVec& eq_b, const RatMatrix& le_a,
                                        const RatVec& le_b);

// Feasibility of {t : g_mat t <= g} with t free.
std::optional<RatVec> lp_feasible_ineq(const RatMatrix& g_mat, const RatVec& g);

// Upper bound on worker threads used by parallel stages (0 = hardware default).
unsigned worker_threads();
void set_worker_threads(unsigned n);

std::string to_string(const Rat& q);
Rat parse_rat(const std::string& s);

}  // namespace troproot
