// Copyright (c) 2026, the ipaux authors.
// SPDX-License-Identifier: LGPL-2.1-or-later

/**
   @file Common vocabulary types (vectors, dense and sparse matrices), the
   operator interface used by all preconditioners, and small dense kernels:
   the cyclic Jacobi symmetric eigensolver and Cholesky wrappers.
*/

#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>

#include <cstddef>
#include <functional>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace ipaux
{

using Index = int;
using Vector = Eigen::VectorXd;
using DenseMat = Eigen::MatrixXd;
using SparseMat = Eigen::SparseMatrix<double, Eigen::RowMajor, Index>;
using Triplet = Eigen::Triplet<double, Index>;

/// Thrown on violated preconditions and numerical failures.
class Error : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

/// Throws ipaux::Error with \a what when \a cond is false.
inline void require(bool cond, const std::string& what)
{
    if (!cond)
        throw Error(what);
}

/**
   A linear map R^n -> R^n. Preconditioners, smoothers, and exact solvers all
   implement this; apply() must not keep state between calls.
*/
class LinearOperator
{
public:
    virtual ~LinearOperator() = default;
    virtual Index size() const = 0;
    virtual void apply(const Vector& x, Vector& y) const = 0;

    Vector operator()(const Vector& x) const
    {
        Vector y(size());
        apply(x, y);
        return y;
    }
};

/// y = A x for a sparse matrix held by reference.
class MatrixOperator : public LinearOperator
{
public:
    explicit MatrixOperator(const SparseMat& a) : a_(a) {}
    Index size() const override { return static_cast<Index>(a_.rows()); }
    void apply(const Vector& x, Vector& y) const override { y = a_ * x; }
private:
    const SparseMat& a_;
};

/// Wraps a callable; handy for tests and for composing operators.
class FunctionOperator : public LinearOperator
{
public:
    using Fn = std::function<void(const Vector&, Vector&)>;
    FunctionOperator(Index n, Fn fn) : n_(n), fn_(std::move(fn)) {}
    Index size() const override { return n_; }
    void apply(const Vector& x, Vector& y) const override { fn_(x, y); }
private:
    Index n_;
    Fn fn_;
};

struct SymmetricEigen
{
    Vector values;      ///< ascending
    DenseMat vectors;   ///< columns, orthonormal
};

/**
   Cyclic (row-by-row) Jacobi rotations on a symmetric matrix. Stops when the
   off-diagonal Frobenius norm drops below tol times the matrix norm.
   Eigenvalues are returned ascending; each eigenvector is normalized so that
   its largest-magnitude entry is positive.
*/
SymmetricEigen cyclic_jacobi(const DenseMat& a, double tol = 1e-12, int max_sweeps = 60);

/// Matrices up to this size go through cyclic_jacobi(); larger ones through
/// Householder tridiagonalization + implicit QR.
inline constexpr Index kJacobiMaxSize = 96;

/// Symmetric eigendecomposition with the sign convention of cyclic_jacobi().
SymmetricEigen symmetric_eigen(const DenseMat& a, double tol = 1e-12);

/// Makes the largest-magnitude entry of each column positive.
void fix_column_signs(DenseMat& v);

/// Dense Cholesky factor of an SPD matrix; throws on failure.
class DenseCholesky
{
public:
    DenseCholesky() = default;
    explicit DenseCholesky(const DenseMat& a);
    Index size() const { return static_cast<Index>(llt_.rows()); }
    Vector solve(const Vector& b) const { return llt_.solve(b); }
    DenseMat solve(const DenseMat& b) const { return llt_.solve(b); }
private:
    Eigen::LLT<DenseMat> llt_;
};

/// Sparse Cholesky (AMD ordering) used for the "exact" inner solves.
class SparseCholesky : public LinearOperator
{
public:
    explicit SparseCholesky(const SparseMat& a);
    Index size() const override { return n_; }
    void apply(const Vector& x, Vector& y) const override;
private:
    Index n_ = 0;
    Eigen::SimplicialLLT<Eigen::SparseMatrix<double>, Eigen::Lower, Eigen::AMDOrdering<int>> llt_;
};

/// Number of stored nonzero entries (explicit zeros are pruned first).
std::size_t nnz(const SparseMat& a);

/// True iff a(i,j) == a(j,i) bitwise for all stored entries.
bool is_exactly_symmetric(const SparseMat& a);

/// Dense copy, for oracles and small problems.
DenseMat to_dense(const SparseMat& a);

/// Sparse matrix from triplets; duplicates are summed in insertion order and exact zeros dropped.
SparseMat from_triplets(Index rows, Index cols, const std::vector<Triplet>& t);

/// Symmetrizes a dense matrix in place: a = (a + a^T) / 2, exactly symmetric.
void symmetrize(DenseMat& a);

} // namespace ipaux
