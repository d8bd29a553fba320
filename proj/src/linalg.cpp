// Copyright (c) 2026, the ipaux authors.
// SPDX-License-Identifier: LGPL-2.1-or-later

#include "ipaux/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace ipaux
{

namespace
{

double off_diagonal_norm2(const DenseMat& a)
{
    double s = 0.0;
    for (Index j = 0; j < a.cols(); ++j)
        for (Index i = 0; i < a.rows(); ++i)
            if (i != j)
                s += a(i, j) * a(i, j);
    return s;
}

SymmetricEigen sorted(const Vector& values, const DenseMat& vectors)
{
    const Index n = static_cast<Index>(values.size());
    std::vector<Index> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    std::stable_sort(perm.begin(), perm.end(),
                     [&](Index a, Index b) { return values(a) < values(b); });
    SymmetricEigen out;
    out.values.resize(n);
    out.vectors.resize(vectors.rows(), n);
    for (Index k = 0; k < n; ++k)
    {
        out.values(k) = values(perm[k]);
        out.vectors.col(k) = vectors.col(perm[k]);
    }
    fix_column_signs(out.vectors);
    return out;
}

} // namespace

void fix_column_signs(DenseMat& v)
{
    for (Index j = 0; j < v.cols(); ++j)
    {
        Index imax = 0;
        double amax = -1.0;
        for (Index i = 0; i < v.rows(); ++i)
        {
            // first index wins ties so the choice is reproducible
            if (std::abs(v(i, j)) > amax * (1.0 + 1e-12))
            {
                amax = std::abs(v(i, j));
                imax = i;
            }
        }
        if (v.rows() > 0 && v(imax, j) < 0.0)
            v.col(j) = -v.col(j);
    }
}

SymmetricEigen cyclic_jacobi(const DenseMat& a_in, double tol, int max_sweeps)
{
    require(a_in.rows() == a_in.cols(), "cyclic_jacobi: matrix not square");
    const Index n = static_cast<Index>(a_in.rows());
    DenseMat a = a_in;
    symmetrize(a);
    DenseMat v = DenseMat::Identity(n, n);

    const double norm2 = a.squaredNorm();
    const double target = tol * tol * norm2;
    for (int sweep = 0; sweep < max_sweeps; ++sweep)
    {
        if (off_diagonal_norm2(a) <= target)
            break;
        for (Index p = 0; p < n - 1; ++p)
        {
            for (Index q = p + 1; q < n; ++q)
            {
                const double apq = a(p, q);
                if (apq == 0.0)
                    continue;
                const double app = a(p, p);
                const double aqq = a(q, q);
                // skip rotations that cannot change the diagonal in floating point
                if (std::abs(apq) < 1e-300 ||
                    (std::abs(apq) * 1e18 < std::abs(app) && std::abs(apq) * 1e18 < std::abs(aqq)))
                {
                    a(p, q) = a(q, p) = 0.0;
                    continue;
                }
                const double tau = (aqq - app) / (2.0 * apq);
                const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;

                for (Index k = 0; k < n; ++k)
                {
                    const double akp = a(k, p);
                    const double akq = a(k, q);
                    a(k, p) = c * akp - s * akq;
                    a(k, q) = s * akp + c * akq;
                }
                for (Index k = 0; k < n; ++k)
                {
                    const double apk = a(p, k);
                    const double aqk = a(q, k);
                    a(p, k) = c * apk - s * aqk;
                    a(q, k) = s * apk + c * aqk;
                }
                a(p, q) = a(q, p) = 0.0;
                for (Index k = 0; k < n; ++k)
                {
                    const double vkp = v(k, p);
                    const double vkq = v(k, q);
                    v(k, p) = c * vkp - s * vkq;
                    v(k, q) = s * vkp + c * vkq;
                }
            }
        }
    }
    return sorted(a.diagonal(), v);
}

SymmetricEigen symmetric_eigen(const DenseMat& a, double tol)
{
    if (a.rows() <= kJacobiMaxSize)
        return cyclic_jacobi(a, tol);
    DenseMat s = a;
    symmetrize(s);
    Eigen::SelfAdjointEigenSolver<DenseMat> es(s);
    require(es.info() == Eigen::Success, "symmetric_eigen: eigensolver did not converge");
    return sorted(es.eigenvalues(), es.eigenvectors());
}

DenseCholesky::DenseCholesky(const DenseMat& a) : llt_(a)
{
    require(llt_.info() == Eigen::Success, "DenseCholesky: matrix is not positive definite");
}

SparseCholesky::SparseCholesky(const SparseMat& a) : n_(static_cast<Index>(a.rows()))
{
    require(a.rows() == a.cols(), "SparseCholesky: matrix not square");
    Eigen::SparseMatrix<double> col_major = a;
    llt_.compute(col_major);
    require(llt_.info() == Eigen::Success, "SparseCholesky: matrix is not positive definite");
}

void SparseCholesky::apply(const Vector& x, Vector& y) const
{
    y = llt_.solve(x);
}

std::size_t nnz(const SparseMat& a)
{
    std::size_t count = 0;
    for (Index i = 0; i < a.outerSize(); ++i)
        for (SparseMat::InnerIterator it(a, i); it; ++it)
            if (it.value() != 0.0)
                ++count;
    return count;
}

bool is_exactly_symmetric(const SparseMat& a)
{
    if (a.rows() != a.cols())
        return false;
    SparseMat t = a.transpose();
    if (t.nonZeros() != a.nonZeros())
        return false;
    for (Index i = 0; i < a.outerSize(); ++i)
    {
        SparseMat::InnerIterator ia(a, i), it(t, i);
        for (; ia && it; ++ia, ++it)
            if (ia.index() != it.index() || ia.value() != it.value())
                return false;
        if (ia || it)
            return false;
    }
    return true;
}

DenseMat to_dense(const SparseMat& a)
{
    return DenseMat(a);
}

SparseMat from_triplets(Index rows, Index cols, const std::vector<Triplet>& t)
{
    SparseMat m(rows, cols);
    m.setFromTriplets(t.begin(), t.end());
    m.prune(0.0);
    m.makeCompressed();
    return m;
}

void symmetrize(DenseMat& a)
{
    const Index n = static_cast<Index>(a.rows());
    for (Index i = 0; i < n; ++i)
        for (Index j = i + 1; j < n; ++j)
        {
            const double s = 0.5 * (a(i, j) + a(j, i));
            a(i, j) = s;
            a(j, i) = s;
        }
}

} // namespace ipaux
