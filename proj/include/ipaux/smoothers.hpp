// Copyright (c) 2026, the ipaux authors.
// SPDX-License-Identifier: LGPL-2.1-or-later

/**
   @file Polynomial smoother built from the Chebyshev polynomial T_{2nu+1}.

       p_nu(t) = (-1)^nu / (2nu+1) * T_{2nu+1}(sqrt t) / sqrt t * (1 - T_{2nu+1}(sqrt t)^2)

   has degree 3nu+1, p_nu(0) = 1 and only real roots in (0,1]. The smoother
   is defined by I - M^{-1} A = p_nu(b^{-1} S^{-1} A) and is applied as 3nu+1
   scaled Jacobi sweeps, one per root. S is a positive diagonal (diag(A) or
   the l1 weights) and b bounds v^T A v <= b v^T S v.
*/

#pragma once

#include "ipaux/linalg.hpp"

namespace ipaux
{

/// The 3nu+1 roots of p_nu, ascending, with multiplicity.
std::vector<double> cheb_roots(int nu);

/// Direct evaluation of p_nu(t) for t >= 0.
double cheb_poly(int nu, double t);

enum class SmootherScaling
{
    l1,       ///< W, b = 1
    diagonal  ///< D, b from power iteration
};

/// b with v^T A v <= b v^T S v: exactly 1 for l1 weights, 1.1 x (30-step power iteration) otherwise.
double estimate_b(const SparseMat& A, const Vector& scaling, SmootherScaling kind);

class PolySmoother : public LinearOperator
{
public:
    PolySmoother(const SparseMat& A, Vector scaling, double b, int nu);

    /// Convenience: scaling and b chosen from \a kind.
    static PolySmoother make(const SparseMat& A, SmootherScaling kind, int nu);

    Index size() const override { return static_cast<Index>(a_.rows()); }

    /// x <- result of the 3nu+1 sweeps for A x = rhs starting from x.
    void smooth(const Vector& rhs, Vector& x) const;

    /// y = M^{-1} r (sweeps from a zero initial guess).
    void apply(const Vector& r, Vector& y) const override;

    /// y = M^{-T} r. M is symmetric, so this is the same action; kept as a
    /// separate entry point for the two-level procedure.
    void apply_transpose(const Vector& r, Vector& y) const { apply(r, y); }

    double b() const { return b_; }
    int nu() const { return nu_; }
    const Vector& scaling() const { return scaling_; }
    const std::vector<double>& roots() const { return roots_; }

private:
    const SparseMat& a_;
    Vector inv_scaling_;
    Vector scaling_;
    double b_;
    int nu_;
    std::vector<double> roots_;
};

} // namespace ipaux
