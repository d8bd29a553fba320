// Copyright (c) 2026, the ipaux authors.
// SPDX-License-Identifier: LGPL-2.1-or-later

#include "ipaux/smoothers.hpp"

#include "ipaux/mesh_fe.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

namespace ipaux
{

std::vector<double> cheb_roots(int nu)
{
    require(nu >= 1, "cheb_roots: nu must be at least 1");
    const double n = 2.0 * nu + 1.0;
    const double pi = std::numbers::pi;
    std::vector<double> roots{1.0};
    // 1 - T_n(sqrt t)^2: t = cos^2(j pi / n), double roots for j = 1..nu
    for (int j = 1; j <= nu; ++j)
    {
        const double c = std::cos(j * pi / n);
        roots.push_back(c * c);
        roots.push_back(c * c);
    }
    // T_n(sqrt t) / sqrt t: zeros of T_n with positive abscissa
    for (int k = 1; k <= nu; ++k)
    {
        const double c = std::cos((2.0 * k - 1.0) * pi / (2.0 * n));
        roots.push_back(c * c);
    }
    std::sort(roots.begin(), roots.end());
    return roots;
}

double cheb_poly(int nu, double t)
{
    require(nu >= 1 && t >= 0.0, "cheb_poly: need nu >= 1 and t >= 0");
    const int n = 2 * nu + 1;
    const double x = std::sqrt(t);
    // T_n(x) and T_n(x)/x by the three-term recurrence; T_k/x is a polynomial for odd k
    double t_prev = 1.0, t_cur = x;
    for (int k = 1; k < n; ++k)
    {
        const double t_next = 2.0 * x * t_cur - t_prev;
        t_prev = t_cur;
        t_cur = t_next;
    }
    double tn_over_x;
    if (x == 0.0)
        tn_over_x = (nu % 2 == 0 ? 1.0 : -1.0) * n;  // T_n'(0)
    else
        tn_over_x = t_cur / x;
    const double sign = nu % 2 == 0 ? 1.0 : -1.0;
    return sign / n * tn_over_x * (1.0 - t_cur * t_cur);
}

double estimate_b(const SparseMat& A, const Vector& scaling, SmootherScaling kind)
{
    if (kind == SmootherScaling::l1)
        return 1.0;
    const Index n = static_cast<Index>(A.rows());
    std::mt19937_64 rng(12345);
    std::uniform_real_distribution<double> dist(0.5, 1.5);
    Vector v(n);
    for (Index i = 0; i < n; ++i)
        v(i) = dist(rng);
    const Vector inv = scaling.cwiseInverse();
    double lambda = 0.0;
    for (int it = 0; it < 30; ++it)
    {
        const Vector av = A * v;
        // Rayleigh quotient in the S inner product
        lambda = v.dot(av) / v.dot(scaling.cwiseProduct(v));
        v = inv.cwiseProduct(av);
        v /= v.norm();
    }
    return 1.1 * lambda;
}

PolySmoother::PolySmoother(const SparseMat& A, Vector scaling, double b, int nu)
    : a_(A), scaling_(std::move(scaling)), b_(b), nu_(nu), roots_(cheb_roots(nu))
{
    require(a_.rows() == a_.cols() && scaling_.size() == a_.rows(), "PolySmoother: size mismatch");
    require(b_ > 0.0, "PolySmoother: b must be positive");
    for (Index i = 0; i < scaling_.size(); ++i)
        require(scaling_(i) > 0.0, "PolySmoother: nonpositive scaling entry at " + std::to_string(i));
    inv_scaling_ = scaling_.cwiseInverse();
}

PolySmoother PolySmoother::make(const SparseMat& A, SmootherScaling kind, int nu)
{
    Vector s = kind == SmootherScaling::l1 ? l1_weights(A) : Vector(A.diagonal());
    const double b = estimate_b(A, s, kind);
    return PolySmoother(A, std::move(s), b, nu);
}

void PolySmoother::smooth(const Vector& rhs, Vector& x) const
{
    require(rhs.size() == size() && x.size() == size(), "PolySmoother::smooth: length mismatch");
    Vector r(size());
    for (double t : roots_)
    {
        r.noalias() = rhs - a_ * x;
        x += (1.0 / (b_ * t)) * inv_scaling_.cwiseProduct(r);
    }
}

void PolySmoother::apply(const Vector& r, Vector& y) const
{
    y = Vector::Zero(size());
    smooth(r, y);
}

} // namespace ipaux
