// Copyright (c) 2026, the ipaux authors.
// SPDX-License-Identifier: LGPL-2.1-or-later

#include "ipaux/mesh_fe.hpp"

#include <cmath>
#include <numbers>

namespace ipaux
{

namespace
{

// Legendre P_n and its derivative at x in [-1,1].
void legendre(int n, double x, double& p, double& dp)
{
    double p0 = 1.0, p1 = x;
    if (n == 0)
    {
        p = 1.0;
        dp = 0.0;
        return;
    }
    for (int k = 2; k <= n; ++k)
    {
        const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = pk;
    }
    p = p1;
    dp = (std::abs(x) < 1.0) ? n * (p0 - x * p1) / (1.0 - x * x) : 0.5 * n * (n + 1) * std::pow(x, n - 1);
}

// Lagrange basis values and derivatives at x for the given nodes.
void lagrange(const std::vector<double>& nodes, double x, std::vector<double>& val, std::vector<double>& der)
{
    const std::size_t n = nodes.size();
    val.assign(n, 0.0);
    der.assign(n, 0.0);
    for (std::size_t a = 0; a < n; ++a)
    {
        double v = 1.0;
        for (std::size_t m = 0; m < n; ++m)
            if (m != a)
                v *= (x - nodes[m]) / (nodes[a] - nodes[m]);
        val[a] = v;
        double d = 0.0;
        for (std::size_t k = 0; k < n; ++k)
        {
            if (k == a)
                continue;
            double t = 1.0 / (nodes[a] - nodes[k]);
            for (std::size_t m = 0; m < n; ++m)
                if (m != a && m != k)
                    t *= (x - nodes[m]) / (nodes[a] - nodes[m]);
            d += t;
        }
        der[a] = d;
    }
}

// 1D reference stiffness (derivatives on [0,1]) and mass matrices.
void reference_1d(const std::vector<double>& nodes, DenseMat& k1, DenseMat& m1)
{
    const int n = static_cast<int>(nodes.size());
    std::vector<double> qp, qw, val, der;
    gauss_legendre(n, qp, qw);
    k1 = DenseMat::Zero(n, n);
    m1 = DenseMat::Zero(n, n);
    for (std::size_t q = 0; q < qp.size(); ++q)
    {
        lagrange(nodes, qp[q], val, der);
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b)
            {
                k1(a, b) += qw[q] * der[a] * der[b];
                m1(a, b) += qw[q] * val[a] * val[b];
            }
    }
    symmetrize(k1);
    symmetrize(m1);
}

Vector reference_load_1d(const std::vector<double>& nodes)
{
    const int n = static_cast<int>(nodes.size());
    std::vector<double> qp, qw, val, der;
    gauss_legendre(n, qp, qw);
    Vector l = Vector::Zero(n);
    for (std::size_t q = 0; q < qp.size(); ++q)
    {
        lagrange(nodes, qp[q], val, der);
        for (int a = 0; a < n; ++a)
            l(a) += qw[q] * val[a];
    }
    return l;
}

} // namespace

void gauss_legendre(int n, std::vector<double>& points, std::vector<double>& weights)
{
    require(n >= 1, "gauss_legendre: need at least one point");
    points.assign(n, 0.0);
    weights.assign(n, 0.0);
    for (int i = 0; i < n; ++i)
    {
        double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double p = 0.0, dp = 0.0;
        for (int it = 0; it < 100; ++it)
        {
            legendre(n, x, p, dp);
            const double dx = p / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16)
                break;
        }
        legendre(n, x, p, dp);
        // map [-1,1] -> [0,1], ascending order
        points[n - 1 - i] = 0.5 * (x + 1.0);
        weights[n - 1 - i] = 1.0 / ((1.0 - x * x) * dp * dp);
    }
}

std::vector<double> gauss_lobatto_points(int n)
{
    require(n >= 2, "gauss_lobatto_points: need at least two points");
    const int N = n - 1;
    std::vector<double> pts(n);
    pts[0] = 0.0;
    pts[N] = 1.0;
    for (int k = 1; k < N; ++k)
    {
        double x = -std::cos(std::numbers::pi * k / N);
        for (int it = 0; it < 100; ++it)
        {
            double p = 0.0, dp = 0.0;
            legendre(N, x, p, dp);
            const double ddp = (2.0 * x * dp - N * (N + 1.0) * p) / (1.0 - x * x);
            const double dx = dp / ddp;
            x -= dx;
            if (std::abs(dx) < 1e-16)
                break;
        }
        pts[k] = 0.5 * (x + 1.0);
    }
    return pts;
}

std::array<Index, 3> Mesh::element_cell(Index e) const
{
    return {e % cells[0], (e / cells[0]) % cells[1], e / (cells[0] * cells[1])};
}

std::array<double, 3> Mesh::dof_coords(Index dof) const
{
    std::array<Index, 3> idx{};
    Index rem = dof;
    for (int d = 0; d < 3; ++d)
    {
        const Index n = d < dim ? nodes_per_axis(d) : 1;
        idx[d] = rem % n;
        rem /= n;
    }
    std::array<double, 3> x{0.0, 0.0, 0.0};
    for (int d = 0; d < dim; ++d)
    {
        const Index c = std::min<Index>(idx[d] / order, cells[d] - 1);
        const Index a = idx[d] - c * order;
        x[d] = (c + node_1d[a]) * cell_size[d];
    }
    return x;
}

Mesh build_mesh(int dim, std::array<Index, 3> cells, int order, NodeFamily nodes)
{
    require(dim == 2 || dim == 3, "build_mesh: dim must be 2 or 3");
    require(order >= 1, "build_mesh: order must be >= 1");
    for (int d = 0; d < dim; ++d)
        require(cells[d] >= 1, "build_mesh: need at least one cell per axis");
    Mesh m;
    m.dim = dim;
    m.order = order;
    m.nodes = nodes;
    m.cells = {1, 1, 1};
    for (int d = 0; d < dim; ++d)
    {
        m.cells[d] = cells[d];
        m.cell_size[d] = 1.0 / cells[d];
    }
    if (nodes == NodeFamily::gauss_lobatto)
        m.node_1d = gauss_lobatto_points(order + 1);
    else
    {
        m.node_1d.resize(order + 1);
        for (int a = 0; a <= order; ++a)
            m.node_1d[a] = static_cast<double>(a) / order;
    }

    const std::array<Index, 3> np{m.nodes_per_axis(0), m.nodes_per_axis(1), dim == 3 ? m.nodes_per_axis(2) : 1};
    m.n_dofs = np[0] * np[1] * np[2];
    m.n_elements = m.cells[0] * m.cells[1] * m.cells[2];
    const int p = order;
    const Index nz_loc = dim == 3 ? p + 1 : 1;

    auto node_id = [&](Index ix, Index iy, Index iz) { return ix + np[0] * (iy + np[1] * iz); };

    std::vector<std::vector<Index>> element_dof(m.n_elements);
    for (Index e = 0; e < m.n_elements; ++e)
    {
        const auto c = m.element_cell(e);
        auto& row = element_dof[e];
        row.reserve((p + 1) * (p + 1) * nz_loc);
        for (Index k = 0; k < nz_loc; ++k)
            for (Index j = 0; j <= p; ++j)
                for (Index i = 0; i <= p; ++i)
                    row.push_back(node_id(c[0] * p + i, c[1] * p + j, dim == 3 ? c[2] * p + k : 0));
    }

    // interior faces, grouped by normal axis, cells in lexicographic order
    std::vector<std::vector<Index>> element_face(m.n_elements);
    std::vector<std::vector<Index>> face_dof;
    for (int axis = 0; axis < dim; ++axis)
    {
        for (Index e = 0; e < m.n_elements; ++e)
        {
            const auto c = m.element_cell(e);
            if (c[axis] + 1 >= m.cells[axis])
                continue;
            Index stride = 1;
            for (int d = 0; d < axis; ++d)
                stride *= m.cells[d];
            const Index nb = e + stride;
            const Index f = static_cast<Index>(face_dof.size());
            element_face[e].push_back(f);
            element_face[nb].push_back(f);
            std::vector<Index> fd;
            for (Index k = 0; k < nz_loc; ++k)
                for (Index j = 0; j <= p; ++j)
                    for (Index i = 0; i <= p; ++i)
                    {
                        const std::array<Index, 3> loc{i, j, k};
                        if (loc[axis] != p)
                            continue;
                        fd.push_back(node_id(c[0] * p + i, c[1] * p + j, dim == 3 ? c[2] * p + k : 0));
                    }
            face_dof.push_back(std::move(fd));
        }
    }
    m.n_faces = static_cast<Index>(face_dof.size());

    m.rel.element_dof = Relation(m.n_elements, m.n_dofs, std::move(element_dof));
    m.rel.element_face = Relation(m.n_elements, m.n_faces, std::move(element_face));
    m.rel.face_dof = Relation(m.n_faces, m.n_dofs, std::move(face_dof));
    {
        const Relation ee = multiply(m.rel.element_face, transpose(m.rel.element_face));
        std::vector<std::vector<Index>> rows(m.n_elements);
        for (Index e = 0; e < m.n_elements; ++e)
            for (Index o : ee.row(e))
                if (o != e)
                    rows[e].push_back(o);
        m.rel.element_element = Relation(m.n_elements, m.n_elements, std::move(rows));
    }

    for (Index n = 0; n < m.n_dofs; ++n)
    {
        Index rem = n;
        bool on_boundary = false;
        for (int d = 0; d < dim; ++d)
        {
            const Index i = rem % np[d];
            rem /= np[d];
            on_boundary = on_boundary || i == 0 || i == np[d] - 1;
        }
        if (on_boundary)
            m.boundary_dofs.push_back(n);
    }
    return m;
}

Mesh build_mesh(int dim, Index cells_per_axis, int order, NodeFamily nodes)
{
    return build_mesh(dim, {cells_per_axis, cells_per_axis, cells_per_axis}, order, nodes);
}

CoefficientField constant_coefficient(const Mesh& mesh, double value)
{
    require(value > 0.0, "constant_coefficient: value must be positive");
    return {std::vector<double>(mesh.n_elements, value)};
}

CoefficientField checkerboard_coefficient(const Mesh& mesh, double contrast, Index pattern_cells)
{
    require(contrast > 0.0, "checkerboard_coefficient: contrast must be positive");
    require(pattern_cells >= 1, "checkerboard_coefficient: pattern_cells must be >= 1");
    CoefficientField k;
    k.kappa.resize(mesh.n_elements);
    for (Index e = 0; e < mesh.n_elements; ++e)
    {
        const auto c = mesh.element_cell(e);
        Index parity = 0;
        for (int d = 0; d < mesh.dim; ++d)
        {
            const double centre = (c[d] + 0.5) * mesh.cell_size[d];
            parity += static_cast<Index>(std::floor(centre * pattern_cells));
        }
        k.kappa[e] = (parity % 2 == 0) ? 1.0 : contrast;
    }
    return k;
}

DenseMat element_stiffness(const Mesh& mesh, const CoefficientField& coeff, Index e)
{
    require(e >= 0 && e < mesh.n_elements, "element_stiffness: invalid element id");
    DenseMat k1, m1;
    reference_1d(mesh.node_1d, k1, m1);
    const int n1 = mesh.order + 1;
    const double kappa = coeff.kappa.at(e);

    // per-axis physical 1D matrices
    std::array<DenseMat, 3> kk, mm;
    for (int d = 0; d < mesh.dim; ++d)
    {
        kk[d] = k1 / mesh.cell_size[d];
        mm[d] = m1 * mesh.cell_size[d];
    }
    if (mesh.dim == 2)
    {
        const int n = n1 * n1;
        DenseMat a(n, n);
        for (int j = 0; j < n1; ++j)
            for (int i = 0; i < n1; ++i)
                for (int jj = 0; jj < n1; ++jj)
                    for (int ii = 0; ii < n1; ++ii)
                        a(i + n1 * j, ii + n1 * jj) =
                            kappa * (kk[0](i, ii) * mm[1](j, jj) + mm[0](i, ii) * kk[1](j, jj));
        return a;
    }
    const int n = n1 * n1 * n1;
    DenseMat a(n, n);
    for (int k = 0; k < n1; ++k)
        for (int j = 0; j < n1; ++j)
            for (int i = 0; i < n1; ++i)
                for (int kq = 0; kq < n1; ++kq)
                    for (int jj = 0; jj < n1; ++jj)
                        for (int ii = 0; ii < n1; ++ii)
                            a(i + n1 * (j + n1 * k), ii + n1 * (jj + n1 * kq)) =
                                kappa * (kk[0](i, ii) * mm[1](j, jj) * mm[2](k, kq) +
                                         mm[0](i, ii) * kk[1](j, jj) * mm[2](k, kq) +
                                         mm[0](i, ii) * mm[1](j, jj) * kk[2](k, kq));
    return a;
}

Vector element_load(const Mesh& mesh, Index e)
{
    require(e >= 0 && e < mesh.n_elements, "element_load: invalid element id");
    const Vector l1 = reference_load_1d(mesh.node_1d);
    const int n1 = mesh.order + 1;
    const int nz = mesh.dim == 3 ? n1 : 1;
    const double hz = mesh.dim == 3 ? mesh.cell_size[2] : 1.0;
    Vector l(n1 * n1 * nz);
    for (int k = 0; k < nz; ++k)
        for (int j = 0; j < n1; ++j)
            for (int i = 0; i < n1; ++i)
                l(i + n1 * (j + n1 * k)) = l1(i) * mesh.cell_size[0] * l1(j) * mesh.cell_size[1] *
                                           (mesh.dim == 3 ? l1(k) * hz : 1.0);
    return l;
}

Discretization assemble(const Mesh& mesh, const CoefficientField& coeff)
{
    require(static_cast<Index>(coeff.kappa.size()) == mesh.n_elements, "assemble: coefficient size mismatch");
    for (double k : coeff.kappa)
        require(k > 0.0, "assemble: coefficient must be strictly positive");

    Discretization disc;
    disc.dof_to_free.assign(mesh.n_dofs, 0);
    for (Index b : mesh.boundary_dofs)
        disc.dof_to_free[b] = -1;
    for (Index n = 0; n < mesh.n_dofs; ++n)
        if (disc.dof_to_free[n] == 0)
        {
            disc.dof_to_free[n] = static_cast<Index>(disc.free_to_dof.size());
            disc.free_to_dof.push_back(n);
        }
    require(!disc.free_to_dof.empty(), "assemble: all dofs lie on the Dirichlet boundary");
    const Index n_free = disc.n_free();

    auto renumber = [&](const Relation& r) {
        std::vector<std::vector<Index>> rows(r.n_rows());
        for (Index i = 0; i < r.n_rows(); ++i)
            for (Index d : r.row(i))
                if (disc.dof_to_free[d] >= 0)
                    rows[i].push_back(disc.dof_to_free[d]);
        return Relation(r.n_rows(), n_free, std::move(rows));
    };
    disc.rel.element_dof = renumber(mesh.rel.element_dof);
    disc.rel.face_dof = renumber(mesh.rel.face_dof);
    disc.rel.element_face = mesh.rel.element_face;
    disc.rel.element_element = mesh.rel.element_element;

    std::vector<Triplet> trip;
    disc.rhs = Vector::Zero(n_free);
    disc.element_matrices.resize(mesh.n_elements);
    for (Index e = 0; e < mesh.n_elements; ++e)
    {
        const DenseMat ae = element_stiffness(mesh, coeff, e);
        const Vector le = element_load(mesh, e);
        const auto dofs = mesh.rel.element_dof.row(e);
        std::vector<Index> keep;
        for (Index a = 0; a < static_cast<Index>(dofs.size()); ++a)
            if (disc.dof_to_free[dofs[a]] >= 0)
                keep.push_back(a);
        DenseMat local(keep.size(), keep.size());
        for (std::size_t a = 0; a < keep.size(); ++a)
        {
            const Index ga = disc.dof_to_free[dofs[keep[a]]];
            disc.rhs(ga) += le(keep[a]);
            for (std::size_t b = 0; b < keep.size(); ++b)
            {
                local(a, b) = ae(keep[a], keep[b]);
                trip.emplace_back(ga, disc.dof_to_free[dofs[keep[b]]], local(a, b));
            }
        }
        disc.element_matrices[e] = std::move(local);
    }
    disc.A = from_triplets(n_free, n_free, trip);
    disc.D = disc.A.diagonal();
    disc.W = l1_weights(disc.A);
    return disc;
}

Vector l1_weights(const SparseMat& a)
{
    require(a.rows() == a.cols(), "l1_weights: matrix not square");
    const Vector d = a.diagonal();
    for (Index i = 0; i < d.size(); ++i)
        require(d(i) > 0.0, "l1_weights: nonpositive diagonal entry at row " + std::to_string(i));
    Vector w = Vector::Zero(a.rows());
    for (Index i = 0; i < a.outerSize(); ++i)
        for (SparseMat::InnerIterator it(a, i); it; ++it)
            w(i) += std::abs(it.value()) * std::sqrt(d(i) / d(it.index()));
    return w;
}

} // namespace ipaux
