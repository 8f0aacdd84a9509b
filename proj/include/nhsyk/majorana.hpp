// Copyright 2026 The nhsyk Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>
#include <bit>
#include <complex>
#include <cstdint>
#include <vector>

#include "nhsyk/errors.hpp"
#include "nhsyk/linalg.hpp"

namespace nhsyk {

/// One-nonzero-per-column operator (signed/phased permutation). Majorana
/// operators and their products all have this structure in the computational
/// basis, which makes Hamiltonian assembly O(L) per coupling instead of a
/// dense matrix product chain.
struct ColumnMap {
    std::vector<std::uint32_t> row;
    std::vector<Complex> val;

    int dim() const { return static_cast<int>(row.size()); }

    static ColumnMap identity(int n) {
        ColumnMap m;
        m.row.resize(n);
        m.val.assign(n, Complex(1.0, 0.0));
        for (int j = 0; j < n; ++j) m.row[j] = static_cast<std::uint32_t>(j);
        return m;
    }

    /// Matrix product this * other.
    ColumnMap compose(const ColumnMap& other) const {
        ColumnMap out;
        const int n = other.dim();
        out.row.resize(n);
        out.val.resize(n);
        for (int j = 0; j < n; ++j) {
            const std::uint32_t mid = other.row[j];
            out.row[j] = row[mid];
            out.val[j] = val[mid] * other.val[j];
        }
        return out;
    }

    Matrix dense() const {
        const int n = dim();
        Matrix m = Matrix::Zero(n, n);
        for (int j = 0; j < n; ++j) m(row[j], j) = val[j];
        return m;
    }
};

/// The N Majorana operators on the 2^(N/2)-dimensional Hilbert space,
/// normalized so that {psi_a, psi_b} = delta_ab * I (each psi is a Pauli
/// string scaled by 1/sqrt(2)). Construction is deterministic.
class MajoranaSet {
public:
    explicit MajoranaSet(int n_majoranas) : n_(n_majoranas) {
        if (n_ < 2 || n_ % 2 != 0)
            throw InvalidArgument("MajoranaSet requires an even N >= 2");
        const int sites = n_ / 2;
        dim_ = 1 << sites;
        const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
        ops_.reserve(n_);
        for (int a = 0; a < n_; ++a) {
            const int site = a / 2;
            const bool is_y = (a % 2) != 0;
            const std::uint32_t flip = 1u << site;
            const std::uint32_t zmask = flip - 1u;  // Jordan-Wigner string
            ColumnMap op;
            op.row.resize(dim_);
            op.val.resize(dim_);
            for (std::uint32_t j = 0; j < static_cast<std::uint32_t>(dim_); ++j) {
                const double zsign = (std::popcount(j & zmask) % 2 == 0) ? 1.0 : -1.0;
                Complex elem(1.0, 0.0);
                if (is_y) elem = (j & flip) ? Complex(0.0, -1.0) : Complex(0.0, 1.0);
                op.row[j] = j ^ flip;
                op.val[j] = inv_sqrt2 * zsign * elem;
            }
            ops_.push_back(std::move(op));
        }
    }

    int n_majoranas() const { return n_; }
    int dim() const { return dim_; }

    /// 0-based access (op(0) is psi_1).
    const ColumnMap& op(int a) const { return ops_.at(a); }
    Matrix dense(int a) const { return ops_.at(a).dense(); }

private:
    int n_;
    int dim_;
    std::vector<ColumnMap> ops_;
};

/// Fermion parity: the ordered product psi_1 ... psi_N, phased so P = P^dagger
/// and P^2 = I. In this representation P is diagonal with entries +-1; the
/// overall sign is fixed by P(0,0) = +1.
struct ParityOperator {
    std::vector<double> diag;  // entries are exactly +-1

    int dim() const { return static_cast<int>(diag.size()); }

    Matrix matrix() const {
        const int n = dim();
        Matrix m = Matrix::Zero(n, n);
        for (int j = 0; j < n; ++j) m(j, j) = diag[j];
        return m;
    }

    std::vector<int> sector_indices(int sign) const {
        std::vector<int> idx;
        idx.reserve(diag.size() / 2);
        for (int j = 0; j < dim(); ++j)
            if ((sign > 0) == (diag[j] > 0)) idx.push_back(j);
        return idx;
    }
};

inline ParityOperator parity_operator(const MajoranaSet& ms) {
    ColumnMap prod = ms.op(0);
    for (int a = 1; a < ms.n_majoranas(); ++a) prod = prod.compose(ms.op(a));
    ParityOperator p;
    p.diag.resize(ms.dim());
    const Complex c = prod.val[0];  // constant phase, |c| = 2^{-N/2}
    for (int j = 0; j < ms.dim(); ++j) {
        if (prod.row[j] != static_cast<std::uint32_t>(j))
            throw SymmetryViolation("parity product is not diagonal");
        const Complex z = prod.val[j] / c;
        if (std::abs(std::abs(z.real()) - 1.0) > 1e-12 || std::abs(z.imag()) > 1e-12)
            throw SymmetryViolation("parity entries are not +-1");
        p.diag[j] = z.real() > 0 ? 1.0 : -1.0;
    }
    return p;
}

/// Restrict H to one parity eigenspace. Requires [H, P] = 0 within
/// 1e-10 * max|H|; P is diagonal here so the commutator check is entrywise.
inline Matrix project_to_sector(const Matrix& h, const ParityOperator& p, int sign) {
    if (h.rows() != h.cols() || h.rows() != p.dim())
        throw InvalidArgument("project_to_sector: dimension mismatch");
    if (sign != 1 && sign != -1)
        throw InvalidArgument("project_to_sector: sign must be +-1");
    const double scale = h.cwiseAbs().maxCoeff();
    const double tol = 1e-10 * (scale > 0 ? scale : 1.0);
    for (int j = 0; j < h.cols(); ++j)
        for (int i = 0; i < h.rows(); ++i)
            if (p.diag[i] != p.diag[j] && std::abs(h(i, j)) > tol)
                throw SymmetryViolation("H does not commute with parity");
    const std::vector<int> idx = p.sector_indices(sign);
    Matrix block(idx.size(), idx.size());
    for (std::size_t cj = 0; cj < idx.size(); ++cj)
        for (std::size_t ci = 0; ci < idx.size(); ++ci)
            block(ci, cj) = h(idx[ci], idx[cj]);
    return block;
}

}  // namespace nhsyk
