// Copyright 2026 The nhsyk Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

// Thin wrappers around the LAPACKE dense kernels used throughout:
// zgesdd for singular values / full SVD, zheevd for Hermitian eigensolves.
// All results for a fixed input are deterministic.

#include <Eigen/Dense>
#include <algorithm>
#include <complex>
#include <string>
#include <vector>

#include <lapacke.h>

#include "nhsyk/errors.hpp"

namespace nhsyk {

using Matrix = Eigen::MatrixXcd;
using Complex = std::complex<double>;

namespace detail {

inline lapack_complex_double* lp(Complex* p) {
    return reinterpret_cast<lapack_complex_double*>(p);
}

inline void check_info(int info, const std::string& what) {
    if (info != 0)
        throw std::runtime_error(what + " failed, info=" + std::to_string(info));
}

}  // namespace detail

/// Singular values of a square complex matrix, sorted ascending.
inline std::vector<double> lapack_singular_values(Matrix a) {
    if (a.rows() != a.cols())
        throw InvalidArgument("singular values require a square matrix");
    const int n = static_cast<int>(a.rows());
    std::vector<double> s(static_cast<std::size_t>(n));
    const int info = LAPACKE_zgesdd(LAPACK_COL_MAJOR, 'N', n, n,
                                    detail::lp(a.data()), n, s.data(),
                                    nullptr, 1, nullptr, 1);
    detail::check_info(info, "zgesdd");
    std::sort(s.begin(), s.end());
    return s;
}

struct LapackSvd {
    Eigen::MatrixXcd u;
    Eigen::VectorXd sigma;  // descending (LAPACK order)
    Eigen::MatrixXcd v;     // columns are right singular vectors; a = u * diag(sigma) * v.adjoint()
};

/// Full SVD a = U diag(sigma) V^dagger.
inline LapackSvd lapack_svd(Matrix a) {
    if (a.rows() != a.cols())
        throw InvalidArgument("svd requires a square matrix");
    const int n = static_cast<int>(a.rows());
    LapackSvd out;
    out.u.resize(n, n);
    out.sigma.resize(n);
    Eigen::MatrixXcd vt(n, n);
    const int info = LAPACKE_zgesdd(LAPACK_COL_MAJOR, 'A', n, n,
                                    detail::lp(a.data()), n, out.sigma.data(),
                                    detail::lp(out.u.data()), n,
                                    detail::lp(vt.data()), n);
    detail::check_info(info, "zgesdd");
    out.v = vt.adjoint();
    return out;
}

/// Eigenvalues of a Hermitian matrix, ascending. Only the lower triangle is read.
inline std::vector<double> lapack_eigvalsh(Matrix a) {
    if (a.rows() != a.cols())
        throw InvalidArgument("eigvalsh requires a square matrix");
    const int n = static_cast<int>(a.rows());
    std::vector<double> w(static_cast<std::size_t>(n));
    const int info = LAPACKE_zheevd(LAPACK_COL_MAJOR, 'N', 'L', n,
                                    detail::lp(a.data()), n, w.data());
    detail::check_info(info, "zheevd");
    return w;
}

/// Eigen-decomposition of a Hermitian matrix; eigenvalues ascending,
/// matching eigenvectors in the columns of `vectors`.
struct LapackEigh {
    Eigen::VectorXd values;
    Eigen::MatrixXcd vectors;
};

inline LapackEigh lapack_eigh(Matrix a) {
    if (a.rows() != a.cols())
        throw InvalidArgument("eigh requires a square matrix");
    const int n = static_cast<int>(a.rows());
    LapackEigh out;
    out.values.resize(n);
    const int info = LAPACKE_zheevd(LAPACK_COL_MAJOR, 'V', 'L', n,
                                    detail::lp(a.data()), n, out.values.data());
    detail::check_info(info, "zheevd");
    out.vectors = std::move(a);
    return out;
}

/// Compensated (Kahan) accumulator; keeps ensemble pooling independent of
/// summation chunking.
class KahanSum {
public:
    void add(double x) {
        const double y = x - c_;
        const double t = s_ + y;
        c_ = (t - s_) - y;
        s_ = t;
    }
    double value() const { return s_; }

private:
    double s_ = 0.0;
    double c_ = 0.0;
};

}  // namespace nhsyk
