// Copyright 2026 The nhsyk Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "nhsyk/errors.hpp"
#include "nhsyk/linalg.hpp"
#include "nhsyk/model.hpp"

namespace nhsyk {

enum class Sector { Plus = 1, Minus = -1, Full = 0 };

inline const char* to_string(Sector s) {
    switch (s) {
        case Sector::Plus: return "+1";
        case Sector::Minus: return "-1";
        case Sector::Full: return "full";
    }
    return "?";
}

/// Sorted non-negative singular values of one realization.
struct SingularSpectrum {
    std::vector<double> values;  // ascending
    ModelConfig config;
    Sector sector = Sector::Plus;

    int size() const { return static_cast<int>(values.size()); }
};

/// Ascending singular values via direct SVD (the production route).
inline std::vector<double> singular_values(const Matrix& h) {
    return lapack_singular_values(h);
}

/// SVD factors H = U Sigma V^dagger, Sigma descending.
struct SVDFactors {
    Eigen::MatrixXcd u;
    Eigen::VectorXd sigma;
    Eigen::MatrixXcd v;
};

inline SVDFactors svd_factors(const Matrix& h) {
    LapackSvd f = lapack_svd(h);
    return {std::move(f.u), std::move(f.sigma), std::move(f.v)};
}

/// The 2L x 2L block matrix [[0, H], [H^dagger, 0]]; its eigenvalues are
/// {+-sigma_n}.
inline Matrix hermitize(const Matrix& h) {
    if (h.rows() != h.cols())
        throw InvalidArgument("hermitize requires a square matrix");
    const int n = static_cast<int>(h.rows());
    Matrix big = Matrix::Zero(2 * n, 2 * n);
    big.block(0, n, n, n) = h;
    big.block(n, 0, n, n) = h.adjoint();
    return big;
}

/// Cross-check route: ascending singular values from the positive half of the
/// hermitized spectrum.
inline std::vector<double> singular_values_via_hermitization(const Matrix& h) {
    const std::vector<double> w = lapack_eigvalsh(hermitize(h));
    const std::size_t n = w.size() / 2;
    std::vector<double> s(w.begin() + static_cast<std::ptrdiff_t>(n), w.end());
    return s;  // already ascending
}

/// Restore eigenvalue signs from the left/right singular-vector overlap
/// (valid for Hermitian H: |u_n> = +-|v_n>). Returns the ascending signed
/// spectrum, equal to the eigenvalue spectrum of H.
///
/// Degenerate singular values are handled as a cluster: within a cluster the
/// overlap matrix U_c^dagger V_c is Hermitian unitary and its +-1 eigenvalues
/// carry the signs; only the sorted multiset is contractual there.
inline std::vector<double> sign_align(const SVDFactors& f) {
    const int n = static_cast<int>(f.sigma.size());
    const Eigen::VectorXcd sig = f.sigma.cast<Complex>();
    const Matrix h = f.u * sig.asDiagonal() * f.v.adjoint();
    const double scale = h.cwiseAbs().maxCoeff();
    if ((h - h.adjoint()).cwiseAbs().maxCoeff() > 1e-10 * (scale > 0 ? scale : 1.0))
        throw NonHermitianInput("sign_align requires a Hermitian matrix");

    const double smax = n > 0 ? f.sigma(0) : 0.0;
    const double cluster_tol = 1e-8 * (smax > 0 ? smax : 1.0);
    const double zero_tol = 1e-13 * (smax > 0 ? smax : 1.0);

    std::vector<double> signed_values;
    signed_values.reserve(n);
    int i = 0;
    while (i < n) {
        int j = i + 1;
        while (j < n && std::abs(f.sigma(j) - f.sigma(i)) <= cluster_tol) ++j;
        const int width = j - i;
        if (f.sigma(i) <= zero_tol) {
            // zero singular values: sign +1 by convention
            for (int k = i; k < j; ++k) signed_values.push_back(f.sigma(k));
        } else if (width == 1) {
            const Complex ov = f.u.col(i).dot(f.v.col(i));
            if (std::abs(ov) < 0.99)
                throw NonHermitianInput("left/right singular vectors not parallel");
            signed_values.push_back(ov.real() >= 0 ? f.sigma(i) : -f.sigma(i));
        } else {
            const Matrix overlap = f.u.middleCols(i, width).adjoint() * f.v.middleCols(i, width);
            const Matrix sym = 0.5 * (overlap + overlap.adjoint());
            const std::vector<double> ev = lapack_eigvalsh(sym);
            for (int k = 0; k < width; ++k) {
                if (std::abs(ev[k]) < 0.99)
                    throw NonHermitianInput("degenerate cluster overlap not +-1");
                signed_values.push_back(ev[k] >= 0 ? f.sigma(i + k) : -f.sigma(i + k));
            }
        }
        i = j;
    }
    std::sort(signed_values.begin(), signed_values.end());
    return signed_values;
}

}  // namespace nhsyk
