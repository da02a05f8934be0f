// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>
#include <complex>

namespace riscp {

using ComplexMatrix = Eigen::MatrixXcd;

/// Column-wise Kronecker product of A (R1 x N) and B (R2 x N).
/// Row (r1-1)*R2 + r2 of the result holds A(r1,n) * B(r2,n), i.e. the
/// first factor varies slowly.  Throws DimensionError on a column-count
/// mismatch.
ComplexMatrix khatri_rao(const ComplexMatrix& a, const ComplexMatrix& b);

// Mode unfoldings of the three-way array Z with entries
//   Z(k,m,p) = sum_n H2(k,n) * H1(n,m) * Phi(p,n),
// H1: N x M, H2: K x N, Phi: P x N.  Row conventions (1-based):
//   mode-1: row (m-1)*P + p, shape PM x K   -> (H1^T kr Phi)  H2^T
//   mode-2: row (p-1)*K + k, shape KP x M   -> (Phi  kr H2)   H1
//   mode-3: row (k-1)*M + m, shape MK x P   -> (H2   kr H1^T) Phi^T
ComplexMatrix unfold_mode1(const ComplexMatrix& h1, const ComplexMatrix& h2,
                           const ComplexMatrix& phi);
ComplexMatrix unfold_mode2(const ComplexMatrix& h1, const ComplexMatrix& h2,
                           const ComplexMatrix& phi);
ComplexMatrix unfold_mode3(const ComplexMatrix& h1, const ComplexMatrix& h2,
                           const ComplexMatrix& phi);

struct PseudoInverse {
    ComplexMatrix matrix;     ///< C x R Moore-Penrose pseudo-inverse
    Eigen::Index rank;        ///< number of singular values above the cutoff
    Eigen::VectorXd singular_values;
};

/// SVD-based Moore-Penrose pseudo-inverse.  Singular values below
/// tol * sigma_max are treated as zero; tol < 0 selects the default
/// machine_epsilon * max(rows, cols).  Rank deficiency is not an error,
/// the effective rank is reported in the result.
PseudoInverse pseudo_inverse(const ComplexMatrix& a, double tol = -1.0);

}  // namespace riscp
