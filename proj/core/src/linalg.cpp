// SPDX-License-Identifier: Apache-2.0
#include "riscp/linalg.hpp"

#include <Eigen/SVD>
#include <limits>
#include <string>

#include "riscp/errors.hpp"

namespace riscp {

namespace {

void require_conformable(const ComplexMatrix& h1, const ComplexMatrix& h2,
                         const ComplexMatrix& phi) {
    const auto n = h1.rows();
    if (h2.cols() != n || phi.cols() != n)
        throw DimensionError("unfold: H1 (N x M), H2 (K x N), Phi (P x N) disagree on N: " +
                             std::to_string(n) + ", " + std::to_string(h2.cols()) + ", " +
                             std::to_string(phi.cols()));
}

}  // namespace

ComplexMatrix khatri_rao(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.cols() != b.cols())
        throw DimensionError("khatri_rao: column counts differ: " + std::to_string(a.cols()) +
                             " vs " + std::to_string(b.cols()));
    ComplexMatrix out(a.rows() * b.rows(), a.cols());
    for (Eigen::Index n = 0; n < a.cols(); ++n)
        for (Eigen::Index r1 = 0; r1 < a.rows(); ++r1)
            out.col(n).segment(r1 * b.rows(), b.rows()) = a(r1, n) * b.col(n);
    return out;
}

ComplexMatrix unfold_mode1(const ComplexMatrix& h1, const ComplexMatrix& h2,
                           const ComplexMatrix& phi) {
    require_conformable(h1, h2, phi);
    return khatri_rao(h1.transpose(), phi) * h2.transpose();
}

ComplexMatrix unfold_mode2(const ComplexMatrix& h1, const ComplexMatrix& h2,
                           const ComplexMatrix& phi) {
    require_conformable(h1, h2, phi);
    return khatri_rao(phi, h2) * h1;
}

ComplexMatrix unfold_mode3(const ComplexMatrix& h1, const ComplexMatrix& h2,
                           const ComplexMatrix& phi) {
    require_conformable(h1, h2, phi);
    return khatri_rao(h2, h1.transpose()) * phi.transpose();
}

PseudoInverse pseudo_inverse(const ComplexMatrix& a, double tol) {
    if (!a.allFinite()) throw DimensionError("pseudo_inverse: input has NaN/Inf entries");
    if (tol < 0.0)
        tol = std::numeric_limits<double>::epsilon() *
              static_cast<double>(std::max(a.rows(), a.cols()));

    Eigen::JacobiSVD<ComplexMatrix> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const Eigen::VectorXd& sv = svd.singularValues();
    const double cutoff = sv.size() > 0 ? tol * sv(0) : 0.0;

    Eigen::Index rank = 0;
    while (rank < sv.size() && sv(rank) > cutoff && sv(rank) > 0.0) ++rank;

    Eigen::VectorXd inv_sv = Eigen::VectorXd::Zero(sv.size());
    for (Eigen::Index i = 0; i < rank; ++i) inv_sv(i) = 1.0 / sv(i);

    PseudoInverse out;
    out.matrix = svd.matrixV() * inv_sv.asDiagonal() * svd.matrixU().adjoint();
    out.rank = rank;
    out.singular_values = sv;
    return out;
}

}  // namespace riscp
