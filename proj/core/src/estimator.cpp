// SPDX-License-Identifier: Apache-2.0
#include "riscp/estimator.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/QR>
#include <Eigen/SVD>
#include <cmath>
#include <limits>

#include "riscp/errors.hpp"

namespace riscp {

namespace {

double default_tol(Eigen::Index rows, Eigen::Index cols) {
    return std::numeric_limits<double>::epsilon() * static_cast<double>(std::max(rows, cols));
}

// LS solve for X (N x C) minimizing ||Z - (F1 kr F2) X||_F via the
// Khatri-Rao Gram identity  A^H A = (F1^H F1) .* (F2^H F2).  The Gram
// spectrum doubles as the column-rank check: singular values of A are
// the square roots of the Gram eigenvalues.
ComplexMatrix kr_least_squares(const ComplexMatrix& f1, const ComplexMatrix& f2,
                               const ComplexMatrix& z, double tol) {
    const Eigen::Index n = f1.cols();
    const ComplexMatrix a = khatri_rao(f1, f2);
    if (z.rows() != a.rows()) throw DimensionError("als step: stacked tensor rows disagree");
    if (tol < 0.0) tol = default_tol(a.rows(), a.cols());

    const ComplexMatrix gram =
        (f1.adjoint() * f1).cwiseProduct(f2.adjoint() * f2);
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> eig(gram);
    const Eigen::VectorXd& lambda = eig.eigenvalues();  // ascending
    const double lambda_max = std::max(lambda(n - 1), 0.0);
    const double cutoff = tol * tol * lambda_max;

    Eigen::Index rank = 0;
    for (Eigen::Index i = 0; i < n; ++i)
        if (lambda(i) > cutoff && lambda(i) > 0.0) ++rank;
    if (rank < n)
        throw IllPosedUpdateError("als step: Khatri-Rao factor is rank deficient (rank " +
                                      std::to_string(rank) + " < " + std::to_string(n) + ")",
                                  rank, n);

    const ComplexMatrix rhs = eig.eigenvectors().adjoint() * (a.adjoint() * z);
    return eig.eigenvectors() * lambda.cwiseInverse().asDiagonal() * rhs;
}

double squared_norm(const ComplexMatrix& m) { return m.squaredNorm(); }

// ||cur - prev||_F^2 / ||cur||_F^2 with the zero-matrix convention
// 0 for an exact repeat and +inf otherwise.
double relative_sq_change(const ComplexMatrix& cur, const ComplexMatrix& prev) {
    const double denom = squared_norm(cur);
    const double num = squared_norm(cur - prev);
    if (denom == 0.0) return num == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
    return num / denom;
}

}  // namespace

void AlsConfig::validate() const {
    if (!(epsilon > 0.0)) throw FeasibilityError("AlsConfig: epsilon must be positive");
    if (max_iters < 1) throw FeasibilityError("AlsConfig: max_iters must be at least 1");
}

std::string FeasibilityReport::message() const {
    if (feasible) return "feasible";
    std::string out = "infeasible:";
    for (const auto& v : violations) out += " [" + v + "]";
    return out;
}

FeasibilityReport check_feasibility(const SystemDims& dims) {
    FeasibilityReport report;
    if (dims.m < dims.n)
        report.violations.push_back("M >= N violated (" + std::to_string(dims.m) + " < " +
                                    std::to_string(dims.n) + ")");
    if (dims.k < dims.n)
        report.violations.push_back("K >= N violated (" + std::to_string(dims.k) + " < " +
                                    std::to_string(dims.n) + ")");
    if (dims.p > dims.n)
        report.violations.push_back("P <= N violated (" + std::to_string(dims.p) + " > " +
                                    std::to_string(dims.n) + ")");
    report.feasible = report.violations.empty();
    return report;
}

ComplexMatrix init_h1(const ReceivedTensor& z, int n) {
    if (n <= 0) throw DegenerateInputError("init_h1: N must be positive");
    const ComplexMatrix z2 = stack_mode2(z);  // KP x M

    // Right singular vectors of Z2 via an unpivoted QR reduction: Z2 and
    // its triangular factor share singular values and right vectors.
    ComplexMatrix r;
    if (z2.rows() >= z2.cols()) {
        Eigen::HouseholderQR<ComplexMatrix> qr(z2);
        r = qr.matrixQR().topRows(z2.cols()).triangularView<Eigen::Upper>();
    } else {
        r = z2;
    }
    Eigen::JacobiSVD<ComplexMatrix> svd(r, Eigen::ComputeThinV);
    const Eigen::VectorXd& sv = svd.singularValues();

    const double cutoff = sv.size() > 0 ? default_tol(z2.rows(), z2.cols()) * sv(0) : 0.0;
    Eigen::Index nonzero = 0;
    while (nonzero < sv.size() && sv(nonzero) > cutoff && sv(nonzero) > 0.0) ++nonzero;
    if (nonzero < n)
        throw DegenerateInputError("init_h1: mode-2 stack has " + std::to_string(nonzero) +
                                   " numerically nonzero singular values, need " +
                                   std::to_string(n));

    // V = H1^H Q for invertible Q on noiseless rank-N data, so the
    // adjoint (not the plain transpose) shares H1's row space.
    return svd.matrixV().leftCols(n).adjoint();  // N x M
}

ComplexMatrix als_step_h2(const ComplexMatrix& z1, const ComplexMatrix& h1_hat,
                          const PhaseMatrix& phase, double pinv_tol) {
    if (h1_hat.rows() != phase.phi.cols())
        throw DimensionError("als_step_h2: H1 rows and Phi columns disagree on N");
    // Z1 = (H1^T kr Phi) H2^T
    return kr_least_squares(h1_hat.transpose(), phase.phi, z1, pinv_tol).transpose();
}

ComplexMatrix als_step_h1(const ComplexMatrix& z2, const ComplexMatrix& h2_hat,
                          const PhaseMatrix& phase, double pinv_tol) {
    if (h2_hat.cols() != phase.phi.cols())
        throw DimensionError("als_step_h1: H2 columns and Phi columns disagree on N");
    // Z2 = (Phi kr H2) H1
    return kr_least_squares(phase.phi, h2_hat, z2, pinv_tol);
}

EstimationResult als_estimate(const ReceivedTensor& z, const PhaseMatrix& phase,
                              const AlsConfig& cfg, const std::optional<ComplexMatrix>& initial_h1) {
    cfg.validate();
    const int m = z.antennas();
    const int k = z.users();
    const int p = z.phases();
    const int n = phase.elements();
    if (phase.phases() != p)
        throw DimensionError("als_estimate: Phi rows and tensor slice count disagree on P");

    SystemDims dims{m, k, n, p, z.dims.t >= m ? z.dims.t : m};
    const auto report = check_feasibility(dims);
    if (!report.feasible) throw FeasibilityError("als_estimate: " + report.message());

    const ComplexMatrix z1 = stack_mode1(z);
    const ComplexMatrix z2 = stack_mode2(z);

    EstimationResult result;
    if (initial_h1) {
        if (initial_h1->rows() != n || initial_h1->cols() != m)
            throw DimensionError("als_estimate: initial H1 must be N x M");
        result.h1 = *initial_h1;
    } else {
        result.h1 = init_h1(z, n);
    }
    ComplexMatrix prev_h1 = result.h1;
    ComplexMatrix prev_h2 = ComplexMatrix::Zero(k, n);

    for (int iter = 1; iter <= cfg.max_iters; ++iter) {
        try {
            result.h2 = als_step_h2(z1, result.h1, phase, cfg.pinv_tol);
            result.h1 = als_step_h1(z2, result.h2, phase, cfg.pinv_tol);
        } catch (const IllPosedUpdateError& e) {
            throw IllPosedUpdateError(std::string(e.what()) + " at iteration " +
                                          std::to_string(iter),
                                      e.effective_rank, e.required_rank, iter);
        }

        IterationStats stats;
        stats.h1_change = relative_sq_change(result.h1, prev_h1);
        stats.h2_change = relative_sq_change(result.h2, prev_h2);
        stats.residual = squared_norm(z2 - khatri_rao(phase.phi, result.h2) * result.h1);
        result.history.push_back(stats);
        prev_h1 = result.h1;
        prev_h2 = result.h2;

        if (stats.h1_change <= cfg.epsilon || stats.h2_change <= cfg.epsilon) {
            result.converged = true;
            break;
        }
    }
    result.iterations = static_cast<int>(result.history.size());
    return result;
}

ComplexMatrix genie_ls_h2(const ReceivedTensor& z, const ComplexMatrix& h1_true,
                          const PhaseMatrix& phase, double pinv_tol) {
    return als_step_h2(stack_mode1(z), h1_true, phase, pinv_tol);
}

ComplexMatrix genie_ls_h1(const ReceivedTensor& z, const ComplexMatrix& h2_true,
                          const PhaseMatrix& phase, double pinv_tol) {
    return als_step_h1(stack_mode2(z), h2_true, phase, pinv_tol);
}

}  // namespace riscp
