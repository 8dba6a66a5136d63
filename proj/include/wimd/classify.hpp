#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "wimd/pca.hpp"

namespace wimd {

/// Training samples as unit-norm dictionary atoms, one column per sample.
struct Dictionary {
    Eigen::MatrixXd atoms;  // Md x N_train, unit-norm columns
    std::vector<MotionClass> labels;

    int atom_dim() const { return static_cast<int>(atoms.rows()); }
    int atom_count() const { return static_cast<int>(atoms.cols()); }

    /// Normalizes the dataset columns; requires at least one atom per class
    /// and nonzero column norms.
    static Dictionary build(const SignatureDataset& reduced_train);
};

/// K-sparse coding result.
struct SparseCode {
    Eigen::VectorXd coefficients;  // N_train, zero outside support
    std::vector<int> support;      // ascending, |support| <= K
    double residual_norm = 0.0;
};

/// Greedy K-sparse recovery: initialize with the K largest correlations,
/// then iterate support expansion / least squares / pruning until the
/// residual stops decreasing (at most max_iterations rounds). Least squares
/// on a rank-deficient support resolves to the minimum-norm solution.
/// residual_trace, when given, receives the accepted residual norms
/// (non-increasing).
SparseCode subspace_pursuit(const Dictionary& dict, const Eigen::VectorXd& y, int K,
                            std::vector<double>* residual_trace = nullptr,
                            int max_iterations = 50);

/// || y - atoms * delta_i(code) ||_2 where delta_i keeps only the
/// coefficients whose atom label equals class_i.
double class_residual(const Dictionary& dict, const SparseCode& code,
                      const Eigen::VectorXd& y, MotionClass class_i);

struct SrcDecision {
    MotionClass label = MotionClass::M1;
    std::vector<double> class_residuals;  // indexed by class
    SparseCode code;
};

/// Sparse-representation classification: subspace pursuit, then the class
/// with the minimum reconstruction residual. Ties go to the lowest class
/// index.
SrcDecision src_classify(const Dictionary& dict, const Eigen::VectorXd& y, int K);

/// One-vs-rest linear margin classifiers.
struct SvmModel {
    Eigen::MatrixXd weights;  // dim x n_classes
    Eigen::VectorXd bias;     // n_classes
    double lambda = 0.0;
    int epochs = 0;
    std::uint64_t seed = 0;
};

/// L2-regularized hinge loss minimized by stochastic subgradient descent
/// (step 1/(lambda*t)); deterministic for a given seed. Requires at least
/// two classes in the training set.
SvmModel train_linear_svm(const SignatureDataset& train, double lambda, int epochs,
                          std::uint64_t seed);

/// Argmax over per-class scores w_i^T y + b_i; ties to the lowest index.
MotionClass svm_classify(const SvmModel& model, const Eigen::VectorXd& y);

}  // namespace wimd
