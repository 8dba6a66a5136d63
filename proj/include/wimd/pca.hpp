#pragma once

#include <Eigen/Dense>
#include <vector>

#include "wimd/common.hpp"

namespace wimd {

/// Labeled signature collection; one column per sample (full-dimension P or
/// reduced Md).
struct SignatureDataset {
    std::vector<Eigen::VectorXd> samples;
    std::vector<MotionClass> labels;
    std::vector<int> channels;

    int size() const { return static_cast<int>(samples.size()); }
    int dim() const { return samples.empty() ? 0 : static_cast<int>(samples.front().size()); }

    void add(Eigen::VectorXd sample, MotionClass label, int channel);

    /// dim x N matrix, one column per sample.
    Eigen::MatrixXd data_matrix() const;
};

/// Principal-component projection fitted on a training set.
struct PcaModel {
    Eigen::VectorXd mean;         // P
    Eigen::MatrixXd basis;        // P x Md, orthonormal columns
    Eigen::VectorXd eigenvalues;  // Md, descending variances

    int input_dim() const { return static_cast<int>(mean.size()); }
    int components() const { return static_cast<int>(basis.cols()); }
};

/// Fit mean + top-n_components eigenvectors of the sample covariance via a
/// thin SVD of the centered data matrix. Eigenvalues are the (N-1)-normalized
/// variances; eigenvector signs are fixed so the largest-magnitude entry of
/// each column is positive.
PcaModel fit_pca(const SignatureDataset& train, int n_components);

/// Smallest component count whose eigenvalues capture at least var_fraction
/// of the training variance, capped at max_components.
PcaModel fit_pca_auto(const SignatureDataset& train, double var_fraction = 0.95,
                      int max_components = 60);

/// basis^T * (d - mean).
Eigen::VectorXd project(const PcaModel& model, const Eigen::VectorXd& d);

/// Projects every sample; labels/channels carried over.
SignatureDataset project_dataset(const PcaModel& model, const SignatureDataset& ds);

}  // namespace wimd
