#include "wimd/classify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <set>

namespace wimd {

Dictionary Dictionary::build(const SignatureDataset& reduced_train) {
    if (reduced_train.size() < 1) throw std::invalid_argument("Dictionary: empty training set");
    Dictionary dict;
    dict.atoms = reduced_train.data_matrix();
    dict.labels = reduced_train.labels;
    for (int i = 0; i < dict.atom_count(); ++i) {
        const double norm = dict.atoms.col(i).norm();
        if (norm < 1e-12) throw std::invalid_argument("Dictionary: zero-norm training sample");
        dict.atoms.col(i) /= norm;
    }
    return dict;
}

namespace {

// Indices of the k largest |values|, ties to the lower index.
std::vector<int> top_k_abs(const Eigen::VectorXd& values, int k) {
    std::vector<int> idx(static_cast<std::size_t>(values.size()));
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(), [&](int a, int b) {
        return std::abs(values(a)) > std::abs(values(b));
    });
    idx.resize(static_cast<std::size_t>(k));
    return idx;
}

// Minimum-norm least squares on the support columns.
Eigen::VectorXd solve_support(const Eigen::MatrixXd& atoms, const std::vector<int>& support,
                              const Eigen::VectorXd& y) {
    Eigen::MatrixXd sub(atoms.rows(), static_cast<Eigen::Index>(support.size()));
    for (std::size_t j = 0; j < support.size(); ++j) sub.col(static_cast<Eigen::Index>(j)) = atoms.col(support[j]);
    return sub.completeOrthogonalDecomposition().solve(y);
}

Eigen::VectorXd expand_coefficients(int n, const std::vector<int>& support,
                                    const Eigen::VectorXd& coeffs) {
    Eigen::VectorXd full = Eigen::VectorXd::Zero(n);
    for (std::size_t j = 0; j < support.size(); ++j) full(support[j]) = coeffs(static_cast<Eigen::Index>(j));
    return full;
}

}  // namespace

SparseCode subspace_pursuit(const Dictionary& dict, const Eigen::VectorXd& y, int K,
                            std::vector<double>* residual_trace, int max_iterations) {
    const int n = dict.atom_count();
    if (y.size() != dict.atom_dim()) throw std::invalid_argument("subspace_pursuit: dim mismatch");
    if (K < 1 || K > std::min(dict.atom_dim(), n))
        throw std::invalid_argument("subspace_pursuit: K out of range");

    const Eigen::MatrixXd& atoms = dict.atoms;

    std::vector<int> support = top_k_abs(atoms.transpose() * y, K);
    std::sort(support.begin(), support.end());
    Eigen::VectorXd coeffs = solve_support(atoms, support, y);
    Eigen::VectorXd full = expand_coefficients(n, support, coeffs);
    Eigen::VectorXd residual = y - atoms * full;
    double best_norm = residual.norm();
    if (residual_trace) residual_trace->push_back(best_norm);

    for (int iter = 0; iter < max_iterations; ++iter) {
        // Expand with the K strongest residual correlations.
        const std::vector<int> extra = top_k_abs(atoms.transpose() * residual, K);
        std::set<int> merged(support.begin(), support.end());
        merged.insert(extra.begin(), extra.end());
        const std::vector<int> expanded(merged.begin(), merged.end());

        const Eigen::VectorXd coeffs_exp = solve_support(atoms, expanded, y);
        const Eigen::VectorXd full_exp = expand_coefficients(n, expanded, coeffs_exp);

        // Prune to the K largest coefficients, then re-fit.
        std::vector<int> pruned = top_k_abs(full_exp, K);
        std::sort(pruned.begin(), pruned.end());
        const Eigen::VectorXd coeffs_new = solve_support(atoms, pruned, y);
        const Eigen::VectorXd full_new = expand_coefficients(n, pruned, coeffs_new);
        const Eigen::VectorXd residual_new = y - atoms * full_new;
        const double norm_new = residual_new.norm();

        if (norm_new >= best_norm * (1.0 - 1e-12)) break;
        support = std::move(pruned);
        full = full_new;
        residual = residual_new;
        best_norm = norm_new;
        if (residual_trace) residual_trace->push_back(best_norm);
    }

    SparseCode code;
    code.coefficients = full;
    code.support = support;
    code.residual_norm = best_norm;
    return code;
}

double class_residual(const Dictionary& dict, const SparseCode& code, const Eigen::VectorXd& y,
                      MotionClass class_i) {
    if (std::find(dict.labels.begin(), dict.labels.end(), class_i) == dict.labels.end())
        throw std::invalid_argument("class_residual: class not present in dictionary");
    Eigen::VectorXd masked = Eigen::VectorXd::Zero(dict.atom_count());
    for (int j : code.support)
        if (dict.labels[static_cast<std::size_t>(j)] == class_i) masked(j) = code.coefficients(j);
    return (y - dict.atoms * masked).norm();
}

SrcDecision src_classify(const Dictionary& dict, const Eigen::VectorXd& y, int K) {
    SrcDecision decision;
    decision.code = subspace_pursuit(dict, y, K);
    decision.class_residuals.assign(kNumClasses, std::numeric_limits<double>::infinity());

    const std::set<MotionClass> present(dict.labels.begin(), dict.labels.end());
    int best = -1;
    for (MotionClass c : all_classes()) {
        if (!present.count(c)) continue;
        const double r = class_residual(dict, decision.code, y, c);
        decision.class_residuals[static_cast<std::size_t>(class_index(c))] = r;
        if (best < 0 || r < decision.class_residuals[static_cast<std::size_t>(best)]) best = class_index(c);
    }
    decision.label = class_from_index(best);
    return decision;
}

SvmModel train_linear_svm(const SignatureDataset& train, double lambda, int epochs,
                          std::uint64_t seed) {
    if (lambda <= 0.0) throw std::invalid_argument("train_linear_svm: lambda must be > 0");
    if (epochs < 1) throw std::invalid_argument("train_linear_svm: epochs must be >= 1");
    const int n = train.size();
    const std::set<MotionClass> present(train.labels.begin(), train.labels.end());
    if (present.size() < 2) throw std::invalid_argument("train_linear_svm: need >= 2 classes");
    const int dim = train.dim();

    SvmModel model;
    model.weights = Eigen::MatrixXd::Zero(dim, kNumClasses);
    model.bias = Eigen::VectorXd::Zero(kNumClasses);
    model.lambda = lambda;
    model.epochs = epochs;
    model.seed = seed;

    for (MotionClass c : all_classes()) {
        if (!present.count(c)) continue;
        const int ci = class_index(c);
        Eigen::VectorXd w = Eigen::VectorXd::Zero(dim);
        double b = 0.0;

        std::mt19937_64 rng(seed + static_cast<std::uint64_t>(ci) * 0x9e3779b97f4a7c15ULL);
        std::vector<int> order(static_cast<std::size_t>(n));
        std::iota(order.begin(), order.end(), 0);

        long long t = 0;
        for (int epoch = 0; epoch < epochs; ++epoch) {
            std::shuffle(order.begin(), order.end(), rng);
            for (int i : order) {
                ++t;
                // Bounded step for the regularized weights; the bias is
                // unregularized with its own 1/t schedule.
                const double eta = 1.0 / (lambda * static_cast<double>(t) + 1.0);
                const double eta_b = 1.0 / static_cast<double>(t);
                const auto idx = static_cast<std::size_t>(i);
                const double target = train.labels[idx] == c ? 1.0 : -1.0;
                const double margin = target * (w.dot(train.samples[idx]) + b);
                w *= (1.0 - eta * lambda);
                if (margin < 1.0) {
                    w += eta * target * train.samples[idx];
                    b += eta_b * target;
                }
            }
        }
        model.weights.col(ci) = w;
        model.bias(ci) = b;
    }
    return model;
}

MotionClass svm_classify(const SvmModel& model, const Eigen::VectorXd& y) {
    if (y.size() != model.weights.rows())
        throw std::invalid_argument("svm_classify: dimension mismatch");
    const Eigen::VectorXd scores = model.weights.transpose() * y + model.bias;
    int best = 0;
    for (int c = 1; c < kNumClasses; ++c)
        if (scores(c) > scores(best)) best = c;
    return class_from_index(best);
}

}  // namespace wimd
