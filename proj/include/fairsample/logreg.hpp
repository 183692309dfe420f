#pragma once

#include <span>
#include <vector>

#include "fairsample/dataset.hpp"

namespace fairsample {

struct LogRegParams {
    double learning_rate = 0.1;
    double l2 = 1e-4;
    int max_iters = 2000;
    double tol = 1e-6;  // gradient-norm stopping threshold
};

struct LogRegModel {
    std::vector<double> weights;
    double intercept = 0.0;
    bool converged = false;
    int iterations = 0;
    LogRegParams params;

    double score(std::span<const double> row) const;
};

/// Weighted L2-regularized logistic regression, trained by full-batch
/// gradient descent from zero initialization. The data term is normalized by
/// the total weight, so scaling all weights by a constant does not move the
/// minimizer, and integer weights match exact row replication. The intercept
/// is not regularized.
LogRegModel train_logreg(const Dataset& train, const LogRegParams& params);

/// Loss/gradient at an arbitrary parameter point, exposed so tests can check
/// the analytic gradient against finite differences.
double logreg_loss(const Dataset& ds, std::span<const double> weights,
                   double intercept, double l2);
void logreg_gradient(const Dataset& ds, std::span<const double> weights,
                     double intercept, double l2,
                     std::span<double> grad_weights, double& grad_intercept);

}  // namespace fairsample
