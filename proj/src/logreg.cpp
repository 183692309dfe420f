#include "fairsample/logreg.hpp"

#include <cmath>

#include "fairsample/errors.hpp"

namespace fairsample {

namespace {

double sigmoid(double z) {
    if (z >= 0.0) {
        return 1.0 / (1.0 + std::exp(-z));
    }
    const double e = std::exp(z);
    return e / (1.0 + e);
}

// Numerically stable cross-entropy of a logit against a binary label:
// softplus(z) - y*z.
double cross_entropy(double z, double y) {
    const double softplus =
        std::log1p(std::exp(-std::abs(z))) + std::max(z, 0.0);
    return softplus - y * z;
}

double total_weight(const Dataset& ds) {
    double w = 0.0;
    for (double wi : ds.w) w += wi;
    if (!(w > 0.0)) {
        throw ArgumentError("training requires positive total weight");
    }
    return w;
}

}  // namespace

double LogRegModel::score(std::span<const double> row) const {
    double z = intercept;
    for (std::size_t j = 0; j < weights.size() && j < row.size(); ++j) {
        z += weights[j] * row[j];
    }
    return sigmoid(z);
}

double logreg_loss(const Dataset& ds, std::span<const double> weights,
                   double intercept, double l2) {
    const double W = total_weight(ds);
    double loss = 0.0;
    for (std::size_t i = 0; i < ds.size(); ++i) {
        const double* x = ds.X.row(i);
        double z = intercept;
        for (std::size_t j = 0; j < weights.size(); ++j) z += weights[j] * x[j];
        loss += ds.w[i] * cross_entropy(z, static_cast<double>(ds.y[i]));
    }
    loss /= W;
    double reg = 0.0;
    for (double wj : weights) reg += wj * wj;
    return loss + 0.5 * l2 * reg;
}

void logreg_gradient(const Dataset& ds, std::span<const double> weights,
                     double intercept, double l2,
                     std::span<double> grad_weights, double& grad_intercept) {
    const double W = total_weight(ds);
    std::fill(grad_weights.begin(), grad_weights.end(), 0.0);
    grad_intercept = 0.0;
    for (std::size_t i = 0; i < ds.size(); ++i) {
        const double* x = ds.X.row(i);
        double z = intercept;
        for (std::size_t j = 0; j < weights.size(); ++j) z += weights[j] * x[j];
        const double r = ds.w[i] * (sigmoid(z) - static_cast<double>(ds.y[i]));
        for (std::size_t j = 0; j < weights.size(); ++j) {
            grad_weights[j] += r * x[j];
        }
        grad_intercept += r;
    }
    for (std::size_t j = 0; j < weights.size(); ++j) {
        grad_weights[j] = grad_weights[j] / W + l2 * weights[j];
    }
    grad_intercept /= W;
}

LogRegModel train_logreg(const Dataset& train, const LogRegParams& params) {
    if (train.size() < 2) {
        throw ArgumentError("train_logreg needs at least 2 rows");
    }
    if (params.learning_rate <= 0.0 || params.l2 < 0.0 ||
        params.max_iters < 1 || params.tol <= 0.0) {
        throw ArgumentError("train_logreg: invalid parameters");
    }

    const std::size_t d = train.dim();
    LogRegModel model;
    model.params = params;
    model.weights.assign(d, 0.0);

    std::vector<double> grad(d, 0.0);
    double grad_b = 0.0;
    for (int iter = 0; iter < params.max_iters; ++iter) {
        logreg_gradient(train, model.weights, model.intercept, params.l2, grad,
                        grad_b);
        double norm_sq = grad_b * grad_b;
        for (double gj : grad) norm_sq += gj * gj;
        if (!std::isfinite(norm_sq)) {
            throw TrainingError("logistic regression diverged at iteration " +
                                std::to_string(iter));
        }
        model.iterations = iter + 1;
        if (std::sqrt(norm_sq) <= params.tol) {
            model.converged = true;
            return model;
        }
        for (std::size_t j = 0; j < d; ++j) {
            model.weights[j] -= params.learning_rate * grad[j];
        }
        model.intercept -= params.learning_rate * grad_b;
    }
    const double final_loss =
        logreg_loss(train, model.weights, model.intercept, params.l2);
    if (!std::isfinite(final_loss)) {
        throw TrainingError("logistic regression diverged at iteration " +
                            std::to_string(params.max_iters));
    }
    return model;  // converged stays false: max_iters was hit
}

}  // namespace fairsample
