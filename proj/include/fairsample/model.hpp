#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "fairsample/forest.hpp"
#include "fairsample/logreg.hpp"
#include "fairsample/matrix.hpp"

namespace fairsample {

using ordered_json = nlohmann::ordered_json;

/// A trained scorer: feature row -> probability of the favorable label.
struct Model {
    std::variant<LogRegModel, ForestModel> impl;
    std::uint64_t seed = 0;

    double score(std::span<const double> row) const;
    std::vector<double> score_all(const Matrix& X) const;
    std::string kind() const;

    ordered_json to_json() const;
    static Model from_json(const ordered_json& j);
};

/// Thresholded prediction: label 1 iff score >= threshold.
std::vector<std::int8_t> predict(std::span<const double> scores,
                                 double threshold);
std::vector<std::int8_t> predict(const Model& model, const Matrix& X,
                                 double threshold);

/// The encoding travels inside saved model files so that evaluation data is
/// mapped into the exact feature space the model was trained in.
ordered_json encoding_to_json(const Encoding& enc);
Encoding encoding_from_json(const ordered_json& j);

void save_model_file(const std::string& path, const Model& model,
                     const Encoding& enc);
std::pair<Model, Encoding> load_model_file(const std::string& path);

}  // namespace fairsample
