#include "fairsample/model.hpp"

#include <fstream>

#include "fairsample/errors.hpp"

namespace fairsample {

double Model::score(std::span<const double> row) const {
    return std::visit([&](const auto& m) { return m.score(row); }, impl);
}

std::vector<double> Model::score_all(const Matrix& X) const {
    std::vector<double> s(X.rows);
    for (std::size_t i = 0; i < X.rows; ++i) s[i] = score(X.row_span(i));
    return s;
}

std::string Model::kind() const {
    return std::holds_alternative<LogRegModel>(impl) ? "logreg" : "forest";
}

ordered_json Model::to_json() const {
    ordered_json j;
    j["kind"] = kind();
    j["seed"] = seed;
    if (const auto* lr = std::get_if<LogRegModel>(&impl)) {
        j["params"] = {{"learning_rate", lr->params.learning_rate},
                       {"l2", lr->params.l2},
                       {"max_iters", lr->params.max_iters},
                       {"tol", lr->params.tol}};
        j["converged"] = lr->converged;
        j["iterations"] = lr->iterations;
        j["intercept"] = lr->intercept;
        j["weights"] = lr->weights;
    } else {
        const auto& rf = std::get<ForestModel>(impl);
        j["params"] = {{"n_trees", rf.params.n_trees},
                       {"max_depth", rf.params.max_depth},
                       {"min_leaf", rf.params.min_leaf},
                       {"features_per_split", rf.params.features_per_split},
                       {"seed", rf.params.seed}};
        ordered_json trees = ordered_json::array();
        for (const Tree& t : rf.trees) {
            ordered_json nodes = ordered_json::array();
            for (const TreeNode& n : t.nodes) {
                nodes.push_back({n.feature, n.threshold, n.left, n.right,
                                 static_cast<int>(n.label)});
            }
            trees.push_back(std::move(nodes));
        }
        j["trees"] = std::move(trees);
    }
    return j;
}

Model Model::from_json(const ordered_json& j) {
    Model m;
    m.seed = j.value("seed", std::uint64_t{0});
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "logreg") {
        LogRegModel lr;
        const auto& p = j.at("params");
        lr.params.learning_rate = p.at("learning_rate").get<double>();
        lr.params.l2 = p.at("l2").get<double>();
        lr.params.max_iters = p.at("max_iters").get<int>();
        lr.params.tol = p.at("tol").get<double>();
        lr.converged = j.at("converged").get<bool>();
        lr.iterations = j.at("iterations").get<int>();
        lr.intercept = j.at("intercept").get<double>();
        lr.weights = j.at("weights").get<std::vector<double>>();
        m.impl = std::move(lr);
    } else if (kind == "forest") {
        ForestModel rf;
        const auto& p = j.at("params");
        rf.params.n_trees = p.at("n_trees").get<int>();
        rf.params.max_depth = p.at("max_depth").get<int>();
        rf.params.min_leaf = p.at("min_leaf").get<int>();
        rf.params.features_per_split = p.at("features_per_split").get<int>();
        rf.params.seed = p.at("seed").get<std::uint64_t>();
        for (const auto& tj : j.at("trees")) {
            Tree t;
            for (const auto& nj : tj) {
                TreeNode n;
                n.feature = nj.at(0).get<int>();
                n.threshold = nj.at(1).get<double>();
                n.left = nj.at(2).get<int>();
                n.right = nj.at(3).get<int>();
                n.label = static_cast<std::int8_t>(nj.at(4).get<int>());
                t.nodes.push_back(n);
            }
            rf.trees.push_back(std::move(t));
        }
        m.impl = std::move(rf);
    } else {
        throw DataError("unknown model kind '" + kind + "'");
    }
    return m;
}

ordered_json encoding_to_json(const Encoding& enc) {
    ordered_json features = ordered_json::array();
    for (const ColumnEncoding& fe : enc.features) {
        ordered_json f;
        f["name"] = fe.name;
        f["kind"] = fe.kind == ColumnKind::Numeric ? "numeric" : "categorical";
        f["offset"] = fe.offset;
        f["width"] = fe.width;
        if (fe.kind == ColumnKind::Numeric) {
            f["lo"] = fe.lo;
            f["hi"] = fe.hi;
        } else {
            f["categories"] = fe.categories;
        }
        features.push_back(std::move(f));
    }
    ordered_json j;
    j["dim"] = enc.dim;
    j["features"] = std::move(features);
    j["feature_names"] = enc.feature_names;
    j["label_column"] = enc.label_column;
    j["favorable_value"] = enc.favorable_value;
    j["unfavorable_value"] = enc.unfavorable_value;
    j["protected_column"] = enc.protected_column;
    j["privileged_value"] = enc.privileged_value;
    j["unprivileged_value"] = enc.unprivileged_value;
    return j;
}

Encoding encoding_from_json(const ordered_json& j) {
    Encoding enc;
    enc.dim = j.at("dim").get<std::size_t>();
    for (const auto& f : j.at("features")) {
        ColumnEncoding fe;
        fe.name = f.at("name").get<std::string>();
        fe.kind = f.at("kind").get<std::string>() == "numeric"
                      ? ColumnKind::Numeric
                      : ColumnKind::Categorical;
        fe.offset = f.at("offset").get<std::size_t>();
        fe.width = f.at("width").get<std::size_t>();
        if (fe.kind == ColumnKind::Numeric) {
            fe.lo = f.at("lo").get<double>();
            fe.hi = f.at("hi").get<double>();
        } else {
            fe.categories = f.at("categories").get<std::vector<std::string>>();
        }
        enc.features.push_back(std::move(fe));
    }
    enc.feature_names = j.at("feature_names").get<std::vector<std::string>>();
    enc.label_column = j.at("label_column").get<std::string>();
    enc.favorable_value = j.at("favorable_value").get<std::string>();
    enc.unfavorable_value = j.at("unfavorable_value").get<std::string>();
    enc.protected_column = j.at("protected_column").get<std::string>();
    enc.privileged_value = j.at("privileged_value").get<std::string>();
    enc.unprivileged_value = j.at("unprivileged_value").get<std::string>();
    return enc;
}

void save_model_file(const std::string& path, const Model& model,
                     const Encoding& enc) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ValidationError("cannot write file: " + path);
    ordered_json j;
    j["model"] = model.to_json();
    j["encoding"] = encoding_to_json(enc);
    out << j.dump(2) << '\n';
}

std::pair<Model, Encoding> load_model_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError("cannot open file: " + path);
    ordered_json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw DataError(path + ": not a valid model file: " + e.what());
    }
    try {
        return {Model::from_json(j.at("model")),
                encoding_from_json(j.at("encoding"))};
    } catch (const nlohmann::json::exception& e) {
        throw DataError(path + ": not a valid model file: " + e.what());
    }
}

std::vector<std::int8_t> predict(std::span<const double> scores,
                                 double threshold) {
    if (!(threshold >= 0.0 && threshold <= 1.0)) {
        throw ArgumentError("threshold must lie in [0,1]");
    }
    std::vector<std::int8_t> labels(scores.size());
    for (std::size_t i = 0; i < scores.size(); ++i) {
        labels[i] = scores[i] >= threshold ? 1 : 0;
    }
    return labels;
}

std::vector<std::int8_t> predict(const Model& model, const Matrix& X,
                                 double threshold) {
    return predict(model.score_all(X), threshold);
}

}  // namespace fairsample
