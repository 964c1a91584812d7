#ifndef FFP_BASELINE_HPP
#define FFP_BASELINE_HPP

#include <string>
#include <vector>

#include "dataset.hpp"
#include "error.hpp"
#include "metrics.hpp"

namespace ffp {

/// Reference classifier: the class whose mean training vector has the largest dot
/// product with the instance. Ties go to the earlier class.
class NearestCentroid {
public:
    static NearestCentroid fit(const LabeledDataset& train) {
        NearestCentroid model;
        model.classes_ = train.classes();
        model.centroids_.assign(model.classes_.size(), std::vector<double>(train.dim(), 0.0));
        auto counts = train.class_counts();
        for (const auto& inst : train.instances()) {
            auto& centroid = model.centroids_[train.class_index(inst.label)];
            for (std::size_t i = 0; i < train.dim(); ++i) {
                centroid[i] += inst.vector[i];
            }
        }
        for (std::size_t c = 0; c < model.classes_.size(); ++c) {
            if (counts[c] == 0) {
                throw Error(ErrorKind::empty_class, "class '" + model.classes_[c] + "' has no training instances");
            }
            for (auto& v : model.centroids_[c]) {
                v /= static_cast<double>(counts[c]);
            }
        }
        return model;
    }

    std::vector<double> scores(const FeatureVector& v) const {
        std::vector<double> out;
        out.reserve(centroids_.size());
        for (const auto& centroid : centroids_) {
            if (centroid.size() != v.dim()) {
                throw Error(ErrorKind::dimension, "instance dim does not match the centroids");
            }
            double dot = 0.0;
            for (std::size_t i = 0; i < centroid.size(); ++i) {
                dot += centroid[i] * v[i];
            }
            out.push_back(dot);
        }
        return out;
    }

    const std::string& predict(const FeatureVector& v) const {
        auto s = scores(v);
        std::size_t best = 0;
        for (std::size_t c = 1; c < s.size(); ++c) {
            if (s[c] > s[best]) {
                best = c;
            }
        }
        return classes_[best];
    }

    std::vector<Prediction> predict_all(const LabeledDataset& ds) const {
        std::vector<Prediction> out;
        out.reserve(ds.size());
        for (const auto& inst : ds.instances()) {
            out.push_back({inst.id, predict(inst.vector)});
        }
        return out;
    }

    const std::vector<std::string>& classes() const noexcept { return classes_; }
    const std::vector<std::vector<double>>& centroids() const noexcept { return centroids_; }

private:
    std::vector<std::string> classes_;
    std::vector<std::vector<double>> centroids_;
};

} // namespace ffp

#endif
