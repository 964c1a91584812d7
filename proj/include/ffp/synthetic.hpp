#ifndef FFP_SYNTHETIC_HPP
#define FFP_SYNTHETIC_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "dataset.hpp"
#include "error.hpp"

namespace ffp {

/// Class-conditional generator: instance = class mean + uniform noise in [-noise, +noise] per cell.
struct SyntheticSpec {
    std::vector<std::string> labels;
    std::size_t dim = 0;
    std::vector<std::size_t> counts;        // instances per class
    std::vector<std::vector<double>> means; // one mean vector per class
    double noise = 0.0;
    std::uint64_t seed = 0;
    std::string id_prefix = "x";

    std::size_t num_classes() const noexcept { return labels.size(); }

    void validate() const {
        if (labels.empty()) {
            throw Error(ErrorKind::config, "synthetic spec needs at least one class");
        }
        if (dim == 0) {
            throw Error(ErrorKind::config, "synthetic dim must be positive");
        }
        if (counts.size() != labels.size() || means.size() != labels.size()) {
            throw Error(ErrorKind::config, "synthetic spec needs one count and one mean per class");
        }
        for (std::size_t c = 0; c < labels.size(); ++c) {
            if (counts[c] < 1) {
                throw Error(ErrorKind::config, "class '" + labels[c] + "' needs at least one instance");
            }
            if (means[c].size() != dim) {
                throw Error(ErrorKind::dimension, "mean of class '" + labels[c] + "' has wrong dim");
            }
        }
        if (!(noise >= 0.0) || !std::isfinite(noise)) {
            throw Error(ErrorKind::config, "noise scale must be a finite value >= 0");
        }
    }
};

/// Splits `total` over classes proportionally to `weights` by largest remainder,
/// giving every class at least one instance.
inline std::vector<std::size_t> allocate_counts(std::size_t total, std::span<const double> weights) {
    if (weights.empty()) {
        throw Error(ErrorKind::config, "no class weights given");
    }
    if (total < weights.size()) {
        throw Error(ErrorKind::config, "total must give every class at least one instance");
    }
    double sum = 0.0;
    for (double w : weights) {
        if (!(w > 0.0) || !std::isfinite(w)) {
            throw Error(ErrorKind::config, "class weights must be positive");
        }
        sum += w;
    }
    std::vector<std::size_t> counts(weights.size());
    std::vector<double> remainder(weights.size());
    std::size_t assigned = 0;
    for (std::size_t c = 0; c < weights.size(); ++c) {
        const double exact = static_cast<double>(total) * weights[c] / sum;
        counts[c] = static_cast<std::size_t>(std::floor(exact));
        remainder[c] = exact - static_cast<double>(counts[c]);
        assigned += counts[c];
    }
    std::vector<std::size_t> order(weights.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t lhs, std::size_t rhs) { return remainder[lhs] > remainder[rhs]; });
    for (std::size_t i = 0; assigned < total; i = (i + 1) % order.size()) {
        ++counts[order[i]];
        ++assigned;
    }
    // Lift empty classes, taking from the largest.
    for (auto& count : counts) {
        if (count == 0) {
            auto largest = std::max_element(counts.begin(), counts.end());
            --*largest;
            count = 1;
        }
    }
    return counts;
}

/// Class c is `height` on its own block of dim / num_classes cells and 0 elsewhere.
inline std::vector<std::vector<double>> one_hot_block_means(std::size_t num_classes, std::size_t dim,
                                                            double height = 1.0) {
    if (num_classes == 0 || dim < num_classes) {
        throw Error(ErrorKind::config, "one-hot blocks need dim >= number of classes");
    }
    const std::size_t width = dim / num_classes;
    std::vector<std::vector<double>> means(num_classes, std::vector<double>(dim, 0.0));
    for (std::size_t c = 0; c < num_classes; ++c) {
        std::fill_n(means[c].begin() + static_cast<std::ptrdiff_t>(c * width), width, height);
    }
    return means;
}

/// Means drawn uniformly from [0, 1) per cell.
inline std::vector<std::vector<double>> random_means(std::size_t num_classes, std::size_t dim,
                                                     std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<std::vector<double>> means(num_classes, std::vector<double>(dim));
    for (auto& mean : means) {
        for (auto& v : mean) {
            v = unit(rng);
        }
    }
    return means;
}

/// One-hot blocks where class `majority` also gets a flat `level` on every cell:
/// its top features stay on its own block while its mean gains a large norm.
inline std::vector<std::vector<double>> diffuse_majority_means(std::size_t num_classes, std::size_t dim,
                                                               std::size_t majority, double level,
                                                               double height = 1.0) {
    auto means = one_hot_block_means(num_classes, dim, height);
    if (majority >= num_classes) {
        throw Error(ErrorKind::config, "majority class index out of range");
    }
    for (auto& v : means[majority]) {
        v += level;
    }
    return means;
}

inline std::vector<std::string> default_labels(std::size_t num_classes) {
    std::vector<std::string> labels;
    for (std::size_t c = 0; c < num_classes; ++c) {
        labels.push_back("c" + std::to_string(c));
    }
    return labels;
}

/// Instances of all classes, shuffled with the spec's seed. Ids are "<prefix><n>".
inline LabeledDataset generate_synthetic(const SyntheticSpec& spec) {
    spec.validate();
    std::mt19937_64 rng(spec.seed);
    std::uniform_real_distribution<double> noise(-spec.noise, spec.noise);

    std::vector<std::size_t> class_of;
    for (std::size_t c = 0; c < spec.num_classes(); ++c) {
        class_of.insert(class_of.end(), spec.counts[c], c);
    }
    std::shuffle(class_of.begin(), class_of.end(), rng);

    LabeledDataset ds(spec.dim, spec.labels);
    for (std::size_t n = 0; n < class_of.size(); ++n) {
        const auto& mean = spec.means[class_of[n]];
        std::vector<double> values(mean);
        if (spec.noise > 0.0) {
            for (auto& v : values) {
                v += noise(rng);
            }
        }
        ds.add(spec.id_prefix + std::to_string(n), spec.labels[class_of[n]], FeatureVector(std::move(values)));
    }
    return ds;
}

} // namespace ffp

#endif
