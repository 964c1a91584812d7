#ifndef FFP_LIBRARY_HPP
#define FFP_LIBRARY_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include "dataset.hpp"
#include "error.hpp"
#include "fingerprint.hpp"
#include "format.hpp"

namespace ffp {

inline constexpr double default_slope = 0.8;

/// How the normalization constant N is chosen: the fingerprint size k, or a fixed value.
class NormRule {
public:
    static NormRule fingerprint_size() { return NormRule(std::nullopt); }

    static NormRule fixed(double value) {
        if (!(value > 0.0) || !std::isfinite(value)) {
            throw Error(ErrorKind::config, "normalization constant N must be positive");
        }
        return NormRule(value);
    }

    /// "k" or a positive number.
    static NormRule parse(std::string_view text) {
        text = trim(text);
        if (text == "k") {
            return fingerprint_size();
        }
        auto value = parse_double(text);
        if (!value) {
            throw Error(ErrorKind::config, "norm must be 'k' or a positive number, got '" +
                                               std::string(text) + "'");
        }
        return fixed(*value);
    }

    double resolve(std::size_t k) const { return fixed_ ? *fixed_ : static_cast<double>(k); }

    std::string to_string() const { return fixed_ ? format_shortest(*fixed_) : "k"; }

private:
    explicit NormRule(std::optional<double> fixed) : fixed_(fixed) {}
    std::optional<double> fixed_;
};

/// One fingerprint per class, sharing (dim, k, a), plus the normalization constant N.
class FingerprintLibrary {
public:
    FingerprintLibrary(std::vector<ClassFingerprint> fingerprints, double norm)
        : fingerprints_(std::move(fingerprints)), norm_(norm) {
        if (fingerprints_.empty()) {
            throw Error(ErrorKind::config, "a fingerprint library needs at least one class");
        }
        if (!(norm_ > 0.0) || !std::isfinite(norm_)) {
            throw Error(ErrorKind::config, "normalization constant N must be positive");
        }
        const auto& first = fingerprints_.front();
        std::unordered_set<std::string> seen;
        for (const auto& fp : fingerprints_) {
            if (fp.dim() != first.dim()) {
                throw Error(ErrorKind::dimension, "fingerprint '" + fp.label() + "' has dim " +
                                                      std::to_string(fp.dim()) + ", library dim is " +
                                                      std::to_string(first.dim()));
            }
            if (fp.k() != first.k() || fp.slope() != first.slope()) {
                throw Error(ErrorKind::config, "fingerprint '" + fp.label() + "' was built with different (k, a)");
            }
            if (!seen.insert(fp.label()).second) {
                throw Error(ErrorKind::config, "duplicate class label '" + fp.label() + "'");
            }
        }
    }

    std::span<const ClassFingerprint> fingerprints() const noexcept { return fingerprints_; }
    std::size_t size() const noexcept { return fingerprints_.size(); }
    std::size_t dim() const noexcept { return fingerprints_.front().dim(); }
    std::size_t k() const noexcept { return fingerprints_.front().k(); }
    double slope() const noexcept { return fingerprints_.front().slope(); }
    double norm() const noexcept { return norm_; }

    std::vector<std::string> class_order() const {
        std::vector<std::string> order;
        for (const auto& fp : fingerprints_) {
            order.push_back(fp.label());
        }
        return order;
    }

    const ClassFingerprint* find(const std::string& label) const {
        for (const auto& fp : fingerprints_) {
            if (fp.label() == label) {
                return &fp;
            }
        }
        return nullptr;
    }

    const ClassFingerprint& at(const std::string& label) const {
        if (const auto* fp = find(label)) {
            return *fp;
        }
        throw Error(ErrorKind::config, "no fingerprint for class '" + label + "'");
    }

    FingerprintLibrary with_norm(double norm) const { return FingerprintLibrary(fingerprints_, norm); }

    friend bool operator==(const FingerprintLibrary&, const FingerprintLibrary&) = default;

private:
    std::vector<ClassFingerprint> fingerprints_;
    double norm_ = 1.0;
};

/// Library with one fingerprint per class of `train`, in the dataset's class order
/// unless `class_order` (a permutation of the dataset classes) is given.
inline FingerprintLibrary build_library(const LabeledDataset& train, std::size_t k, double slope,
                                        NormRule norm = NormRule::fingerprint_size(),
                                        const std::vector<std::string>& class_order = {}) {
    std::vector<std::string> order = class_order.empty() ? train.classes() : class_order;
    if (!class_order.empty()) {
        std::unordered_set<std::string> given(order.begin(), order.end());
        if (given.size() != order.size() || order.size() != train.classes().size()) {
            throw Error(ErrorKind::config, "class order must list every dataset class exactly once");
        }
        for (const auto& label : order) {
            if (!train.has_class(label)) {
                throw Error(ErrorKind::config, "class order names unknown class '" + label + "'");
            }
        }
    }
    std::vector<ClassFingerprint> fingerprints;
    fingerprints.reserve(order.size());
    for (const auto& label : order) {
        auto vectors = train.vectors_of(label);
        if (vectors.empty()) {
            throw Error(ErrorKind::empty_class, "class '" + label + "' has no training instances");
        }
        fingerprints.push_back(build_class_fingerprint(vectors, label, k, slope));
    }
    return FingerprintLibrary(std::move(fingerprints), norm.resolve(k));
}

struct ClassScore {
    std::string label;
    double score = 0.0;

    friend bool operator==(const ClassScore&, const ClassScore&) = default;
};

struct ClassificationResult {
    std::vector<ClassScore> scores; // library class order
    std::string predicted;
    bool tied = false;
    std::vector<std::string> warnings;

    double score(const std::string& label) const {
        for (const auto& s : scores) {
            if (s.label == label) {
                return s.score;
            }
        }
        throw Error(ErrorKind::config, "no score for class '" + label + "'");
    }
};

/// Absolute slack on unnormalized overlaps below which two classes are tied.
inline constexpr double tie_tolerance = 1e-9;

/// Scores an already fingerprinted instance against every class.
inline ClassificationResult classify_fingerprint(const ClassFingerprint& instance,
                                                 const FingerprintLibrary& lib) {
    ClassificationResult result;
    result.scores.reserve(lib.size());
    // Decide on the raw overlaps so the argmax cannot depend on N. Memberships are
    // rounded, so overlaps that are equal in exact arithmetic (1 + 0.6 vs 0.8 + 0.8)
    // can differ in the last bits; anything within tie_tolerance counts as a tie.
    std::vector<double> raw;
    raw.reserve(lib.size());
    for (const auto& fp : lib.fingerprints()) {
        raw.push_back(overlap(instance, fp));
        result.scores.push_back({fp.label(), raw.back() / lib.norm()});
    }
    const double top = *std::max_element(raw.begin(), raw.end());
    std::size_t best = raw.size();
    std::size_t ties = 0;
    for (std::size_t c = 0; c < raw.size(); ++c) {
        if (raw[c] >= top - tie_tolerance) {
            best = std::min(best, c);
            ++ties;
        }
    }
    result.predicted = result.scores[best].label;
    result.tied = ties > 1;
    return result;
}

inline ClassificationResult classify(const FeatureVector& v, const FingerprintLibrary& lib) {
    if (v.dim() != lib.dim()) {
        throw Error(ErrorKind::dimension, "instance dim " + std::to_string(v.dim()) +
                                              " does not match library dim " + std::to_string(lib.dim()));
    }
    auto result = classify_fingerprint(fingerprint_instance(v, lib.k(), lib.slope()), lib);
    if (v.is_zero()) {
        result.warnings.emplace_back("all-zero instance vector; features ranked by index only");
    }
    return result;
}

} // namespace ffp

#endif
