#ifndef FFP_FINGERPRINT_HPP
#define FFP_FINGERPRINT_HPP

/*
 Fuzzy fingerprints over dense feature vectors.

 A fingerprint keeps the k most activated features of a vector (or of the
 element-wise sum of a group of vectors) and gives each one a membership
 degree that decreases linearly with its rank:

     mu(rank) = 1 - a * (rank - 1) / k,   rank = 1 .. min(k, d)

 Every other feature has membership 0. Two fingerprints are compared by
 summing the element-wise minimum of their memberships and dividing by a
 normalization constant N.
*/

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "error.hpp"

namespace ffp {

/// Dense real-valued instance representation (activations, counts...).
class FeatureVector {
public:
    FeatureVector() = default;

    explicit FeatureVector(std::vector<double> values) : values_(std::move(values)) {
        for (std::size_t i = 0; i < values_.size(); ++i) {
            if (!std::isfinite(values_[i])) {
                throw Error(ErrorKind::invalid_input,
                            "non-finite value at feature " + std::to_string(i));
            }
        }
    }

    FeatureVector(std::initializer_list<double> values)
        : FeatureVector(std::vector<double>(values)) {}

    std::size_t dim() const noexcept { return values_.size(); }
    std::span<const double> values() const noexcept { return values_; }
    double operator[](std::size_t i) const { return values_[i]; }

    bool is_zero() const noexcept {
        return std::all_of(values_.begin(), values_.end(), [](double v) { return v == 0.0; });
    }

    friend bool operator==(const FeatureVector&, const FeatureVector&) = default;

private:
    std::vector<double> values_;
};

/// One fingerprint cell.
struct Entry {
    std::size_t feature = 0;
    double membership = 0.0;

    friend bool operator==(const Entry&, const Entry&) = default;
};

/// Rank-derived membership degree. `rank` is 1-based and must lie in [1, k].
inline double fuzzify(std::size_t rank, std::size_t k, double slope) {
    if (k == 0 || rank < 1 || rank > k) {
        throw Error(ErrorKind::domain, "rank " + std::to_string(rank) + " outside [1, " +
                                           std::to_string(k) + "]");
    }
    if (!(slope >= 0.0 && slope <= 1.0)) {
        throw Error(ErrorKind::domain, "slope a must lie in [0, 1]");
    }
    return 1.0 - slope * static_cast<double>(rank - 1) / static_cast<double>(k);
}

namespace detail {

inline void require_finite(std::span<const double> values) {
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (!std::isfinite(values[i])) {
            throw Error(ErrorKind::invalid_input,
                        "non-finite value at feature " + std::to_string(i));
        }
    }
}

// Larger value first; equal values keep ascending feature index.
struct RankOrder {
    std::span<const double> values;
    bool operator()(std::size_t lhs, std::size_t rhs) const {
        if (values[lhs] != values[rhs]) {
            return values[lhs] > values[rhs];
        }
        return lhs < rhs;
    }
};

} // namespace detail

/// Feature indices of the `count` best-ranked features, best first.
inline std::vector<std::size_t> top_features(std::span<const double> values, std::size_t count) {
    detail::require_finite(values);
    count = std::min(count, values.size());
    std::vector<std::size_t> order(values.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(count), order.end(),
                      detail::RankOrder{values});
    order.resize(count);
    return order;
}

/// Rank of every feature (1 = largest value). Ties go to the lower index.
inline std::vector<std::size_t> rank_features(std::span<const double> values) {
    auto order = top_features(values, values.size());
    std::vector<std::size_t> ranks(values.size());
    for (std::size_t r = 0; r < order.size(); ++r) {
        ranks[order[r]] = r + 1;
    }
    return ranks;
}

inline std::vector<std::size_t> rank_features(const FeatureVector& v) { return rank_features(v.values()); }

/// Element-wise sum, accumulated in sequence order.
inline FeatureVector aggregate_class(std::span<const FeatureVector> vectors) {
    if (vectors.empty()) {
        throw Error(ErrorKind::empty_class, "cannot aggregate an empty class");
    }
    const std::size_t dim = vectors.front().dim();
    std::vector<double> sum(dim, 0.0);
    for (const auto& v : vectors) {
        if (v.dim() != dim) {
            throw Error(ErrorKind::dimension, "vector of dim " + std::to_string(v.dim()) +
                                                  " in a class of dim " + std::to_string(dim));
        }
        for (std::size_t i = 0; i < dim; ++i) {
            sum[i] += v[i];
        }
    }
    return FeatureVector(std::move(sum));
}

/// Sparse fuzzy set over the feature indices [0, dim).
class ClassFingerprint {
public:
    ClassFingerprint() = default;

    /// Fingerprint whose features are given best rank first. Exactly min(k, dim)
    /// distinct features are required.
    static ClassFingerprint from_ranked(std::string label, std::size_t dim,
                                        std::span<const std::size_t> features_by_rank,
                                        std::size_t k, double slope) {
        check_params(dim, k, slope);
        std::vector<Entry> ranked;
        ranked.reserve(features_by_rank.size());
        for (std::size_t r = 0; r < features_by_rank.size(); ++r) {
            ranked.push_back({features_by_rank[r], fuzzify(r + 1, k, slope)});
        }
        return ClassFingerprint(std::move(label), dim, k, slope, std::move(ranked));
    }

    /// Fingerprint from stored (feature, membership) pairs, e.g. read back from a file.
    /// Rank order is recovered as descending membership, then ascending index.
    static ClassFingerprint from_entries(std::string label, std::size_t dim, std::size_t k,
                                         double slope, std::vector<Entry> entries) {
        check_params(dim, k, slope);
        std::stable_sort(entries.begin(), entries.end(), [](const Entry& lhs, const Entry& rhs) {
            if (lhs.membership != rhs.membership) {
                return lhs.membership > rhs.membership;
            }
            return lhs.feature < rhs.feature;
        });
        return ClassFingerprint(std::move(label), dim, k, slope, std::move(entries));
    }

    const std::string& label() const noexcept { return label_; }
    std::size_t dim() const noexcept { return dim_; }
    std::size_t k() const noexcept { return k_; }
    double slope() const noexcept { return slope_; }
    std::size_t size() const noexcept { return ranked_.size(); }

    /// Entries best rank first.
    std::span<const Entry> ranked() const noexcept { return ranked_; }
    /// Entries by ascending feature index.
    std::span<const Entry> entries() const noexcept { return by_feature_; }

    /// Membership of `feature`, 0 when it is not part of the fingerprint.
    double membership(std::size_t feature) const {
        auto it = std::lower_bound(by_feature_.begin(), by_feature_.end(), feature,
                                   [](const Entry& e, std::size_t f) { return e.feature < f; });
        return (it != by_feature_.end() && it->feature == feature) ? it->membership : 0.0;
    }

    bool contains(std::size_t feature) const { return membership(feature) > 0.0; }

    ClassFingerprint relabeled(std::string label) const {
        ClassFingerprint copy = *this;
        copy.label_ = std::move(label);
        return copy;
    }

    friend bool operator==(const ClassFingerprint& lhs, const ClassFingerprint& rhs) {
        return lhs.label_ == rhs.label_ && lhs.dim_ == rhs.dim_ && lhs.k_ == rhs.k_ &&
               lhs.slope_ == rhs.slope_ && lhs.by_feature_ == rhs.by_feature_;
    }

private:
    ClassFingerprint(std::string label, std::size_t dim, std::size_t k, double slope,
                     std::vector<Entry> ranked)
        : label_(std::move(label)), dim_(dim), k_(k), slope_(slope), ranked_(std::move(ranked)) {
        const std::size_t expected = std::min(k_, dim_);
        if (ranked_.size() != expected) {
            throw Error(ErrorKind::config, "fingerprint '" + label_ + "' has " +
                                               std::to_string(ranked_.size()) + " entries, expected " +
                                               std::to_string(expected));
        }
        // memberships are derived data: they must follow 1 - a (rank - 1) / k
        for (std::size_t r = 0; r < ranked_.size(); ++r) {
            if (std::abs(ranked_[r].membership - fuzzify(r + 1, k_, slope_)) > 1e-9) {
                throw Error(ErrorKind::config, "membership of feature " + std::to_string(ranked_[r].feature) +
                                                   " does not match its rank " + std::to_string(r + 1));
            }
        }
        by_feature_ = ranked_;
        std::sort(by_feature_.begin(), by_feature_.end(),
                  [](const Entry& lhs, const Entry& rhs) { return lhs.feature < rhs.feature; });
        for (std::size_t i = 0; i < by_feature_.size(); ++i) {
            const Entry& e = by_feature_[i];
            if (e.feature >= dim_) {
                throw Error(ErrorKind::dimension, "feature index " + std::to_string(e.feature) +
                                                      " outside [0, " + std::to_string(dim_) + ")");
            }
            if (i > 0 && by_feature_[i - 1].feature == e.feature) {
                throw Error(ErrorKind::config, "duplicate feature " + std::to_string(e.feature) +
                                                   " in fingerprint '" + label_ + "'");
            }
            if (!(e.membership > 0.0 && e.membership <= 1.0)) {
                throw Error(ErrorKind::config, "membership of feature " + std::to_string(e.feature) +
                                                   " outside (0, 1]");
            }
        }
    }

    static void check_params(std::size_t dim, std::size_t k, double slope) {
        if (dim == 0) {
            throw Error(ErrorKind::config, "fingerprint dim must be positive");
        }
        if (k == 0) {
            throw Error(ErrorKind::config, "fingerprint size k must be at least 1");
        }
        if (!(slope >= 0.0 && slope <= 1.0)) {
            throw Error(ErrorKind::config, "slope a must lie in [0, 1]");
        }
    }

    std::string label_;
    std::size_t dim_ = 0;
    std::size_t k_ = 0;
    double slope_ = 0.0;
    std::vector<Entry> ranked_;
    std::vector<Entry> by_feature_;
};

/// Aggregate, rank, keep the top min(k, d) features and fuzzify them.
inline ClassFingerprint build_class_fingerprint(std::span<const FeatureVector> vectors,
                                                std::string label, std::size_t k, double slope) {
    FeatureVector total = aggregate_class(vectors);
    if (k == 0) {
        throw Error(ErrorKind::config, "fingerprint size k must be at least 1");
    }
    auto top = top_features(total.values(), k);
    return ClassFingerprint::from_ranked(std::move(label), total.dim(), top, k, slope);
}

inline ClassFingerprint fingerprint_instance(const FeatureVector& v, std::size_t k, double slope,
                                             std::string id = {}) {
    return build_class_fingerprint(std::span<const FeatureVector>(&v, 1), std::move(id), k, slope);
}

/// Sum of element-wise minimum memberships divided by `norm`.
/// Unnormalized overlap: sum over shared features of the smaller membership.
inline double overlap(const ClassFingerprint& lhs, const ClassFingerprint& rhs) {
    if (lhs.dim() != rhs.dim()) {
        throw Error(ErrorKind::dimension, "cannot compare fingerprints of dim " +
                                              std::to_string(lhs.dim()) + " and " +
                                              std::to_string(rhs.dim()));
    }
    auto a = lhs.entries();
    auto b = rhs.entries();
    double sum = 0.0;
    std::size_t i = 0;
    std::size_t j = 0;
    while (i < a.size() && j < b.size()) {
        if (a[i].feature < b[j].feature) {
            ++i;
        } else if (b[j].feature < a[i].feature) {
            ++j;
        } else {
            sum += std::min(a[i].membership, b[j].membership);
            ++i;
            ++j;
        }
    }
    return sum;
}

inline void check_norm(double norm) {
    if (!(norm > 0.0) || !std::isfinite(norm)) {
        throw Error(ErrorKind::config, "normalization constant N must be positive");
    }
}

inline double similarity(const ClassFingerprint& lhs, const ClassFingerprint& rhs, double norm) {
    check_norm(norm);
    return overlap(lhs, rhs) / norm;
}

/// Sum of memberships of a full-size fingerprint: k - a (k - 1) / 2.
inline double membership_mass(std::size_t k, double slope) {
    return static_cast<double>(k) - slope * static_cast<double>(k - 1) / 2.0;
}

} // namespace ffp

#endif
