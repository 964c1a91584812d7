#include <gtest/gtest.h>

#include <fstream>
#include <random>
#include <set>
#include <sstream>

#include <ffp/explain.hpp>

#include "oracles.hpp"

using namespace ffp;

namespace {

std::size_t count_lines(const std::string& path) {
    std::ifstream in(path);
    std::size_t n = 0;
    for (std::string line; std::getline(in, line);) {
        ++n;
    }
    return n;
}

FingerprintLibrary random_library(std::mt19937_64& rng, std::size_t classes, std::size_t dim, std::size_t k) {
    std::vector<ClassFingerprint> fps;
    for (std::size_t c = 0; c < classes; ++c) {
        fps.push_back(fingerprint_instance(FeatureVector(oracle::random_dense(rng, dim)), k, 0.8,
                                           "c" + std::to_string(c)));
    }
    return FingerprintLibrary(fps, static_cast<double>(k));
}

} // namespace

TEST(RenderFingerprint, SingleEntry) {
    auto fp = ClassFingerprint::from_ranked("x", 5, std::vector<std::size_t>{3}, 1, 0.8);
    EXPECT_EQ(render_fingerprint(fp), "{(3,1)}");
}

TEST(RenderFingerprint, DenseHasOneLinePerFeature) {
    std::mt19937_64 rng(1);
    for (std::size_t dim : {1u, 7u, 768u}) {
        auto fp = fingerprint_instance(FeatureVector(oracle::random_dense(rng, dim)), 5, 0.8);
        auto text = render_fingerprint(fp, FingerprintStyle::dense);
        EXPECT_EQ(static_cast<std::size_t>(std::count(text.begin(), text.end(), '\n')), dim);
    }
}

TEST(RenderFingerprint, ParseRecoversMembershipsToPrintedPrecision) {
    std::mt19937_64 rng(2);
    for (int trial = 0; trial < 30; ++trial) {
        auto fp = fingerprint_instance(FeatureVector(oracle::random_dense(rng, 40)), 1 + trial, 0.8);
        auto parsed = parse_ranked(render_fingerprint(fp));
        ASSERT_EQ(parsed.size(), fp.size());
        for (std::size_t r = 0; r < parsed.size(); ++r) {
            EXPECT_EQ(parsed[r].feature, fp.ranked()[r].feature);
            EXPECT_NEAR(parsed[r].membership, fp.ranked()[r].membership, 0.005 + 1e-12);
        }
    }
    EXPECT_THROW(parse_ranked("(1,2)"), Error);
    EXPECT_THROW(parse_ranked("{(1;2)}"), Error);
}

TEST(Intersect, DisjointAndSelf) {
    auto a = ClassFingerprint::from_ranked("a", 10, std::vector<std::size_t>{0, 1, 2}, 3, 0.8);
    auto b = ClassFingerprint::from_ranked("b", 10, std::vector<std::size_t>{5, 6, 7}, 3, 0.8);
    auto none = intersect(a, b, 3.0);
    EXPECT_TRUE(none.shared.empty());
    EXPECT_EQ(none.score_contribution, 0.0);
    auto self = intersect(a, a, 3.0);
    EXPECT_EQ(self.shared.size(), 3u);
    EXPECT_NEAR(self.score_contribution, membership_mass(3, 0.8) / 3.0, 1e-15);
}

TEST(Intersect, ContributionEqualsSimilarityAndSharedSum) {
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t k = 1 + trial % 20;
        auto x = fingerprint_instance(FeatureVector(oracle::random_dense(rng, 30)), k, 0.8, "x");
        auto y = fingerprint_instance(FeatureVector(oracle::random_dense(rng, 30)), k, 0.8, "y");
        auto report = intersect(x, y, static_cast<double>(k));
        EXPECT_EQ(report.score_contribution, similarity(x, y, static_cast<double>(k)));
        double sum = 0.0;
        for (const auto& cell : report.shared) {
            EXPECT_TRUE(x.contains(cell.feature) && y.contains(cell.feature));
            EXPECT_EQ(cell.min, std::min(cell.instance_membership, cell.class_membership));
            sum += cell.min;
        }
        EXPECT_NEAR(sum / static_cast<double>(k), report.score_contribution, 1e-12);
    }
}

TEST(Intersect, DimMismatch) {
    auto a = ClassFingerprint::from_ranked("a", 10, std::vector<std::size_t>{0}, 1, 0.8);
    auto b = ClassFingerprint::from_ranked("b", 11, std::vector<std::size_t>{0}, 1, 0.8);
    EXPECT_THROW(intersect(a, b, 1.0), Error);
}

TEST(SharedFeatures, DisjointLibraryIsEmpty) {
    std::vector<ClassFingerprint> fps = {
        ClassFingerprint::from_ranked("a", 10, std::vector<std::size_t>{0, 1}, 2, 0.8),
        ClassFingerprint::from_ranked("b", 10, std::vector<std::size_t>{2, 3}, 2, 0.8),
    };
    FingerprintLibrary lib(fps, 2.0);
    EXPECT_TRUE(shared_features(lib, 2).features.empty());
    EXPECT_THROW(shared_features(lib, 1), Error);
}

TEST(SharedFeatures, MatchesBruteForceScan) {
    std::mt19937_64 rng(4);
    auto lib = random_library(rng, 10, 30, 8);
    for (std::size_t min_classes : {2u, 3u, 4u}) {
        auto report = shared_features(lib, min_classes);
        std::set<std::size_t> reported;
        for (const auto& f : report.features) {
            reported.insert(f.feature);
            for (const auto& label : f.classes) {
                EXPECT_TRUE(lib.at(label).contains(f.feature));
            }
        }
        for (std::size_t feature = 0; feature < 30; ++feature) {
            std::size_t owners = 0;
            for (const auto& fp : lib.fingerprints()) {
                owners += fp.contains(feature) ? 1 : 0;
            }
            EXPECT_EQ(owners >= min_classes, reported.count(feature) == 1) << feature;
        }
        for (std::size_t i = 1; i < report.features.size(); ++i) {
            EXPECT_GE(report.features[i - 1].classes.size(), report.features[i].classes.size());
        }
    }
}

TEST(SharedFeatures, SharedPlusSingletonsPartitionTheSupport) {
    std::mt19937_64 rng(5);
    auto lib = random_library(rng, 6, 25, 6);
    std::set<std::size_t> support;
    std::map<std::size_t, int> owners;
    for (const auto& fp : lib.fingerprints()) {
        for (const auto& e : fp.entries()) {
            support.insert(e.feature);
            ++owners[e.feature];
        }
    }
    std::set<std::size_t> shared;
    for (const auto& f : shared_features(lib, 2).features) {
        shared.insert(f.feature);
    }
    std::set<std::size_t> singletons;
    for (const auto& [feature, n] : owners) {
        if (n == 1) {
            singletons.insert(feature);
        }
    }
    std::set<std::size_t> both;
    std::set_intersection(shared.begin(), shared.end(), singletons.begin(), singletons.end(),
                          std::inserter(both, both.begin()));
    EXPECT_TRUE(both.empty());
    std::set<std::size_t> all = shared;
    all.insert(singletons.begin(), singletons.end());
    EXPECT_EQ(all, support);
}

TEST(PlotData, FingerprintIntersectionAndSweep) {
    std::mt19937_64 rng(6);
    const std::string dir = ::testing::TempDir();
    auto fp = fingerprint_instance(FeatureVector(oracle::random_dense(rng, 768)), 300, 0.8, "x");
    emit_plot_data(fp, dir + "ffp_plot_fp.txt");
    EXPECT_EQ(count_lines(dir + "ffp_plot_fp.txt"), 768u);

    auto other = fingerprint_instance(FeatureVector(oracle::random_dense(rng, 768)), 300, 0.8, "y");
    auto report = intersect(fp, other, 300.0);
    emit_plot_data(report, dir + "ffp_plot_int.txt");
    EXPECT_EQ(count_lines(dir + "ffp_plot_int.txt"), report.shared.size());
    EXPECT_GT(report.shared.size(), 0u);

    std::ifstream in(dir + "ffp_plot_fp.txt");
    std::size_t idx = 0;
    double mu = 0.0;
    std::size_t nonzero = 0;
    while (in >> idx >> mu) {
        EXPECT_EQ(mu, fp.membership(idx));
        nonzero += mu > 0 ? 1 : 0;
    }
    EXPECT_EQ(nonzero, 300u);

    EXPECT_THROW(emit_plot_data(fp, dir + "no/such/dir/plot.txt"), Error);
}

TEST(RenderScores, MarksPrediction) {
    ClassificationResult r;
    r.scores = {{"Neu", 0.31}, {"Ang", 0.38}, {"Dis", 0.0}};
    r.predicted = "Ang";
    EXPECT_EQ(render_scores(r), "Neu=0.31 Ang=0.38* Dis=0");
}
