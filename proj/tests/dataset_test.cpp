#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include <ffp/dataset.hpp>
#include <ffp/synthetic.hpp>

using namespace ffp;

namespace {

LabeledDataset parse(const std::string& text) {
    std::istringstream in(text);
    return parse_dataset(in, "test");
}

std::string write(const LabeledDataset& ds) {
    std::ostringstream out;
    write_dataset(ds, out);
    return out.str();
}

void expect_parse_error_at(const std::string& text, std::size_t line) {
    try {
        parse(text);
        ADD_FAILURE() << "accepted:\n" << text;
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::parse);
        EXPECT_NE(std::string(e.what()).find("test:" + std::to_string(line) + ":"), std::string::npos) << e.what();
    }
}

} // namespace

TEST(Dataset, SmallestFile) {
    auto ds = parse("#dim=3\n#classes=a,b\nx1,a,1,2,3\nx2,b,0.5,-1,4e-3\n");
    EXPECT_EQ(ds.dim(), 3u);
    EXPECT_EQ(ds.size(), 2u);
    EXPECT_EQ(ds.classes(), (std::vector<std::string>{"a", "b"}));
    EXPECT_EQ(ds.instances()[1].vector, FeatureVector({0.5, -1, 0.004}));
}

TEST(Dataset, CommentsBlankLinesAndCrlf) {
    auto ds = parse("# produced by hand\r\n#dim=2\r\n#classes=a\r\n\r\n# a comment\r\nx,a,1,2\r\n");
    EXPECT_EQ(ds.size(), 1u);
    EXPECT_EQ(ds.instances()[0].vector, FeatureVector({1, 2}));
}

TEST(Dataset, CanonicalRoundTrip) {
    const std::string canonical = "#dim=3\n#classes=neu,ang\na,neu,1,0.1,-2.5\nb,ang,0,1e-300,123456.789\n";
    EXPECT_EQ(write(parse(canonical)), canonical);
}

TEST(Dataset, RandomRoundTripIsExact) {
    std::mt19937_64 rng(4);
    std::normal_distribution<double> normal(0.0, 1e3);
    LabeledDataset ds(7, {"p", "q", "r"});
    for (int i = 0; i < 200; ++i) {
        std::vector<double> v(7);
        for (auto& x : v) {
            x = normal(rng) * std::pow(10.0, static_cast<int>(rng() % 40) - 20);
        }
        ds.add("id" + std::to_string(i), ds.classes()[i % 3], FeatureVector(v));
    }
    auto again = parse(write(ds));
    EXPECT_EQ(again, ds);
}

TEST(Dataset, EmptyDatasetIsValid) {
    auto ds = parse("#dim=4\n#classes=a,b\n");
    EXPECT_TRUE(ds.empty());
    EXPECT_EQ(ds.dim(), 4u);
}

TEST(Dataset, ParseErrorsNameTheLine) {
    expect_parse_error_at("#dim=2\n#classes=a\nx,a,1\n", 3);                  // ragged
    expect_parse_error_at("#dim=2\n#classes=a\nx,a,1,2\ny,b,1,2\n", 4);      // unknown label
    expect_parse_error_at("#dim=2\n#classes=a\nx,a,1,zz\n", 3);               // non-numeric
    expect_parse_error_at("#dim=2\n#classes=a\nx,a,1,nan\n", 3);              // non-finite
    expect_parse_error_at("#dim=2\n#classes=a\nx,a,1,2\nx,a,3,4\n", 4);      // duplicate id
    expect_parse_error_at("#classes=a\nx,a,1,2\n", 2);                        // missing dim
    expect_parse_error_at("#dim=0\n#classes=a\n", 1);
    expect_parse_error_at("#dim=2\n#classes=a\nx,a,1,2\n#dim=3\n", 4);
}

TEST(Dataset, FileIo) {
    const std::string path = ::testing::TempDir() + "ffp_dataset_io.csv";
    LabeledDataset ds(2, {"a"});
    ds.add("x", "a", FeatureVector({1.25, -3}));
    write_dataset(ds, path);
    EXPECT_EQ(read_dataset(path), ds);
    try {
        read_dataset(path + ".missing");
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::io);
    }
}

TEST(Dataset, FieldCountsMatchLineCounter) {
    SyntheticSpec spec;
    spec.labels = default_labels(4);
    spec.dim = 9;
    spec.counts = {400, 300, 200, 100};
    spec.means = random_means(4, 9, 1);
    spec.noise = 0.3;
    spec.seed = 99;
    const std::string text = write(generate_synthetic(spec));

    // Independent counter: raw lines and commas, no parsing of values.
    std::size_t data_lines = 0;
    bool all_rows_ok = true;
    std::istringstream in(text);
    for (std::string line; std::getline(in, line);) {
        if (line.empty() || line[0] == '#') {
            continue;
        }
        ++data_lines;
        all_rows_ok &= std::count(line.begin(), line.end(), ',') == 9 + 1;
    }
    EXPECT_EQ(data_lines, 1000u);
    EXPECT_TRUE(all_rows_ok);
    auto ds = parse(text);
    EXPECT_EQ(ds.size(), data_lines);
    EXPECT_EQ(ds.dim(), 9u);
}

TEST(Dataset, AddValidates) {
    LabeledDataset ds(2, {"a"});
    EXPECT_THROW(ds.add("x", "b", FeatureVector({1, 2})), Error);
    EXPECT_THROW(ds.add("x", "a", FeatureVector({1, 2, 3})), Error);
    EXPECT_THROW(ds.add("x,y", "a", FeatureVector({1, 2})), Error);
    ds.add("x", "a", FeatureVector({1, 2}));
    EXPECT_THROW(ds.add("x", "a", FeatureVector({1, 2})), Error);
    EXPECT_THROW(LabeledDataset(2, {"a", "a"}), Error);
}
