#ifndef FFP_LIBRARY_IO_HPP
#define FFP_LIBRARY_IO_HPP

// Fingerprint library files are JSON documents:
//
//   {
//     "format": "ffp-library",
//     "version": 1,
//     "dim": 768, "k": 7, "a": 0.8, "norm": 7, "norm_rule": "k",
//     "class_order": ["Neutral", "Anger", ...],
//     "fingerprints": [
//       {"label":"Neutral","entries":[[217,1.0],[644,0.8857142857142857],...]},
//       ...
//     ]
//   }
//
// Entries are ordered by descending membership then ascending feature index,
// one fingerprint per line, so rebuilding from the same data gives the same bytes.

#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <unordered_set>
#include <vector>

#include <nlohmann/json.hpp>

#include "error.hpp"
#include "library.hpp"

namespace ffp {

inline constexpr int library_format_version = 1;

inline void write_library(const FingerprintLibrary& lib, std::ostream& out) {
    using nlohmann::json;
    const bool norm_is_k = lib.norm() == static_cast<double>(lib.k());
    out << "{\n";
    out << "  \"format\": \"ffp-library\",\n";
    out << "  \"version\": " << library_format_version << ",\n";
    out << "  \"dim\": " << lib.dim() << ",\n";
    out << "  \"k\": " << lib.k() << ",\n";
    out << "  \"a\": " << json(lib.slope()).dump() << ",\n";
    out << "  \"norm\": " << json(lib.norm()).dump() << ",\n";
    out << "  \"norm_rule\": " << json(norm_is_k ? "k" : "fixed").dump() << ",\n";
    out << "  \"class_order\": " << json(lib.class_order()).dump() << ",\n";
    out << "  \"fingerprints\": [\n";
    const auto fps = lib.fingerprints();
    for (std::size_t c = 0; c < fps.size(); ++c) {
        std::vector<Entry> sorted(fps[c].ranked().begin(), fps[c].ranked().end());
        std::stable_sort(sorted.begin(), sorted.end(), [](const Entry& lhs, const Entry& rhs) {
            if (lhs.membership != rhs.membership) {
                return lhs.membership > rhs.membership;
            }
            return lhs.feature < rhs.feature;
        });
        json entries = json::array();
        for (const auto& e : sorted) {
            entries.push_back(json::array({e.feature, e.membership}));
        }
        json obj = {{"label", fps[c].label()}, {"entries", std::move(entries)}};
        out << "    " << obj.dump() << (c + 1 < fps.size() ? ",\n" : "\n");
    }
    out << "  ]\n}\n";
}

inline void save_library(const FingerprintLibrary& lib, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw Error(ErrorKind::io, "cannot write library '" + path + "'");
    }
    write_library(lib, out);
    if (!out) {
        throw Error(ErrorKind::io, "failed writing library '" + path + "'");
    }
}

inline FingerprintLibrary parse_library(std::istream& in, const std::string& source = "<library>") {
    using nlohmann::json;
    auto fail = [&](const std::string& msg) { return Error(ErrorKind::parse, source + ": " + msg); };

    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::exception& e) {
        throw fail(std::string("malformed library file: ") + e.what());
    }
    try {
        if (!doc.is_object() || doc.value("format", "") != "ffp-library") {
            throw fail("not a fingerprint library file");
        }
        if (!doc.contains("version") || doc.at("version").get<int>() != library_format_version) {
            throw fail("unsupported library version");
        }
        const auto dim = doc.at("dim").get<std::size_t>();
        const auto k = doc.at("k").get<std::size_t>();
        const auto slope = doc.at("a").get<double>();
        const auto norm = doc.at("norm").get<double>();
        const auto order = doc.at("class_order").get<std::vector<std::string>>();
        const auto& items = doc.at("fingerprints");
        if (!items.is_array() || items.empty()) {
            throw fail("library has no fingerprints");
        }

        std::vector<ClassFingerprint> fingerprints;
        std::unordered_set<std::string> labels;
        for (const auto& item : items) {
            auto label = item.at("label").get<std::string>();
            if (!labels.insert(label).second) {
                throw fail("duplicate class label '" + label + "'");
            }
            std::vector<Entry> entries;
            for (const auto& pair : item.at("entries")) {
                if (!pair.is_array() || pair.size() != 2) {
                    throw fail("entry of '" + label + "' is not a [feature, membership] pair");
                }
                Entry e{pair[0].get<std::size_t>(), pair[1].get<double>()};
                if (!(e.membership > 0.0 && e.membership <= 1.0)) {
                    throw fail("membership of feature " + std::to_string(e.feature) + " in '" + label +
                               "' outside (0, 1]");
                }
                entries.push_back(e);
            }
            fingerprints.push_back(ClassFingerprint::from_entries(label, dim, k, slope, std::move(entries)));
        }
        if (order.size() != fingerprints.size()) {
            throw fail("class_order does not match the fingerprints");
        }
        for (std::size_t c = 0; c < order.size(); ++c) {
            if (order[c] != fingerprints[c].label()) {
                throw fail("class_order does not match the fingerprints");
            }
        }
        return FingerprintLibrary(std::move(fingerprints), norm);
    } catch (const json::exception& e) {
        throw fail(std::string("invalid library field: ") + e.what());
    } catch (const Error& e) {
        if (e.kind() == ErrorKind::parse) {
            throw;
        }
        throw fail(e.what());
    }
}

inline FingerprintLibrary load_library(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw Error(ErrorKind::io, "cannot open library '" + path + "'");
    }
    return parse_library(in, path);
}

} // namespace ffp

#endif
