#ifndef FFP_DATASET_HPP
#define FFP_DATASET_HPP

// Labeled vector datasets and their plain-text file format:
//
//   #dim=<d>
//   #classes=<label>,<label>,...
//   <id>,<label>,<v0>,...,<v(d-1)>
//
// Other lines starting with '#' are comments. Values are written with the
// shortest decimal representation that reads back to the same double.

#include <cstddef>
#include <fstream>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "error.hpp"
#include "fingerprint.hpp"
#include "format.hpp"

namespace ffp {

struct Instance {
    std::string id;
    std::string label;
    FeatureVector vector;

    friend bool operator==(const Instance&, const Instance&) = default;
};

class LabeledDataset {
public:
    LabeledDataset() = default;

    LabeledDataset(std::size_t dim, std::vector<std::string> classes) : dim_(dim), classes_(std::move(classes)) {
        if (dim_ == 0) {
            throw Error(ErrorKind::config, "dataset dim must be positive");
        }
        for (std::size_t c = 0; c < classes_.size(); ++c) {
            const auto& label = classes_[c];
            if (label.empty() || label.find_first_of(",\n") != std::string::npos) {
                throw Error(ErrorKind::config, "invalid class label '" + label + "'");
            }
            if (!class_index_.emplace(label, c).second) {
                throw Error(ErrorKind::config, "duplicate class label '" + label + "'");
            }
        }
    }

    void add(std::string id, std::string label, FeatureVector vector) {
        if (vector.dim() != dim_) {
            throw Error(ErrorKind::dimension, "instance '" + id + "' has dim " +
                                                  std::to_string(vector.dim()) + ", dataset dim is " +
                                                  std::to_string(dim_));
        }
        if (!class_index_.count(label)) {
            throw Error(ErrorKind::config, "instance '" + id + "' has undeclared label '" + label + "'");
        }
        if (id.empty() || id.find_first_of(",\n") != std::string::npos || id.front() == '#') {
            throw Error(ErrorKind::config, "invalid instance id '" + id + "'");
        }
        if (!ids_.insert(id).second) {
            throw Error(ErrorKind::config, "duplicate instance id '" + id + "'");
        }
        instances_.push_back({std::move(id), std::move(label), std::move(vector)});
    }

    std::size_t dim() const noexcept { return dim_; }
    const std::vector<std::string>& classes() const noexcept { return classes_; }
    const std::vector<Instance>& instances() const noexcept { return instances_; }
    std::size_t size() const noexcept { return instances_.size(); }
    bool empty() const noexcept { return instances_.empty(); }

    bool has_class(const std::string& label) const { return class_index_.count(label) != 0; }
    bool has_id(const std::string& id) const { return ids_.count(id) != 0; }

    std::size_t class_index(const std::string& label) const {
        auto it = class_index_.find(label);
        if (it == class_index_.end()) {
            throw Error(ErrorKind::config, "unknown class label '" + label + "'");
        }
        return it->second;
    }

    /// Vectors of one class in dataset order.
    std::vector<FeatureVector> vectors_of(const std::string& label) const {
        std::vector<FeatureVector> out;
        for (const auto& inst : instances_) {
            if (inst.label == label) {
                out.push_back(inst.vector);
            }
        }
        return out;
    }

    std::vector<std::size_t> class_counts() const {
        std::vector<std::size_t> counts(classes_.size(), 0);
        for (const auto& inst : instances_) {
            ++counts[class_index(inst.label)];
        }
        return counts;
    }

    friend bool operator==(const LabeledDataset& lhs, const LabeledDataset& rhs) {
        return lhs.dim_ == rhs.dim_ && lhs.classes_ == rhs.classes_ && lhs.instances_ == rhs.instances_;
    }

private:
    std::size_t dim_ = 0;
    std::vector<std::string> classes_;
    std::vector<Instance> instances_;
    std::unordered_map<std::string, std::size_t> class_index_;
    std::unordered_set<std::string> ids_;
};

namespace detail {

inline Error parse_error(const std::string& source, std::size_t line, const std::string& msg) {
    return Error(ErrorKind::parse, source + ":" + std::to_string(line) + ": " + msg);
}

inline std::vector<std::string> parse_label_list(std::string_view text) {
    std::vector<std::string> labels;
    if (trim(text).empty()) {
        return labels;
    }
    for (auto part : split(text, ',')) {
        labels.emplace_back(trim(part));
    }
    return labels;
}

} // namespace detail

inline LabeledDataset parse_dataset(std::istream& in, const std::string& source = "<dataset>") {
    std::optional<std::size_t> dim;
    std::optional<std::vector<std::string>> classes;
    std::optional<LabeledDataset> ds;
    std::string line;
    std::size_t line_no = 0;

    while (std::getline(in, line)) {
        ++line_no;
        std::string_view view = line;
        if (!view.empty() && view.back() == '\r') {
            view.remove_suffix(1);
        }
        if (trim(view).empty()) {
            continue;
        }
        if (view.front() == '#') {
            if (view.starts_with("#dim=")) {
                if (ds) {
                    throw detail::parse_error(source, line_no, "header after data rows");
                }
                dim = parse_size(trim(view.substr(5)));
                if (!dim || *dim == 0) {
                    throw detail::parse_error(source, line_no, "invalid #dim header");
                }
            } else if (view.starts_with("#classes=")) {
                if (ds) {
                    throw detail::parse_error(source, line_no, "header after data rows");
                }
                classes = detail::parse_label_list(view.substr(9));
            }
            continue;
        }
        if (!ds) {
            if (!dim || !classes) {
                throw detail::parse_error(source, line_no, "data row before #dim and #classes headers");
            }
            try {
                ds.emplace(*dim, *classes);
            } catch (const Error& e) {
                throw detail::parse_error(source, line_no, e.what());
            }
        }
        auto fields = split(view, ',');
        if (fields.size() != *dim + 2) {
            throw detail::parse_error(source, line_no,
                                      "expected " + std::to_string(*dim + 2) + " fields, found " +
                                          std::to_string(fields.size()));
        }
        std::string id(trim(fields[0]));
        std::string label(trim(fields[1]));
        if (!ds->has_class(label)) {
            throw detail::parse_error(source, line_no, "label '" + label + "' not declared in #classes");
        }
        std::vector<double> values;
        values.reserve(*dim);
        for (std::size_t i = 0; i < *dim; ++i) {
            auto cell = trim(fields[i + 2]);
            auto value = parse_double(cell);
            if (!value || !std::isfinite(*value)) {
                throw detail::parse_error(source, line_no,
                                          "non-numeric cell '" + std::string(cell) + "' in column " +
                                              std::to_string(i + 3));
            }
            values.push_back(*value);
        }
        try {
            ds->add(std::move(id), std::move(label), FeatureVector(std::move(values)));
        } catch (const Error& e) {
            throw detail::parse_error(source, line_no, e.what());
        }
    }
    if (!ds) {
        if (!dim || !classes) {
            throw detail::parse_error(source, line_no, "missing #dim or #classes header");
        }
        ds.emplace(*dim, *classes);
    }
    return std::move(*ds);
}

inline LabeledDataset read_dataset(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw Error(ErrorKind::io, "cannot open dataset '" + path + "'");
    }
    return parse_dataset(in, path);
}

inline void write_dataset(const LabeledDataset& ds, std::ostream& out) {
    out << "#dim=" << ds.dim() << '\n' << "#classes=";
    for (std::size_t c = 0; c < ds.classes().size(); ++c) {
        out << (c ? "," : "") << ds.classes()[c];
    }
    out << '\n';
    for (const auto& inst : ds.instances()) {
        out << inst.id << ',' << inst.label;
        for (double v : inst.vector.values()) {
            out << ',' << format_shortest(v);
        }
        out << '\n';
    }
}

inline void write_dataset(const LabeledDataset& ds, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw Error(ErrorKind::io, "cannot write dataset '" + path + "'");
    }
    write_dataset(ds, out);
    if (!out) {
        throw Error(ErrorKind::io, "failed writing dataset '" + path + "'");
    }
}

} // namespace ffp

#endif
