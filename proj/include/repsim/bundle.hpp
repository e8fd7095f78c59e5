#pragma once

// Representation bundles: per-layer activation matrices over one sample set.
//
// On disk a bundle is a directory holding
//   manifest.json  {"model_name": ..., "layers": [{"name", "file"}], "labels_file": ...}
//   one .npy file per layer ('<f4' or '<f8', C order, rank 2-4, first axis = sample)
//   a labels file with one UTF-8 label per line.

#include <cmath>
#include <filesystem>
#include <fstream>
#include <string>
#include <unordered_set>
#include <vector>

#include <json.hpp>

#include "repsim/error.hpp"
#include "repsim/matrix.hpp"
#include "repsim/npy.hpp"

namespace repsim {

using LabelVector = std::vector<std::string>;

struct Layer {
    std::string name;
    Matrix matrix;  // N x M, one row per sample
};

/// Reshape an N x d1 [x d2 [x d3]] array into N x (d1*d2*d3), last axis fastest.
inline Matrix flatten(const npy::Array& raw) {
    const std::size_t rank = raw.shape.size();
    if (rank < 2 || rank > 4)
        fail(ErrorKind::validation,
             "activation arrays must have rank 2 to 4, got rank " + std::to_string(rank));
    const std::size_t n = raw.shape[0];
    std::size_t m = 1;
    for (std::size_t i = 1; i < rank; ++i) m *= raw.shape[i];
    // C order already stores each sample's trailing block contiguously.
    return Matrix(n, m, raw.values);
}

/// Checks the LayerMatrix invariants; `name` is used in error messages.
inline void validate_layer_matrix(const Matrix& x, const std::string& name) {
    if (x.rows() < 2)
        fail(ErrorKind::validation, "layer '" + name + "' has " + std::to_string(x.rows()) +
                                        " samples; at least 2 are required");
    if (x.cols() < 1)
        fail(ErrorKind::validation, "layer '" + name + "' has an empty feature dimension");
    for (std::size_t i = 0; i < x.rows(); ++i)
        for (double v : x.row(i))
            if (!std::isfinite(v))
                fail(ErrorKind::validation,
                     "non-finite value in layer '" + name + "' at row " + std::to_string(i));
}

class RepresentationBundle {
public:
    RepresentationBundle(std::string model_name, std::vector<Layer> layers, LabelVector labels)
        : model_name_(std::move(model_name)), layers_(std::move(layers)), labels_(std::move(labels)) {
        if (layers_.empty()) fail(ErrorKind::validation, "bundle has no layers");
        const std::size_t n = layers_.front().matrix.rows();
        std::unordered_set<std::string> seen;
        for (const auto& layer : layers_) {
            if (!seen.insert(layer.name).second)
                fail(ErrorKind::validation, "duplicate layer name '" + layer.name + "'");
            if (layer.matrix.rows() != n)
                fail(ErrorKind::validation, "layer '" + layer.name + "' has " +
                                                std::to_string(layer.matrix.rows()) + " rows, expected " +
                                                std::to_string(n));
            validate_layer_matrix(layer.matrix, layer.name);
        }
        if (labels_.size() != n)
            fail(ErrorKind::validation, "labels has " + std::to_string(labels_.size()) +
                                            " entries, expected " + std::to_string(n));
    }

    const std::string& model_name() const noexcept { return model_name_; }
    const std::vector<Layer>& layers() const noexcept { return layers_; }
    const LabelVector& labels() const noexcept { return labels_; }
    std::size_t sample_count() const noexcept { return labels_.size(); }
    std::size_t layer_count() const noexcept { return layers_.size(); }

    const Layer& layer(const std::string& name) const {
        for (const auto& l : layers_)
            if (l.name == name) return l;
        fail(ErrorKind::validation, "bundle '" + model_name_ + "' has no layer '" + name + "'");
    }

private:
    std::string model_name_;
    std::vector<Layer> layers_;
    LabelVector labels_;
};

inline LabelVector read_labels(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(ErrorKind::io, "cannot open labels file " + path.string());
    LabelVector labels;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        labels.push_back(line);
    }
    // A trailing newline does not introduce an extra empty label.
    while (!labels.empty() && labels.back().empty()) labels.pop_back();
    return labels;
}

inline RepresentationBundle load_bundle(const std::filesystem::path& dir) {
    const auto manifest_path = dir / "manifest.json";
    std::ifstream in(manifest_path);
    if (!in) fail(ErrorKind::io, "cannot open " + manifest_path.string());

    nlohmann::json manifest;
    try {
        manifest = nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        fail(ErrorKind::io, manifest_path.string() + ": " + e.what());
    }

    std::string model_name;
    std::string labels_file;
    std::vector<std::pair<std::string, std::string>> entries;
    try {
        model_name = manifest.at("model_name").get<std::string>();
        labels_file = manifest.at("labels_file").get<std::string>();
        for (const auto& entry : manifest.at("layers"))
            entries.emplace_back(entry.at("name").get<std::string>(), entry.at("file").get<std::string>());
    } catch (const nlohmann::json::exception& e) {
        fail(ErrorKind::io, manifest_path.string() + ": " + e.what());
    }

    std::vector<Layer> layers;
    layers.reserve(entries.size());
    for (auto& [name, file] : entries) {
        Matrix m = flatten(npy::read(dir / file));
        layers.push_back({std::move(name), std::move(m)});
    }
    return RepresentationBundle(std::move(model_name), std::move(layers), read_labels(dir / labels_file));
}

/// Writes `bundle` to `dir` (created if needed) as 2-D '<f8' layers plus labels.txt.
inline void write_bundle(const std::filesystem::path& dir, const RepresentationBundle& bundle) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) fail(ErrorKind::io, "cannot create " + dir.string() + ": " + ec.message());

    nlohmann::json manifest;
    manifest["model_name"] = bundle.model_name();
    manifest["labels_file"] = "labels.txt";
    manifest["layers"] = nlohmann::json::array();
    for (std::size_t i = 0; i < bundle.layer_count(); ++i) {
        const auto& layer = bundle.layers()[i];
        const std::string file = "layer_" + std::to_string(i) + ".npy";
        npy::Array a;
        a.shape = {layer.matrix.rows(), layer.matrix.cols()};
        a.values.assign(layer.matrix.values().begin(), layer.matrix.values().end());
        npy::write(dir / file, a);
        manifest["layers"].push_back({{"name", layer.name}, {"file", file}});
    }

    std::ofstream labels(dir / "labels.txt", std::ios::binary | std::ios::trunc);
    if (!labels) fail(ErrorKind::io, "cannot create " + (dir / "labels.txt").string());
    for (const auto& l : bundle.labels()) labels << l << '\n';

    std::ofstream out(dir / "manifest.json", std::ios::trunc);
    if (!out) fail(ErrorKind::io, "cannot create " + (dir / "manifest.json").string());
    out << manifest.dump(2) << '\n';
    if (!out || !labels) fail(ErrorKind::io, "write failure in " + dir.string());
}

} // namespace repsim
