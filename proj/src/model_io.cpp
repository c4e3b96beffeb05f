#include "obsa/model_io.hpp"

#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

namespace obsa {

namespace {

using nlohmann::json;

Matrix parse_matrix(const json& node, const std::string& key) {
    if (!node.is_array() || node.empty()) {
        throw std::invalid_argument("model key '" + key +
                                    "' must be a non-empty array of rows");
    }
    const std::size_t rows = node.size();
    std::size_t cols = 0;
    Matrix m;
    for (std::size_t i = 0; i < rows; ++i) {
        const json& row = node[i];
        if (!row.is_array() || row.empty()) {
            throw std::invalid_argument("model key '" + key + "' row " +
                                        std::to_string(i) + " must be a non-empty array");
        }
        if (i == 0) {
            cols = row.size();
            m.resize(rows, cols);
        } else if (row.size() != cols) {
            throw std::invalid_argument("model key '" + key +
                                        "' has rows of unequal length");
        }
        for (std::size_t j = 0; j < cols; ++j) {
            if (!row[j].is_number()) {
                throw std::invalid_argument("model key '" + key +
                                            "' contains a non-numeric entry");
            }
            m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
                row[j].get<double>();
        }
    }
    return m;
}

Vector parse_vector(const json& node, const std::string& key) {
    if (!node.is_array() || node.empty()) {
        throw std::invalid_argument("model key '" + key +
                                    "' must be a non-empty array of numbers");
    }
    Vector v(node.size());
    for (std::size_t i = 0; i < node.size(); ++i) {
        if (!node[i].is_number()) {
            throw std::invalid_argument("model key '" + key +
                                        "' contains a non-numeric entry");
        }
        v(static_cast<Eigen::Index>(i)) = node[i].get<double>();
    }
    return v;
}

json matrix_to_json(const Matrix& m) {
    json rows = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
        rows.push_back(std::move(row));
    }
    return rows;
}

json vector_to_json(const Vector& v) {
    json arr = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(v(i));
    return arr;
}

}  // namespace

LoadedModel load_model_json(const nlohmann::json& doc,
                            const std::string& fallback_name) {
    if (!doc.is_object()) {
        throw std::invalid_argument("model document must be a JSON object");
    }
    static const std::set<std::string> known = {
        "name", "A", "C", "rated_states", "rated_outputs", "shared_ranges"};

    LoadedModel loaded;
    std::vector<std::string> unknown;
    for (const auto& [key, value] : doc.items()) {
        (void)value;
        if (!known.contains(key)) unknown.push_back(key);
    }
    if (!unknown.empty()) {
        std::ostringstream msg;
        msg << "ignoring unknown model key(s):";
        for (const auto& k : unknown) msg << " '" << k << "'";
        loaded.warnings.push_back(msg.str());
    }

    if (!doc.contains("A")) throw std::invalid_argument("model is missing key 'A'");
    if (!doc.contains("C")) throw std::invalid_argument("model is missing key 'C'");

    LdtSystem& sys = loaded.system;
    sys.A = parse_matrix(doc["A"], "A");
    sys.C = parse_matrix(doc["C"], "C");
    if (doc.contains("name")) {
        if (!doc["name"].is_string()) {
            throw std::invalid_argument("model key 'name' must be a string");
        }
        sys.name = doc["name"].get<std::string>();
    } else {
        sys.name = fallback_name;
    }
    if (doc.contains("rated_states")) {
        sys.rated_states = parse_vector(doc["rated_states"], "rated_states");
    }
    if (doc.contains("rated_outputs")) {
        sys.rated_outputs = parse_vector(doc["rated_outputs"], "rated_outputs");
    }
    if (doc.contains("shared_ranges")) {
        sys.shared_ranges = parse_vector(doc["shared_ranges"], "shared_ranges");
    }
    return loaded;
}

LoadedModel load_model_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::invalid_argument("cannot open model file: " + path);
    }
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::parse_error& e) {
        throw std::invalid_argument("cannot parse model file " + path + ": " +
                                    e.what());
    }
    return load_model_json(doc, std::filesystem::path(path).stem().string());
}

nlohmann::ordered_json model_to_json(const LdtSystem& sys) {
    nlohmann::ordered_json doc;
    doc["name"] = sys.name;
    doc["A"] = matrix_to_json(sys.A);
    doc["C"] = matrix_to_json(sys.C);
    if (sys.rated_states) doc["rated_states"] = vector_to_json(*sys.rated_states);
    if (sys.rated_outputs) doc["rated_outputs"] = vector_to_json(*sys.rated_outputs);
    if (sys.shared_ranges) doc["shared_ranges"] = vector_to_json(*sys.shared_ranges);
    return doc;
}

}  // namespace obsa
