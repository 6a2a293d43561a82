#include "permkit/io.hpp"

#include <json.hpp>

#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>

namespace permkit {

namespace {

std::string trim(std::string_view s) {
    size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return std::string(s.substr(b, e - b));
}

MatrixEntry make_entry(std::string label, const std::vector<std::vector<double>>& rows) {
    MatrixEntry entry;
    entry.label = std::move(label);
    const size_t n = rows.size();
    for (const auto& r : rows)
        if (r.size() != n) {
            entry.error = "DimensionError: matrix is not square";
            return entry;
        }
    if (n < 1 || n > static_cast<size_t>(kMaxDim)) {
        entry.error = "DimensionError: dimension out of supported range";
        return entry;
    }
    Matrix m(static_cast<int>(n));
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j) {
            const double v = rows[i][j];
            if (!std::isfinite(v)) {
                entry.error = "ParseError: non-finite entry";
                return entry;
            }
            m(static_cast<int>(i), static_cast<int>(j)) = v;
        }
    entry.matrix = std::move(m);
    return entry;
}

MatrixFile parse_plain(std::string_view text) {
    MatrixFile file;
    file.format = FileFormat::PlainText;

    std::vector<std::vector<double>> rows;
    std::string pending_label;
    int anonymous = 0;

    const auto flush = [&] {
        if (rows.empty()) return;
        std::string label =
            pending_label.empty() ? "matrix_" + std::to_string(anonymous) : pending_label;
        ++anonymous;
        file.entries.push_back(make_entry(std::move(label), rows));
        rows.clear();
        pending_label.clear();
    };

    std::istringstream in{std::string(text)};
    std::string raw;
    while (std::getline(in, raw)) {
        std::string line = raw;
        if (const size_t hash = line.find('#'); hash != std::string::npos) {
            const std::string comment = trim(line.substr(hash + 1));
            if (comment.rfind("label:", 0) == 0) pending_label = trim(comment.substr(6));
            line = line.substr(0, hash);
        }
        line = trim(line);
        if (line.empty()) {
            flush();
            continue;
        }
        std::istringstream ls(line);
        std::vector<double> row;
        double v = 0.0;
        while (ls >> v) row.push_back(v);
        if (!ls.eof()) throw ParseError("unparseable row: " + raw);
        rows.push_back(std::move(row));
    }
    flush();
    return file;
}

MatrixFile parse_structured(std::string_view text) {
    MatrixFile file;
    file.format = FileFormat::Structured;
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("invalid JSON: ") + e.what());
    }
    if (!doc.is_array()) throw ParseError("structured input must be a JSON list");
    int anonymous = 0;
    for (const auto& item : doc) {
        if (!item.is_object() || !item.contains("rows"))
            throw ParseError("structured entries need a 'rows' field");
        std::string label = item.value("label", std::string{});
        if (label.empty()) label = "matrix_" + std::to_string(anonymous);
        ++anonymous;
        std::vector<std::vector<double>> rows;
        try {
            rows = item.at("rows").get<std::vector<std::vector<double>>>();
        } catch (const nlohmann::json::exception& e) {
            throw ParseError(std::string("invalid 'rows': ") + e.what());
        }
        file.entries.push_back(make_entry(std::move(label), rows));
    }
    return file;
}

}  // namespace

MatrixFile parse_matrix_text(std::string_view text, FileFormat format) {
    return format == FileFormat::Structured ? parse_structured(text) : parse_plain(text);
}

MatrixFile parse_matrix_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open input file: " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    const std::string text = buf.str();

    FileFormat format = FileFormat::PlainText;
    if (path.size() >= 5 && path.substr(path.size() - 5) == ".json") {
        format = FileFormat::Structured;
    } else {
        for (char c : text) {
            if (std::isspace(static_cast<unsigned char>(c))) continue;
            if (c == '[') format = FileFormat::Structured;
            break;
        }
    }
    MatrixFile file = parse_matrix_text(text, format);
    file.path = path;
    return file;
}

}  // namespace permkit
