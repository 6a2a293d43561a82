#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "permkit/matrix.hpp"

namespace permkit {

/// One parsed candidate matrix. Non-square or otherwise unusable blocks
/// keep their label and carry an error note instead of a matrix.
struct MatrixEntry {
    std::string label;
    std::optional<Matrix> matrix;
    std::string error;
};

enum class FileFormat { PlainText, Structured };

struct MatrixFile {
    std::string path;
    FileFormat format = FileFormat::PlainText;
    std::vector<MatrixEntry> entries;
};

/// Plain text: whitespace-separated rows, one matrix per block, blocks
/// separated by blank lines, '#' comments; a comment of the form
/// "# label: NAME" names the following block. Structured: a JSON list of
/// objects with fields "label" and "rows". Format chosen by extension
/// (.json) or a leading '['. Throws ParseError on malformed input.
MatrixFile parse_matrix_file(const std::string& path);

/// Parsing core, exposed for tests.
MatrixFile parse_matrix_text(std::string_view text, FileFormat format);

}  // namespace permkit
