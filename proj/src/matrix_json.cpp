#include "rrkit/matrix_json.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "rrkit/errors.hpp"

namespace rrkit {

namespace {

std::size_t line_of(std::string_view text, std::size_t byte) {
  byte = std::min(byte, text.size());
  return 1 + static_cast<std::size_t>(std::count(text.begin(), text.begin() + byte, '\n'));
}

}  // namespace

FieldMatrix parse_matrix_json(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(line_of(text, e.byte == 0 ? 0 : e.byte - 1), "malformed JSON");
  }
  if (!doc.is_object() || !doc.contains("entries") || !doc["entries"].is_array())
    throw ParseError(1, "expected an object with an \"entries\" array");
  std::vector<std::vector<std::int64_t>> rows;
  for (const auto& row : doc["entries"]) {
    if (!row.is_array()) throw ParseError(1, "each row of \"entries\" must be an array");
    auto& out = rows.emplace_back();
    for (const auto& v : row) {
      if (!v.is_number_integer()) throw ParseError(1, "matrix entries must be integers");
      out.push_back(v.get<std::int64_t>());
    }
  }
  if (rows.empty()) throw ArityError("matrix has no rows");
  Modulus mod = default_modulus(rows.size());
  if (doc.contains("modulus")) {
    const auto& p = doc["modulus"];
    if (!p.is_number_unsigned()) throw ParseError(1, "\"modulus\" must be a positive integer");
    mod = Modulus(p.get<std::uint64_t>());
  }
  return FieldMatrix(rows, mod);
}

FieldMatrix read_matrix_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_matrix_json(buf.str());
}

std::string matrix_to_json(const FieldMatrix& m) {
  nlohmann::json doc;
  doc["modulus"] = m.modulus().value();
  doc["entries"] = nlohmann::json::array();
  for (std::size_t i = 0; i < m.dimension(); ++i) {
    auto row = nlohmann::json::array();
    for (std::size_t j = 0; j < m.dimension(); ++j) row.push_back(m.at(i, j).value());
    doc["entries"].push_back(row);
  }
  return doc.dump();
}

}  // namespace rrkit
