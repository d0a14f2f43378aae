#include "charfact/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <utility>

#include "charfact/errors.hpp"
#include "json.hpp"

namespace charfact {

namespace {

using nlohmann::json;

json parse_json(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what());
  }
}

Complex parse_complex(const json& j, const std::string& where) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() ||
      !j[1].is_number()) {
    throw ParseError(where + ": complex entries must be [re, im] pairs");
  }
  return Complex(j[0].get<double>(), j[1].get<double>());
}

ComplexMatrix parse_matrix(const json& j, const std::string& where) {
  if (!j.is_array()) {
    throw ParseError(where + ": a matrix must be an array of rows");
  }
  const Eigen::Index rows = static_cast<Eigen::Index>(j.size());
  Eigen::Index cols = 0;
  if (rows > 0) {
    if (!j[0].is_array()) {
      throw ParseError(where + ": a matrix row must be an array");
    }
    cols = static_cast<Eigen::Index>(j[0].size());
  }
  ComplexMatrix m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    const json& row = j[static_cast<std::size_t>(r)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols) {
      throw ParseError(where + ": ragged matrix rows");
    }
    for (Eigen::Index c = 0; c < cols; ++c) {
      m(r, c) = parse_complex(row[static_cast<std::size_t>(c)], where);
    }
  }
  return m;
}

RowOperator parse_tuple(const json& j, int n, Eigen::Index dim,
                        const std::string& where) {
  if (!j.is_array() || static_cast<int>(j.size()) != n) {
    throw ParseError(where + ": expected an array of " + std::to_string(n) +
                     " matrices");
  }
  std::vector<ComplexMatrix> blocks;
  blocks.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    ComplexMatrix block =
        parse_matrix(j[static_cast<std::size_t>(i)],
                     where + "[" + std::to_string(i) + "]");
    if (block.rows() != dim || block.cols() != dim) {
      throw ParseError(where + "[" + std::to_string(i) + "]: expected a " +
                       std::to_string(dim) + "x" + std::to_string(dim) +
                       " matrix, got " + std::to_string(block.rows()) + "x" +
                       std::to_string(block.cols()));
    }
    blocks.push_back(std::move(block));
  }
  return make_row_operator(std::move(blocks));
}

Eigen::Index parse_dimension(const json& j, const std::string& where) {
  if (!j.is_number_integer() || j.get<long long>() < 0) {
    throw ParseError(where + ": must be a non-negative integer");
  }
  return static_cast<Eigen::Index>(j.get<long long>());
}

void append_escaped(std::string& out, const std::string& s) {
  out.push_back('"');
  for (char ch : s) {
    switch (ch) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      case '\t': out += "\\t"; break;
      default:
        if (static_cast<unsigned char>(ch) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof(buf), "\\u%04x",
                        static_cast<unsigned>(static_cast<unsigned char>(ch)));
          out += buf;
        } else {
          out.push_back(ch);
        }
    }
  }
  out.push_back('"');
}

void append_double(std::string& out, double v) {
  if (!std::isfinite(v)) {
    out += "null";
    return;
  }
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  out += buf;
}

void append_named_doubles(std::string& out,
                          const std::map<std::string, double>& values) {
  out.push_back('{');
  bool first = true;
  for (const auto& [name, value] : values) {
    if (!first) out.push_back(',');
    first = false;
    append_escaped(out, name);
    out.push_back(':');
    append_double(out, value);
  }
  out.push_back('}');
}

void append_matrix(std::string& out, const ComplexMatrix& m) {
  out.push_back('[');
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    if (r > 0) out.push_back(',');
    out.push_back('[');
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      if (c > 0) out.push_back(',');
      out.push_back('[');
      append_double(out, m(r, c).real());
      out.push_back(',');
      append_double(out, m(r, c).imag());
      out.push_back(']');
    }
    out.push_back(']');
  }
  out.push_back(']');
}

}  // namespace

Instance parse_instance_text(const std::string& text) {
  const json doc = parse_json(text);
  if (!doc.is_object()) {
    throw ParseError("instance document must be a JSON object");
  }
  for (const auto& item : doc.items()) {
    const std::string& key = item.key();
    if (key != "n" && key != "spaces" && key != "A" && key != "B" &&
        key != "T" && key != "L" && key != "w" && key != "meta") {
      throw ParseError("unknown instance field '" + key + "'");
    }
  }
  if (!doc.contains("n") || !doc["n"].is_number_integer()) {
    throw ParseError("instance field 'n' must be an integer");
  }
  Instance inst;
  inst.n = doc["n"].get<int>();
  if (inst.n < 1 || inst.n > 9) {
    throw ParseError("tuple length n must be between 1 and 9, got " +
                     std::to_string(inst.n));
  }
  if (!doc.contains("spaces") || !doc["spaces"].is_object()) {
    throw ParseError("instance field 'spaces' must be an object");
  }
  const json& spaces = doc["spaces"];
  if (spaces.contains("h")) {
    if (spaces.size() != 1) {
      throw ParseError("'spaces' must be {\"h\": dim} or {\"h1\": dim, \"h2\": dim}");
    }
    inst.split = false;
    inst.h = parse_dimension(spaces["h"], "spaces.h");
  } else if (spaces.contains("h1") && spaces.contains("h2")) {
    if (spaces.size() != 2) {
      throw ParseError("'spaces' must be {\"h\": dim} or {\"h1\": dim, \"h2\": dim}");
    }
    inst.split = true;
    inst.h1 = parse_dimension(spaces["h1"], "spaces.h1");
    inst.h2 = parse_dimension(spaces["h2"], "spaces.h2");
  } else {
    throw ParseError("'spaces' must be {\"h\": dim} or {\"h1\": dim, \"h2\": dim}");
  }

  if (!inst.split) {
    for (const char* banned : {"A", "B", "L", "w"}) {
      if (doc.contains(banned)) {
        throw ParseError(std::string("field '") + banned +
                         "' requires split spaces {\"h1\", \"h2\"}");
      }
    }
    if (!doc.contains("T")) {
      throw ParseError("single-space instance must provide 'T'");
    }
    inst.t = parse_tuple(doc["T"], inst.n, inst.h, "T");
    return inst;
  }

  if (!doc.contains("A") || !doc.contains("B")) {
    throw ParseError("split instance must provide 'A' and 'B'");
  }
  inst.a = parse_tuple(doc["A"], inst.n, inst.h1, "A");
  inst.b = parse_tuple(doc["B"], inst.n, inst.h2, "B");
  if (doc.contains("L")) {
    inst.l = parse_matrix(doc["L"], "L");
  }
  if (doc.contains("w")) {
    inst.w = parse_matrix(doc["w"], "w");
  }
  if (doc.contains("T")) {
    inst.t = parse_tuple(doc["T"], inst.n, inst.h1 + inst.h2, "T");
  }
  return inst;
}

Instance parse_instance_file(const std::string& path) {
  return parse_instance_text(read_text_file(path));
}

std::vector<ComplexVector> parse_points_text(const std::string& text, int n) {
  const json doc = parse_json(text);
  if (!doc.is_array()) {
    throw ParseError("points document must be a JSON array of points");
  }
  std::vector<ComplexVector> out;
  out.reserve(doc.size());
  for (std::size_t i = 0; i < doc.size(); ++i) {
    const json& p = doc[i];
    const std::string where = "points[" + std::to_string(i) + "]";
    if (!p.is_array() || static_cast<int>(p.size()) != n) {
      throw ParseError(where + ": expected " + std::to_string(n) +
                       " coordinates");
    }
    ComplexVector z(n);
    for (int c = 0; c < n; ++c) {
      z(c) = parse_complex(p[static_cast<std::size_t>(c)], where);
    }
    out.push_back(std::move(z));
  }
  return out;
}

std::vector<ComplexVector> parse_points_file(const std::string& path, int n) {
  return parse_points_text(read_text_file(path), n);
}

std::vector<std::uint64_t> parse_seeds_file(const std::string& path) {
  const json doc = parse_json(read_text_file(path));
  if (!doc.is_array()) {
    throw ParseError("seeds document must be a JSON array of integers");
  }
  std::vector<std::uint64_t> out;
  out.reserve(doc.size());
  for (std::size_t i = 0; i < doc.size(); ++i) {
    if (!doc[i].is_number_integer() || doc[i].get<long long>() < 0) {
      throw ParseError("seeds[" + std::to_string(i) +
                       "]: must be a non-negative integer");
    }
    out.push_back(doc[i].get<std::uint64_t>());
  }
  return out;
}

std::string certificate_to_json(const Certificate& cert) {
  std::string out = "{";
  if (cert.include_coefficients) {
    out += "\"coefficients\":{";
    bool first = true;
    for (const auto& [word, matrix] : cert.coefficients) {
      if (!first) out.push_back(',');
      first = false;
      append_escaped(out, word);
      out.push_back(':');
      append_matrix(out, matrix);
    }
    out += "},";
  }
  out += "\"k\":" + std::to_string(cert.k) + ",";
  out += std::string("\"pass\":") + (cert.pass ? "true" : "false") + ",";
  out += "\"residuals\":";
  append_named_doubles(out, cert.residuals);
  out += ",\"seed\":" + std::to_string(cert.seed) + ",";
  out += "\"theorem\":";
  append_escaped(out, cert.theorem);
  out += ",\"tolerances\":";
  append_named_doubles(out, cert.tolerances);
  out += ",\"versions\":{\"charfact\":\"1.0.0\",\"format\":\"1\"}}";
  return out;
}

std::string certificates_to_json(const std::vector<Certificate>& certs) {
  std::string out = "{\"certificates\":[";
  bool all_pass = true;
  for (std::size_t i = 0; i < certs.size(); ++i) {
    if (i > 0) out.push_back(',');
    out += certificate_to_json(certs[i]);
    all_pass = all_pass && certs[i].pass;
  }
  out += "],\"pass\":";
  out += all_pass ? "true" : "false";
  out.push_back('}');
  return out;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw ParseError("cannot read file: " + path);
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw ParseError("cannot write file: " + path);
  }
  out << content;
  if (!out) {
    throw ParseError("failed while writing file: " + path);
  }
}

}  // namespace charfact
