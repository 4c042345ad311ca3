#include "dsplit/scheme_io.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace dsplit {
namespace {

using nlohmann::json;

Coefficient parse_entry(const json& j, const std::string& field) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number())
    return {j[0].get<double>(), j[1].get<double>()};
  throw ParseError("field '" + field + "': expected [re, im] pair or number");
}

std::vector<Coefficient> parse_list(const json& doc, const std::string& field, bool required = true) {
  if (!doc.contains(field)) {
    if (required) throw ParseError("missing field '" + field + "'");
    return {};
  }
  const json& arr = doc.at(field);
  if (!arr.is_array()) throw ParseError("field '" + field + "': expected an array");
  std::vector<Coefficient> out;
  out.reserve(arr.size());
  for (std::size_t i = 0; i < arr.size(); ++i)
    out.push_back(parse_entry(arr[i], field + "[" + std::to_string(i) + "]"));
  return out;
}

int parse_int(const json& doc, const std::string& field, int fallback) {
  if (!doc.contains(field)) return fallback;
  if (!doc.at(field).is_number_integer()) throw ParseError("field '" + field + "': expected an integer");
  return doc.at(field).get<int>();
}

json entry(Coefficient c) { return json::array({c.real(), c.imag()}); }

json list(std::span<const Coefficient> xs) {
  json arr = json::array();
  for (const auto& x : xs) arr.push_back(entry(x));
  return arr;
}

std::size_t line_of(std::string_view text, std::size_t byte) {
  byte = std::min(byte, text.size());
  return 1 + static_cast<std::size_t>(std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(byte), '\n'));
}

SplittingScheme parse_splitting(const json& doc, std::string name) {
  SplittingScheme s;
  s.name = std::move(name);
  s.a = parse_list(doc, "a");
  s.b = parse_list(doc, "b");
  s.p_component = parse_int(doc, "p", 1);
  s.q_averaged = parse_int(doc, "q", s.p_component);
  s.complex_coeffs = std::any_of(s.a.begin(), s.a.end(), [](auto c) { return c.imag() != 0.0; }) ||
                     std::any_of(s.b.begin(), s.b.end(), [](auto c) { return c.imag() != 0.0; });
  if (doc.contains("symmetric")) {
    if (!doc.at("symmetric").is_boolean()) throw ParseError("field 'symmetric': expected a boolean");
    s.symmetric = doc.at("symmetric").get<bool>();
  } else {
    s.symmetric = s.a.size() == s.b.size() && !s.a.empty() && verify_consistency(s).palindrome_ok;
  }
  validate(s);
  return s;
}

LowStorageScheme parse_low_storage(const json& doc, std::string name, LowStorageScheme::Format format) {
  LowStorageScheme s;
  s.name = std::move(name);
  s.format = format;
  s.order = parse_int(doc, "p", 0);
  if (format == LowStorageScheme::Format::williamson) {
    s.A = parse_list(doc, "a");
    s.B = parse_list(doc, "b");
  } else {
    s.a_sub = parse_list(doc, "a");
    s.b = parse_list(doc, "b");
  }
  validate(s);
  return s;
}

ButcherTableau parse_butcher(const json& doc, std::string name) {
  ButcherTableau t;
  t.name = std::move(name);
  t.order = parse_int(doc, "p", 0);
  t.b = parse_list(doc, "b");
  t.stages = t.b.size();
  if (!doc.contains("A") || !doc.at("A").is_array()) throw ParseError("missing field 'A' (array of rows)");
  const json& rows = doc.at("A");
  if (rows.size() != t.stages) throw ParseError("field 'A': expected " + std::to_string(t.stages) + " rows");
  t.A.assign(t.stages * t.stages, 0.0);
  for (std::size_t i = 0; i < t.stages; ++i) {
    const json& row = rows[i];
    if (!row.is_array() || row.size() > t.stages)
      throw ParseError("field 'A[" + std::to_string(i) + "]': expected at most " + std::to_string(t.stages) + " entries");
    for (std::size_t j = 0; j < row.size(); ++j)
      t.a(i, j) = parse_entry(row[j], "A[" + std::to_string(i) + "][" + std::to_string(j) + "]");
  }
  if (doc.contains("b_hat")) t.b_hat = parse_list(doc, "b_hat");
  t.c = parse_list(doc, "c", false);
  if (t.c.empty()) {
    t.c.assign(t.stages, 0.0);
    for (std::size_t i = 0; i < t.stages; ++i)
      for (std::size_t j = 0; j < i; ++j) t.c[i] += t.a(i, j);
  }
  validate(t);
  return t;
}

}  // namespace

SchemeFileContents parse_scheme_json(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError("line " + std::to_string(line_of(text, e.byte == 0 ? 0 : e.byte - 1)) + ": " + e.what());
  }
  if (!doc.is_object()) throw ParseError("scheme file must contain a JSON object");
  if (!doc.contains("kind") || !doc.at("kind").is_string()) throw ParseError("missing field 'kind'");
  const auto kind = doc.at("kind").get<std::string>();
  std::string name = "user";
  if (doc.contains("name")) {
    if (!doc.at("name").is_string()) throw ParseError("field 'name': expected a string");
    name = doc.at("name").get<std::string>();
  }
  if (kind == "splitting") return parse_splitting(doc, std::move(name));
  if (kind == "williamson") return parse_low_storage(doc, std::move(name), LowStorageScheme::Format::williamson);
  if (kind == "vdh") return parse_low_storage(doc, std::move(name), LowStorageScheme::Format::vdh);
  if (kind == "butcher") return parse_butcher(doc, std::move(name));
  throw ParseError("field 'kind': unknown value '" + kind + "'");
}

SchemeFileContents load_scheme_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open scheme file '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  try {
    return parse_scheme_json(ss.str());
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

std::string to_json(const SplittingScheme& scheme) {
  json doc = {{"kind", "splitting"},
              {"name", scheme.name},
              {"a", list(scheme.a)},
              {"b", list(scheme.b)},
              {"p", scheme.p_component},
              {"q", scheme.q_averaged},
              {"symmetric", scheme.symmetric}};
  return doc.dump(2);
}

std::string to_json(const LowStorageScheme& scheme) {
  const bool w = scheme.format == LowStorageScheme::Format::williamson;
  json doc = {{"kind", w ? "williamson" : "vdh"},
              {"name", scheme.name},
              {"a", list(w ? scheme.A : scheme.a_sub)},
              {"b", list(w ? scheme.B : scheme.b)},
              {"p", scheme.order}};
  return doc.dump(2);
}

std::string to_json(const ButcherTableau& t) {
  json rows = json::array();
  for (std::size_t i = 0; i < t.stages; ++i) {
    json row = json::array();
    for (std::size_t j = 0; j < i; ++j) row.push_back(entry(t.a(i, j)));
    rows.push_back(row);
  }
  json doc = {{"kind", "butcher"}, {"name", t.name}, {"A", rows}, {"b", list(t.b)}, {"c", list(t.c)}, {"p", t.order}};
  if (t.b_hat) doc["b_hat"] = list(*t.b_hat);
  return doc.dump(2);
}

}  // namespace dsplit
