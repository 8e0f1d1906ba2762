// Copyright 2026 The gaussot authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "gaussot/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace gaussot::io {

namespace {

using nlohmann::json;

json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail("SchemaError", "cannot open '" + path + "'");
  json doc;
  try {
    in >> doc;
  } catch (const json::exception& e) {
    fail("SchemaError", "invalid JSON in '" + path + "': " + e.what());
  }
  return doc;
}

Vector parse_vector(const json& node, const std::string& what) {
  if (!node.is_array()) fail("SchemaError", what + " must be an array of numbers");
  Vector v(static_cast<Index>(node.size()));
  for (std::size_t i = 0; i < node.size(); ++i) {
    if (!node[i].is_number()) fail("SchemaError", what + " must contain only numbers");
    v(static_cast<Index>(i)) = node[i].get<double>();
  }
  return v;
}

Matrix parse_matrix(const json& node, const std::string& what) {
  if (!node.is_array() || node.empty())
    fail("SchemaError", what + " must be a non-empty array of arrays");
  const std::size_t rows = node.size();
  std::size_t cols = 0;
  if (!node[0].is_array()) fail("SchemaError", what + " must be an array of arrays");
  cols = node[0].size();
  if (cols == 0) fail("SchemaError", what + " rows must be non-empty");
  Matrix m(static_cast<Index>(rows), static_cast<Index>(cols));
  for (std::size_t i = 0; i < rows; ++i) {
    if (!node[i].is_array() || node[i].size() != cols)
      fail("SchemaError", what + " rows have inconsistent lengths");
    for (std::size_t j = 0; j < cols; ++j) {
      if (!node[i][j].is_number())
        fail("SchemaError", what + " must contain only numbers");
      m(static_cast<Index>(i), static_cast<Index>(j)) = node[i][j].get<double>();
    }
  }
  return m;
}

GaussianMeasure parse_measure(const json& node, const std::string& what) {
  if (!node.is_object() || !node.contains("mean") || !node.contains("cov"))
    fail("SchemaError", what + " must be an object with 'mean' and 'cov'");
  Vector mean = parse_vector(node["mean"], what + ".mean");
  Matrix cov = parse_matrix(node["cov"], what + ".cov");
  if (cov.rows() != cov.cols())
    fail("SchemaError", what + ".cov must be square, got " + std::to_string(cov.rows()) +
                            "x" + std::to_string(cov.cols()));
  if (cov.rows() != mean.size())
    fail("SchemaError", what + ".cov size does not match the mean length");
  return GaussianMeasure::fromMoments(std::move(mean), SymMatrix(cov));
}

}  // namespace

std::string format_double(double v) {
  if (std::isnan(v)) return "\"NaN\"";
  if (std::isinf(v)) return v > 0 ? "\"Infinity\"" : "\"-Infinity\"";
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

JsonValue JsonValue::number(double v) {
  JsonValue j;
  j.tag_ = Tag::number;
  j.num_ = v;
  return j;
}

JsonValue JsonValue::integer(long long v) {
  JsonValue j;
  j.tag_ = Tag::integer;
  j.int_ = v;
  return j;
}

JsonValue JsonValue::boolean(bool v) {
  JsonValue j;
  j.tag_ = Tag::boolean;
  j.bool_ = v;
  return j;
}

JsonValue JsonValue::string(std::string v) {
  JsonValue j;
  j.tag_ = Tag::string;
  j.str_ = std::move(v);
  return j;
}

JsonValue JsonValue::array() {
  JsonValue j;
  j.tag_ = Tag::array;
  return j;
}

JsonValue JsonValue::object() {
  JsonValue j;
  j.tag_ = Tag::object;
  return j;
}

JsonValue JsonValue::vector(const Vector& v) {
  JsonValue arr = array();
  for (Index i = 0; i < v.size(); ++i) arr.push(number(v(i)));
  return arr;
}

JsonValue JsonValue::matrix(const Matrix& m) {
  JsonValue rows = array();
  for (Index i = 0; i < m.rows(); ++i) {
    JsonValue row = array();
    for (Index j = 0; j < m.cols(); ++j) row.push(number(m(i, j)));
    rows.push(std::move(row));
  }
  return rows;
}

JsonValue& JsonValue::push(JsonValue v) {
  items_.push_back(std::move(v));
  return *this;
}

JsonValue& JsonValue::set(const std::string& key, JsonValue v) {
  fields_.emplace_back(key, std::move(v));
  return *this;
}

void JsonValue::write(std::string& out, int indent, int depth) const {
  const auto pad = [&](int d) {
    if (indent > 0) {
      out.push_back('\n');
      out.append(static_cast<std::size_t>(indent * d), ' ');
    }
  };
  switch (tag_) {
    case Tag::number: out += format_double(num_); return;
    case Tag::integer: out += std::to_string(int_); return;
    case Tag::boolean: out += bool_ ? "true" : "false"; return;
    case Tag::string: {
      out.push_back('"');
      for (char c : str_) {
        const auto uc = static_cast<unsigned char>(c);
        if (c == '"' || c == '\\') {
          out.push_back('\\');
          out.push_back(c);
        } else if (uc < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof(buf), "\\u%04x", uc);
          out += buf;
        } else {
          out.push_back(c);
        }
      }
      out.push_back('"');
      return;
    }
    case Tag::array: {
      out.push_back('[');
      for (std::size_t i = 0; i < items_.size(); ++i) {
        if (i) out.push_back(',');
        pad(depth + 1);
        items_[i].write(out, indent, depth + 1);
      }
      if (!items_.empty()) pad(depth);
      out.push_back(']');
      return;
    }
    case Tag::object: {
      out.push_back('{');
      for (std::size_t i = 0; i < fields_.size(); ++i) {
        if (i) out.push_back(',');
        pad(depth + 1);
        out.push_back('"');
        out += fields_[i].first;
        out += "\": ";
        fields_[i].second.write(out, indent, depth + 1);
      }
      if (!fields_.empty()) pad(depth);
      out.push_back('}');
      return;
    }
  }
}

std::string JsonValue::dump(int indent) const {
  std::string out;
  write(out, indent, 0);
  out.push_back('\n');
  return out;
}

Matrix read_csv_matrix(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail("SchemaError", "cannot open '" + path + "'");
  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      try {
        row.push_back(std::stod(cell));
      } catch (const std::exception&) {
        fail("SchemaError", "non-numeric CSV cell '" + cell + "' in " + path);
      }
    }
    if (!rows.empty() && row.size() != rows.front().size())
      fail("SchemaError", "ragged CSV rows in " + path);
    rows.push_back(std::move(row));
  }
  if (rows.empty()) fail("SchemaError", "empty CSV file " + path);
  Matrix m(static_cast<Index>(rows.size()), static_cast<Index>(rows[0].size()));
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < rows[i].size(); ++j)
      m(static_cast<Index>(i), static_cast<Index>(j)) = rows[i][j];
  return m;
}

void write_csv_matrix(const std::string& path, const Matrix& m) {
  std::ofstream out(path);
  if (!out) fail("SchemaError", "cannot write '" + path + "'");
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index j = 0; j < m.cols(); ++j) {
      if (j) out << ',';
      char buf[40];
      std::snprintf(buf, sizeof(buf), "%.17g", m(i, j));
      out << buf;
    }
    out << '\n';
  }
}

GaussianMeasure read_measure(const std::string& path) {
  return parse_measure(load_json(path), path);
}

EntropicPlan read_plan(const std::string& path) {
  const json doc = load_json(path);
  for (const char* key :
       {"eps", "mean0", "mean1", "cov0", "cov1", "cross_cov", "pot_A", "pot_B", "pot_ab"})
    if (!doc.contains(key)) fail("SchemaError", std::string("plan is missing '") + key + "'");
  if (!doc["eps"].is_number() || !doc["pot_ab"].is_number())
    fail("SchemaError", "plan eps/pot_ab must be numbers");
  EntropicPlan plan{
      doc["eps"].get<double>(),
      parse_vector(doc["mean0"], "mean0"),
      parse_vector(doc["mean1"], "mean1"),
      psd_project(SymMatrix(parse_matrix(doc["cov0"], "cov0"))),
      psd_project(SymMatrix(parse_matrix(doc["cov1"], "cov1"))),
      parse_matrix(doc["cross_cov"], "cross_cov"),
      SymMatrix(parse_matrix(doc["pot_A"], "pot_A")),
      SymMatrix(parse_matrix(doc["pot_B"], "pot_B")),
      doc["pot_ab"].get<double>(),
  };
  if (!(plan.eps > 0.0)) fail("InvalidEpsilon", "plan eps must be > 0");
  return plan;
}

BarycenterProblem read_barycenter_problem(const std::string& path) {
  const json doc = load_json(path);
  if (!doc.is_object() || !doc.contains("weights") || !doc.contains("measures"))
    fail("SchemaError", "problem must be an object with 'weights' and 'measures'");
  BarycenterProblem problem;
  problem.weights = parse_vector(doc["weights"], "weights");
  if (!doc["measures"].is_array())
    fail("SchemaError", "'measures' must be an array");
  for (std::size_t i = 0; i < doc["measures"].size(); ++i)
    problem.measures.push_back(
        parse_measure(doc["measures"][i], "measures[" + std::to_string(i) + "]"));
  return problem;
}

GpSpec read_gp_spec(const std::string& path) {
  const json doc = load_json(path);
  if (!doc.is_object()) fail("SchemaError", "GP spec must be a JSON object");
  GpSpec spec;
  if (doc.contains("cov")) {
    spec.kind = GpSpec::Kind::sampled;
    spec.cov_sampled = parse_matrix(doc["cov"], "cov");
    if (spec.cov_sampled.rows() != spec.cov_sampled.cols())
      fail("SchemaError", "sampled GP covariance must be square");
  } else if (doc.contains("kernel")) {
    const std::string name = doc["kernel"].get<std::string>();
    if (name == "brownian") {
      spec.kind = GpSpec::Kind::brownian;
    } else if (name == "rbf") {
      spec.kind = GpSpec::Kind::rbf;
      if (doc.contains("gamma")) spec.gamma = doc["gamma"].get<double>();
      if (!(spec.gamma > 0.0)) fail("SchemaError", "rbf gamma must be > 0");
    } else if (name == "matern12") {
      spec.kind = GpSpec::Kind::matern12;
      if (doc.contains("rho")) spec.rho = doc["rho"].get<double>();
      if (!(spec.rho > 0.0)) fail("SchemaError", "matern12 rho must be > 0");
    } else {
      fail("SchemaError", "unknown GP kernel '" + name + "'");
    }
    if (doc.contains("variance")) {
      spec.variance = doc["variance"].get<double>();
      if (!(spec.variance > 0.0)) fail("SchemaError", "variance must be > 0");
    }
  } else {
    fail("SchemaError", "GP spec needs either 'kernel' or sampled 'cov'");
  }
  if (doc.contains("mean")) {
    if (doc["mean"].is_number())
      spec.mean_const = doc["mean"].get<double>();
    else
      spec.mean_sampled = parse_vector(doc["mean"], "mean");
  }
  return spec;
}

JsonValue measure_json(const GaussianMeasure& mu) {
  JsonValue obj = JsonValue::object();
  obj.set("mean", JsonValue::vector(mu.mean));
  obj.set("cov", JsonValue::matrix(mu.cov.toMatrix()));
  return obj;
}

JsonValue plan_json(const EntropicPlan& plan) {
  JsonValue obj = JsonValue::object();
  obj.set("eps", JsonValue::number(plan.eps));
  obj.set("mean0", JsonValue::vector(plan.mean0));
  obj.set("mean1", JsonValue::vector(plan.mean1));
  obj.set("cov0", JsonValue::matrix(plan.cov0.toMatrix()));
  obj.set("cov1", JsonValue::matrix(plan.cov1.toMatrix()));
  obj.set("cross_cov", JsonValue::matrix(plan.cross_cov));
  obj.set("pot_A", JsonValue::matrix(plan.pot_A.mat()));
  obj.set("pot_B", JsonValue::matrix(plan.pot_B.mat()));
  obj.set("pot_ab", JsonValue::number(plan.pot_ab));
  return obj;
}

JsonValue report_json(const DivergenceReport& report, bool full) {
  JsonValue obj = JsonValue::object();
  obj.set("value", JsonValue::number(report.value));
  if (full) {
    obj.set("mean_term", JsonValue::number(report.mean_term));
    obj.set("trace_terms", JsonValue::number(report.trace_terms));
    obj.set("logdet_term", JsonValue::number(report.logdet_term));
  }
  obj.set("eps", JsonValue::number(report.eps));
  return obj;
}

JsonValue barycenter_json(const BarycenterResult& result) {
  JsonValue obj = JsonValue::object();
  obj.set("mean", JsonValue::vector(result.mean));
  obj.set("cov", JsonValue::matrix(result.cov.toMatrix()));
  obj.set("iterations", JsonValue::integer(result.iterations));
  obj.set("residual", JsonValue::number(result.residual));
  obj.set("regime", JsonValue::string(to_string(result.regime)));
  obj.set("collapsed_directions", JsonValue::integer(result.collapsed_directions));
  return obj;
}

}  // namespace gaussot::io
