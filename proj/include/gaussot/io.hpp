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

#pragma once

#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "gaussot/barycenter.hpp"
#include "gaussot/divergence.hpp"
#include "gaussot/gp.hpp"

namespace gaussot::io {

// ---------------------------------------------------------------------------
// Deterministic JSON output.  Doubles are printed with %.17g so every value
// round-trips to the identical IEEE-754 double; key order is insertion order,
// making byte-identical output a function of the inputs alone.
// ---------------------------------------------------------------------------
class JsonValue {
 public:
  static JsonValue number(double v);
  static JsonValue integer(long long v);
  static JsonValue boolean(bool v);
  static JsonValue string(std::string v);
  static JsonValue array();
  static JsonValue object();
  static JsonValue vector(const Vector& v);
  static JsonValue matrix(const Matrix& m);

  JsonValue& push(JsonValue v);                          // arrays
  JsonValue& set(const std::string& key, JsonValue v);   // objects

  std::string dump(int indent = 2) const;

 private:
  enum class Tag { number, integer, boolean, string, array, object };
  Tag tag_ = Tag::object;
  double num_ = 0.0;
  long long int_ = 0;
  bool bool_ = false;
  std::string str_;
  std::vector<JsonValue> items_;
  std::vector<std::pair<std::string, JsonValue>> fields_;

  void write(std::string& out, int indent, int depth) const;
};

/// %.17g with non-finite values quoted ("Infinity", "-Infinity", "NaN").
std::string format_double(double v);

// ---------------------------------------------------------------------------
// CSV: row-major, comma-separated, no header.
// ---------------------------------------------------------------------------
Matrix read_csv_matrix(const std::string& path);
void write_csv_matrix(const std::string& path, const Matrix& m);

// ---------------------------------------------------------------------------
// JSON inputs.  Schema violations throw SchemaError.
// ---------------------------------------------------------------------------
GaussianMeasure read_measure(const std::string& path);
EntropicPlan read_plan(const std::string& path);
/// Reads weights + measures; eps/tol/max_iter/damping come from the caller.
BarycenterProblem read_barycenter_problem(const std::string& path);
GpSpec read_gp_spec(const std::string& path);

JsonValue measure_json(const GaussianMeasure& mu);
JsonValue plan_json(const EntropicPlan& plan);
JsonValue report_json(const DivergenceReport& report, bool full);
JsonValue barycenter_json(const BarycenterResult& result);

}  // namespace gaussot::io
