/*
 * Copyright 2026 the mfctl authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef MFCTL_CONFIG_HPP
#define MFCTL_CONFIG_HPP

#include <string>
#include <vector>

#include "mfctl/markov.hpp"

namespace mfctl {

/// A nominal model instance: validated generator, its stationary law and
/// the centered utility.
struct ModelInstance {
  GeneratorMatrix gen;
  StationaryDistribution pi;
  UtilityFunction util;
};

ModelInstance make_model(const Eigen::MatrixXd &rates,
                         const Eigen::VectorXd &utility,
                         std::vector<std::string> labels = {});

/// Parses a model config. JSON (first non-space character '{') with fields
/// `states`, `rates` (row-major matrix) or `rates_sparse` (list of
/// [i, j, rate] triplets, 0-based, diagonal filled automatically), and
/// `utility`; or a minimal key-value table:
///
///   states: on off
///   utility: 0 1
///   rates:
///   -1 1
///   1 -1
///
/// with `rate i j value` lines as the sparse alternative.
ModelInstance parse_model_config(const std::string &text);

ModelInstance load_model_config(const std::string &path);

/// Deterministic random test instance: reversible generator plus a random
/// utility, both derived from `seed`.
ModelInstance random_reversible_model(int dim, std::uint64_t seed,
                                      double edge_density = 1.0);

/// CSV with a one-line header; all values printed with 17 significant
/// digits so re-reading reproduces them exactly.
class CsvWriter {
public:
  explicit CsvWriter(const std::string &path,
                     const std::vector<std::string> &header);
  void row(const std::vector<double> &values);
  ~CsvWriter();

  CsvWriter(const CsvWriter &) = delete;
  CsvWriter &operator=(const CsvWriter &) = delete;

private:
  struct Impl;
  Impl *impl_;
};

std::string format_full_precision(double value);

/// Reads back a numeric CSV (header skipped); used by round-trip checks.
std::vector<std::vector<double>> read_csv(const std::string &path);

} // namespace mfctl

#endif
