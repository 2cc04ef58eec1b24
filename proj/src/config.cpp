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

#include "mfctl/config.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "mfctl/rng.hpp"

namespace mfctl {

ModelInstance make_model(const Eigen::MatrixXd &rates,
                         const Eigen::VectorXd &utility,
                         std::vector<std::string> labels) {
  ModelInstance model{validate_generator(rates, std::move(labels)), {}, {}};
  model.pi = stationary_distribution(model.gen);
  model.util = make_utility(utility, model.pi);
  return model;
}

namespace {

ModelInstance parse_json_model(const std::string &text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception &e) {
    throw input_error(std::string("ConfigParse: ") + e.what());
  }

  std::vector<std::string> labels;
  if (doc.contains("states"))
    for (const auto &s : doc.at("states"))
      labels.push_back(s.get<std::string>());

  int d = static_cast<int>(labels.size());
  Eigen::MatrixXd rates;
  if (doc.contains("rates")) {
    const auto &rows = doc.at("rates");
    if (!rows.is_array() || rows.empty() || !rows[0].is_array())
      throw input_error("ConfigParse: 'rates' must be a list of rows");
    d = static_cast<int>(rows.size());
    rates.resize(d, d);
    for (int i = 0; i < d; ++i) {
      if (static_cast<int>(rows[i].size()) != d)
        throw input_error("ConfigParse: 'rates' row " + std::to_string(i) +
                          " has wrong length");
      for (int j = 0; j < d; ++j)
        rates(i, j) = rows[i][j].get<double>();
    }
  } else if (doc.contains("rates_sparse")) {
    if (d == 0)
      throw input_error(
          "ConfigParse: sparse rates require 'states' for the dimension");
    rates = Eigen::MatrixXd::Zero(d, d);
    for (const auto &triplet : doc.at("rates_sparse")) {
      if (!triplet.is_array() || triplet.size() != 3)
        throw input_error("ConfigParse: sparse entries are [i, j, rate]");
      const int i = triplet[0].get<int>();
      const int j = triplet[1].get<int>();
      if (i < 0 || i >= d || j < 0 || j >= d || i == j)
        throw input_error("ConfigParse: bad sparse index (" +
                          std::to_string(i) + "," + std::to_string(j) + ")");
      rates(i, j) = triplet[2].get<double>();
    }
    for (int i = 0; i < d; ++i)
      rates(i, i) = -rates.row(i).sum();
  } else {
    throw input_error("ConfigParse: missing 'rates' or 'rates_sparse'");
  }

  if (!doc.contains("utility"))
    throw input_error("ConfigParse: missing 'utility'");
  const auto &u = doc.at("utility");
  if (static_cast<int>(u.size()) != d)
    throw input_error("ConfigParse: 'utility' length does not match");
  Eigen::VectorXd utility(d);
  for (int i = 0; i < d; ++i)
    utility(i) = u[i].get<double>();

  return make_model(rates, utility, std::move(labels));
}

std::vector<std::string> tokens(const std::string &line) {
  std::stringstream ss(line);
  std::vector<std::string> out;
  std::string tok;
  while (ss >> tok)
    out.push_back(tok);
  return out;
}

double parse_number(const std::string &tok, int line_no) {
  try {
    std::size_t used = 0;
    const double v = std::stod(tok, &used);
    if (used != tok.size())
      throw std::invalid_argument(tok);
    return v;
  } catch (const std::exception &) {
    throw input_error("ConfigParse: line " + std::to_string(line_no) +
                      ": bad number '" + tok + "'");
  }
}

ModelInstance parse_kv_model(const std::string &text) {
  std::vector<std::string> labels;
  std::vector<double> utility;
  std::vector<std::vector<double>> dense_rows;
  std::vector<std::tuple<int, int, double>> triplets;
  bool in_rates = false;

  std::istringstream stream(text);
  std::string raw;
  int line_no = 0;
  while (std::getline(stream, raw)) {
    ++line_no;
    const auto hash = raw.find('#');
    std::string line = hash == std::string::npos ? raw : raw.substr(0, hash);
    auto toks = tokens(line);
    if (toks.empty())
      continue;

    std::string key = toks[0];
    if (!key.empty() && key.back() == ':')
      key.pop_back();

    if (key == "states") {
      labels.assign(toks.begin() + 1, toks.end());
      in_rates = false;
    } else if (key == "utility") {
      for (std::size_t i = 1; i < toks.size(); ++i)
        utility.push_back(parse_number(toks[i], line_no));
      in_rates = false;
    } else if (key == "rates") {
      in_rates = true;
      for (std::size_t i = 1; i < toks.size(); ++i)
        throw input_error("ConfigParse: line " + std::to_string(line_no) +
                          ": 'rates' takes its rows on following lines");
    } else if (key == "rate") {
      if (toks.size() != 4)
        throw input_error("ConfigParse: line " + std::to_string(line_no) +
                          ": want 'rate i j value'");
      triplets.emplace_back(static_cast<int>(parse_number(toks[1], line_no)),
                            static_cast<int>(parse_number(toks[2], line_no)),
                            parse_number(toks[3], line_no));
      in_rates = false;
    } else if (in_rates) {
      std::vector<double> row;
      for (const auto &tok : toks)
        row.push_back(parse_number(tok, line_no));
      dense_rows.push_back(std::move(row));
    } else {
      throw input_error("ConfigParse: line " + std::to_string(line_no) +
                        ": unknown key '" + key + "'");
    }
  }

  int d = 0;
  Eigen::MatrixXd rates;
  if (!dense_rows.empty()) {
    d = static_cast<int>(dense_rows.size());
    rates.resize(d, d);
    for (int i = 0; i < d; ++i) {
      if (static_cast<int>(dense_rows[i].size()) != d)
        throw input_error("ConfigParse: rates matrix is not square");
      for (int j = 0; j < d; ++j)
        rates(i, j) = dense_rows[i][j];
    }
  } else if (!triplets.empty()) {
    d = static_cast<int>(labels.empty() ? utility.size() : labels.size());
    if (d == 0)
      throw input_error(
          "ConfigParse: sparse rates require 'states' or 'utility' first");
    rates = Eigen::MatrixXd::Zero(d, d);
    for (const auto &[i, j, r] : triplets) {
      if (i < 0 || i >= d || j < 0 || j >= d || i == j)
        throw input_error("ConfigParse: bad sparse index (" +
                          std::to_string(i) + "," + std::to_string(j) + ")");
      rates(i, j) = r;
    }
    for (int i = 0; i < d; ++i)
      rates(i, i) = -rates.row(i).sum();
  } else {
    throw input_error("ConfigParse: no rates given");
  }

  if (static_cast<int>(utility.size()) != d)
    throw input_error("ConfigParse: 'utility' length does not match");
  Eigen::VectorXd u(d);
  for (int i = 0; i < d; ++i)
    u(i) = utility[i];
  return make_model(rates, u, std::move(labels));
}

} // namespace

ModelInstance parse_model_config(const std::string &text) {
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first == std::string::npos)
    throw input_error("ConfigParse: empty config");
  if (text[first] == '{')
    return parse_json_model(text);
  return parse_kv_model(text);
}

ModelInstance load_model_config(const std::string &path) {
  std::ifstream in(path);
  if (!in)
    throw input_error("cannot open model config '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_model_config(buffer.str());
}

ModelInstance random_reversible_model(int dim, std::uint64_t seed,
                                      double edge_density) {
  if (dim < 2)
    throw input_error("need at least two states");
  Rng rng(seed, 0x5eedULL);
  Eigen::VectorXd pi(dim);
  for (int i = 0; i < dim; ++i)
    pi(i) = rng.uniform(0.5, 1.5);
  pi /= pi.sum();
  GeneratorMatrix gen =
      random_reversible_generator(pi, splitmix64(seed) ^ 1, edge_density);
  Eigen::VectorXd utility(dim);
  for (int i = 0; i < dim; ++i)
    utility(i) = rng.uniform(-1.0, 1.0);
  ModelInstance model{std::move(gen), {}, {}};
  model.pi = stationary_distribution(model.gen);
  model.util = make_utility(utility, model.pi);
  return model;
}

struct CsvWriter::Impl {
  std::ofstream out;
  std::size_t columns = 0;
  std::string path;
};

CsvWriter::CsvWriter(const std::string &path,
                     const std::vector<std::string> &header)
    : impl_(new Impl) {
  impl_->out.open(path);
  impl_->path = path;
  if (!impl_->out) {
    delete impl_;
    throw input_error("cannot open '" + path + "' for writing");
  }
  impl_->columns = header.size();
  for (std::size_t i = 0; i < header.size(); ++i)
    impl_->out << (i ? "," : "") << header[i];
  impl_->out << "\n";
}

void CsvWriter::row(const std::vector<double> &values) {
  if (values.size() != impl_->columns)
    throw internal_error("CSV row width mismatch in " + impl_->path);
  for (std::size_t i = 0; i < values.size(); ++i)
    impl_->out << (i ? "," : "") << format_full_precision(values[i]);
  impl_->out << "\n";
}

CsvWriter::~CsvWriter() { delete impl_; }

std::string format_full_precision(double value) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

std::vector<std::vector<double>> read_csv(const std::string &path) {
  std::ifstream in(path);
  if (!in)
    throw input_error("cannot open '" + path + "'");
  std::vector<std::vector<double>> rows;
  std::string line;
  bool header = true;
  while (std::getline(in, line)) {
    if (header) {
      header = false;
      continue;
    }
    if (line.empty())
      continue;
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ','))
      row.push_back(std::stod(cell));
    rows.push_back(std::move(row));
  }
  return rows;
}

} // namespace mfctl
