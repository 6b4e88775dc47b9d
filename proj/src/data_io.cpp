#include "fwboost/data_io.hpp"

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace fwboost {

namespace {

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::stringstream ss(line);
  while (std::getline(ss, cell, ',')) cells.push_back(cell);
  if (!line.empty() && line.back() == ',') cells.push_back("");
  return cells;
}

double parse_cell(const std::string& cell, int row, int column) {
  const char* begin = cell.c_str();
  char* end = nullptr;
  errno = 0;
  const double value = std::strtod(begin, &end);
  // Trailing whitespace is fine; anything else is a bad cell.
  while (end && *end != '\0' && std::isspace(static_cast<unsigned char>(*end))) ++end;
  if (end == begin || (end && *end != '\0') || errno == ERANGE || !std::isfinite(value))
    throw std::runtime_error("row " + std::to_string(row) + ", column " + std::to_string(column) +
                             ": non-numeric cell '" + cell + "'");
  return value;
}

std::string trim(const std::string& s) {
  size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

const char* kind_name(HypothesisKind kind) {
  switch (kind) {
    case HypothesisKind::kClassificationStump: return "classification-stump";
    case HypothesisKind::kRegressionStump: return "regression-stump";
    case HypothesisKind::kConstant: return "constant";
    case HypothesisKind::kAtom: return "atom";
  }
  return "?";
}

HypothesisKind kind_from_name(const std::string& name) {
  if (name == "classification-stump") return HypothesisKind::kClassificationStump;
  if (name == "regression-stump") return HypothesisKind::kRegressionStump;
  if (name == "constant") return HypothesisKind::kConstant;
  if (name == "atom") return HypothesisKind::kAtom;
  throw std::runtime_error("unknown hypothesis kind '" + name + "'");
}

}  // namespace

Dataset load_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("empty file '" + path + "'");
  const size_t columns = split_line(line).size();
  if (columns < 2) throw std::runtime_error("need at least one feature column and a target column");

  std::vector<std::vector<double>> rows;
  int row_index = 0;
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    ++row_index;
    const std::vector<std::string> cells = split_line(line);
    if (cells.size() != columns)
      throw std::runtime_error("row " + std::to_string(row_index) + ": expected " +
                               std::to_string(columns) + " cells, got " +
                               std::to_string(cells.size()));
    std::vector<double> parsed(columns);
    for (size_t c = 0; c < columns; ++c)
      parsed[c] = parse_cell(cells[c], row_index, static_cast<int>(c) + 1);
    rows.push_back(std::move(parsed));
  }
  if (rows.empty()) throw std::runtime_error("no data rows in '" + path + "'");

  Dataset data;
  const Index m = static_cast<Index>(rows.size());
  const Index d = static_cast<Index>(columns) - 1;
  data.features.resize(m, d);
  data.targets.resize(m);
  for (Index i = 0; i < m; ++i) {
    for (Index j = 0; j < d; ++j) data.features(i, j) = rows[static_cast<size_t>(i)][static_cast<size_t>(j)];
    data.targets(i) = rows[static_cast<size_t>(i)][static_cast<size_t>(d)];
  }

  bool sign_targets = true, binary_targets = true;
  for (Index i = 0; i < m; ++i) {
    const double y = data.targets(i);
    if (y != -1.0 && y != 1.0) sign_targets = false;
    if (y != 0.0 && y != 1.0) binary_targets = false;
  }
  if (sign_targets) {
    data.task = Task::kClassification;
  } else if (binary_targets) {
    data.task = Task::kClassification;
    for (Index i = 0; i < m; ++i) data.targets(i) = data.targets(i) == 1.0 ? 1.0 : -1.0;
  } else {
    data.task = Task::kRegression;
  }
  data.validate();
  return data;
}

void save_csv(const Dataset& data, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  for (Index j = 0; j < data.cols(); ++j) out << "x" << j << ",";
  out << "y\n";
  char buf[40];
  for (Index i = 0; i < data.rows(); ++i) {
    for (Index j = 0; j < data.cols(); ++j) {
      std::snprintf(buf, sizeof(buf), "%.17g", data.features(i, j));
      out << buf << ",";
    }
    std::snprintf(buf, sizeof(buf), "%.17g", data.targets(i));
    out << buf << "\n";
  }
}

std::vector<Hypothesis> load_atoms(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  std::vector<Hypothesis> atoms;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    const std::vector<std::string> cells = split_line(t);
    if (cells.size() != 4)
      throw std::runtime_error("atoms line " + std::to_string(line_no) +
                               ": expected feature,threshold,left,right");
    Hypothesis h;
    h.kind = HypothesisKind::kAtom;
    h.feature = static_cast<int>(parse_cell(cells[0], line_no, 1));
    h.threshold = parse_cell(cells[1], line_no, 2);
    h.left = parse_cell(cells[2], line_no, 3);
    h.right = parse_cell(cells[3], line_no, 4);
    if (h.feature < 0) throw std::runtime_error("atoms line " + std::to_string(line_no) +
                                                ": negative feature index");
    if (std::abs(h.left) > 1.0 || std::abs(h.right) > 1.0)
      throw std::runtime_error("atoms line " + std::to_string(line_no) +
                               ": outputs must be bounded by 1 in magnitude");
    atoms.push_back(h);
  }
  if (atoms.empty()) throw std::runtime_error("no atoms in '" + path + "'");
  return atoms;
}

void save_model(const Ensemble& ensemble, Task task, const std::string& path) {
  nlohmann::json doc;
  // JSON has no infinity: unconstrained (gradient-boosting) models store null.
  if (std::isfinite(ensemble.capacity()))
    doc["capacity"] = ensemble.capacity();
  else
    doc["capacity"] = nullptr;
  doc["task"] = task == Task::kClassification ? "classification" : "regression";
  nlohmann::json atoms = nlohmann::json::array();
  for (Index j = 0; j < ensemble.size(); ++j) {
    const Hypothesis& h = ensemble.atom(static_cast<int>(j));
    atoms.push_back({{"coefficient", ensemble.coefficient(static_cast<int>(j))},
                     {"kind", kind_name(h.kind)},
                     {"feature", h.feature},
                     {"threshold", std::isfinite(h.threshold) ? h.threshold : 0.0},
                     {"left", h.left},
                     {"right", h.right}});
  }
  doc["atoms"] = std::move(atoms);
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << doc.dump(2) << "\n";
}

LoadedModel load_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  nlohmann::json doc;
  in >> doc;
  LoadedModel out;
  out.task = doc.value("task", std::string("regression")) == "classification"
                 ? Task::kClassification
                 : Task::kRegression;
  const auto& cap = doc.at("capacity");
  out.ensemble =
      Ensemble(cap.is_null() ? std::numeric_limits<double>::infinity() : cap.get<double>());
  for (const auto& item : doc.at("atoms")) {
    Hypothesis h;
    h.kind = kind_from_name(item.at("kind").get<std::string>());
    h.feature = item.at("feature").get<int>();
    h.threshold = item.at("threshold").get<double>();
    h.left = item.at("left").get<double>();
    h.right = item.at("right").get<double>();
    out.ensemble.append(item.at("coefficient").get<double>(), h);
  }
  return out;
}

}  // namespace fwboost
