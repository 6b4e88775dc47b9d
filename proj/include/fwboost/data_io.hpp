#ifndef FWBOOST_DATA_IO_HPP_
#define FWBOOST_DATA_IO_HPP_

#include <string>
#include <vector>

#include "fwboost/ensemble.hpp"
#include "fwboost/types.hpp"

namespace fwboost {

/// Reads a CSV with a header row, numeric cells and the target in the last
/// column. Targets contained in {-1,+1} (or {0,1}, remapped to -1/+1) make a
/// classification task; anything else is regression. Errors name the 1-based
/// data row and column of the offending cell.
Dataset load_csv(const std::string& path);

void save_csv(const Dataset& data, const std::string& path);

/// Atoms file: one base hypothesis per line as `feature,threshold,left,right`
/// with |left|, |right| <= 1. Blank lines and lines starting with '#' are
/// skipped.
std::vector<Hypothesis> load_atoms(const std::string& path);

void save_model(const Ensemble& ensemble, Task task, const std::string& path);

struct LoadedModel {
  Ensemble ensemble;
  Task task = Task::kRegression;
};
LoadedModel load_model(const std::string& path);

}  // namespace fwboost

#endif  // FWBOOST_DATA_IO_HPP_
