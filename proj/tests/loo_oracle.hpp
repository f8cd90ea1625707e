#pragma once

#include <optional>
#include <string>
#include <vector>

/* Brute-force reference predictor, deliberately independent of the engine:
 * no graph, no subnets — just co-occurrence counts scanned out of flat record
 * tables.  Inputs are numeric values pre-scaled to integers (4.9 -> 49 at one
 * decimal place), the target is a class label.  Assumes the default weight
 * law 1.0 / 0.25 / floor 0, counted here in exact quarter units. */
namespace loo_oracle {

struct Dataset {
  int attribute_count = 0;
  std::vector<std::vector<long long>> rows;  // rows[r][a], scaled inputs
  std::vector<std::string> labels;           // rows.size() labels
};

/* Predict the label for `inputs` from `train`; empty optional when no
 * attribute can gather evidence. */
std::optional<std::string> predict(const Dataset& train,
                                   const std::vector<long long>& inputs);

/* One prediction per row, each trained on all other rows. */
std::vector<std::optional<std::string>> leave_one_out(const Dataset& data);

}  // namespace loo_oracle
