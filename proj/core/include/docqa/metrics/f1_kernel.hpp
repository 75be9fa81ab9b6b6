#pragma once

#include <cstddef>
#include <set>
#include <string>
#include <vector>

namespace docqa::metrics {

struct PrecisionRecall {
  double precision = 0;
  double recall = 0;
  double f1 = 0;
};

// Counts-based kernel shared by every F1 in the project. Both sides empty
// scores 1, exactly one side empty scores 0.
PrecisionRecall f1_from_counts(std::size_t overlap, std::size_t predicted, std::size_t gold);

// Multiset overlap between token lists.
PrecisionRecall token_prf(const std::vector<std::string>& predicted,
                          const std::vector<std::string>& gold);

PrecisionRecall set_prf(const std::set<std::string>& predicted, const std::set<std::string>& gold);

}  // namespace docqa::metrics
