#include "docqa/metrics/f1_kernel.hpp"

#include <algorithm>
#include <unordered_map>

namespace docqa::metrics {

PrecisionRecall f1_from_counts(std::size_t overlap, std::size_t predicted, std::size_t gold) {
  if (predicted == 0 && gold == 0) return {1.0, 1.0, 1.0};
  if (predicted == 0 || gold == 0) return {};
  PrecisionRecall r;
  r.precision = static_cast<double>(overlap) / static_cast<double>(predicted);
  r.recall = static_cast<double>(overlap) / static_cast<double>(gold);
  const double denom = r.precision + r.recall;
  r.f1 = denom > 0 ? 2 * r.precision * r.recall / denom : 0.0;
  return r;
}

PrecisionRecall token_prf(const std::vector<std::string>& predicted,
                          const std::vector<std::string>& gold) {
  std::unordered_map<std::string_view, std::size_t> counts;
  for (const auto& t : gold) ++counts[t];
  std::size_t overlap = 0;
  for (const auto& t : predicted) {
    auto it = counts.find(t);
    if (it != counts.end() && it->second > 0) {
      --it->second;
      ++overlap;
    }
  }
  return f1_from_counts(overlap, predicted.size(), gold.size());
}

PrecisionRecall set_prf(const std::set<std::string>& predicted, const std::set<std::string>& gold) {
  std::size_t overlap = 0;
  for (const auto& p : predicted) overlap += gold.count(p);
  return f1_from_counts(overlap, predicted.size(), gold.size());
}

}  // namespace docqa::metrics
