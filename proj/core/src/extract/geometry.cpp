#include "docqa/extract/geometry.hpp"

#include <algorithm>

namespace docqa::extract {

std::string_view to_string(RegionCategory c) {
  switch (c) {
    case RegionCategory::paragraph: return "paragraph";
    case RegionCategory::table: return "table";
    case RegionCategory::caption: return "caption";
    case RegionCategory::title: return "title";
    case RegionCategory::list: return "list";
    case RegionCategory::other: return "other";
  }
  return "other";
}

RegionCategory region_category_from_string(std::string_view s) {
  if (s == "paragraph" || s == "text") return RegionCategory::paragraph;
  if (s == "table") return RegionCategory::table;
  if (s == "caption") return RegionCategory::caption;
  if (s == "title") return RegionCategory::title;
  if (s == "list") return RegionCategory::list;
  return RegionCategory::other;
}

double intersection_over_union(const RegionBox& a, const RegionBox& b) {
  if (a.page_index != b.page_index) return 0.0;
  const double ix = std::max(0.0, std::min(a.x1, b.x1) - std::max(a.x0, b.x0));
  const double iy = std::max(0.0, std::min(a.y1, b.y1) - std::max(a.y0, b.y0));
  const double inter = ix * iy;
  const double uni = a.area() + b.area() - inter;
  return uni > 0 ? inter / uni : 0.0;
}

RegionBox clamp_to_page(RegionBox r, const PageSize& page) {
  r.x0 = std::clamp(r.x0, 0.0, page.width);
  r.x1 = std::clamp(r.x1, 0.0, page.width);
  r.y0 = std::clamp(r.y0, 0.0, page.height);
  r.y1 = std::clamp(r.y1, 0.0, page.height);
  r.detector_score = std::clamp(r.detector_score, 0.0, 1.0);
  return r;
}

}  // namespace docqa::extract
