#pragma once

#include <optional>
#include <string>
#include <string_view>

namespace docqa::extract {

// One glyph as reported by the PDF character dump. Coordinates are in page
// points with the origin at the top-left corner, so y grows downwards.
struct CharBox {
  char32_t ch = U' ';
  double x0 = 0, y0 = 0, x1 = 0, y1 = 0;
  int page_index = 0;
  double baseline_y = 0;

  double center_x() const { return (x0 + x1) / 2; }
  double center_y() const { return (y0 + y1) / 2; }
  double width() const { return x1 - x0; }
  double height() const { return y1 - y0; }
  bool valid() const { return x0 < x1 && y0 < y1 && page_index >= 0; }
};

enum class RegionCategory { paragraph, table, caption, title, list, other };

std::string_view to_string(RegionCategory c);
// Unknown names map to `other`; detector label sets vary ("text", "figure", ...).
RegionCategory region_category_from_string(std::string_view s);

struct RegionBox {
  int page_index = 0;
  double x0 = 0, y0 = 0, x1 = 0, y1 = 0;
  RegionCategory category = RegionCategory::paragraph;
  double detector_score = 1.0;

  double width() const { return x1 - x0; }
  double height() const { return y1 - y0; }
  double area() const { return x1 > x0 && y1 > y0 ? width() * height() : 0.0; }
  bool contains(double x, double y, double inflate = 0.0) const {
    return x >= x0 - inflate && x <= x1 + inflate && y >= y0 - inflate && y <= y1 + inflate;
  }
  bool operator==(const RegionBox&) const = default;
};

double intersection_over_union(const RegionBox& a, const RegionBox& b);

struct PageSize {
  int page_index = 0;
  double width = 0;
  double height = 0;
};

// Clamp coordinates into [0,width]x[0,height] and the score into [0,1].
RegionBox clamp_to_page(RegionBox r, const PageSize& page);

}  // namespace docqa::extract
