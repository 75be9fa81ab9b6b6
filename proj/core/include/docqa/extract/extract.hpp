#pragma once

#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "docqa/corpus/types.hpp"
#include "docqa/extract/geometry.hpp"

namespace docqa::extract {

// Page-level glyph statistics driving line grouping and word spacing.
struct GlyphMetrics {
  double median_height = 0;
  double median_width = 0;
};

// Medians over the non-whitespace glyphs of one page.
GlyphMetrics page_glyph_metrics(std::span<const CharBox> chars, int page_index);

struct AssemblyParams {
  double region_inflation = 1.0;  // points added on every side of a region
  double line_tolerance = 0.40;   // fraction of median glyph height
  double word_gap = 0.33;         // fraction of median glyph width
};

struct TextLine {
  std::vector<CharBox> chars;  // left to right
  double baseline_y = 0;
  double x0 = 0, y0 = 0, x1 = 0, y1 = 0;
};

// Groups glyphs into lines by baseline, sorted top to bottom.
std::vector<TextLine> group_lines(std::vector<CharBox> chars, const GlyphMetrics& metrics,
                                  const AssemblyParams& params = {});

// Text of the glyphs whose box center lies inside `region` (inflated by
// params.region_inflation), in reading order. Glyph statistics come from all
// of `chars` on the region's page, not only the contained ones.
std::string clip_text_to_region(std::span<const CharBox> chars, const RegionBox& region,
                                const AssemblyParams& params = {});

corpus::PassageCategory passage_category_for(RegionCategory c);

// One passage per kept region, ordered by (page, column, y0). Near-duplicate
// regions of the same category (IoU > 0.9) collapse onto the higher score.
// Regions on pages listed in `pages` are clamped to the page bounds; the
// list also fixes each page's column split.
std::vector<corpus::Passage> assemble_passages(std::span<const RegionBox> regions,
                                               std::span<const CharBox> chars,
                                               const std::set<RegionCategory>& keep,
                                               std::span<const PageSize> pages = {},
                                               const AssemblyParams& params = {});

std::vector<RegionBox> deduplicate_regions(std::span<const RegionBox> regions,
                                           double iou_threshold = 0.9);

// Offline stand-in for the layout detector: one paragraph region per block
// of lines, blocks separated by baseline gaps wider than 1.5x the body line
// pitch (lower-quartile gap, at least one glyph height).
std::vector<RegionBox> fallback_regions(std::span<const CharBox> chars,
                                        const AssemblyParams& params = {});

struct ExtractionScore {
  double precision = 0;
  double recall = 0;
  double f1 = 0;
  RegionCategory category = RegionCategory::paragraph;
};

ExtractionScore extraction_score(std::string_view extracted, std::string_view gold,
                                 RegionCategory category = RegionCategory::paragraph);

// Per-category scores over token multisets pooled across a whole document.
std::map<corpus::PassageCategory, ExtractionScore> pooled_extraction_scores(
    std::span<const corpus::Passage> extracted, std::span<const corpus::Passage> gold);

}  // namespace docqa::extract
