#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "docqa/extract/geometry.hpp"

namespace docqa::extract {

struct CharDump {
  std::vector<PageSize> pages;
  std::vector<CharBox> chars;

  int page_count() const;
};

// Character dump: JSON lines. A line with "ch" is a glyph
//   {"ch":"a","x0":..,"y0":..,"x1":..,"y1":..,"page":0,"baseline":..}
// and a line without it declares a page size
//   {"page":0,"width":612,"height":792}
CharDump parse_char_dump(std::string_view text, const std::string& origin = "<memory>");
CharDump read_char_dump(const std::filesystem::path& path);
std::string serialize_char_dump(const CharDump& dump);

// Sidecar: JSON array of {page, bbox:[x0,y0,x1,y1], category, score}.
std::vector<RegionBox> parse_region_sidecar(std::string_view text,
                                            const std::string& origin = "<memory>");
std::vector<RegionBox> read_region_sidecar(const std::filesystem::path& path);
std::string serialize_region_sidecar(const std::vector<RegionBox>& regions);

// Rejects regions that reference pages outside the dump or have degenerate
// boxes; clamps the rest to page bounds.
std::vector<RegionBox> validate_regions(std::vector<RegionBox> regions, const CharDump& dump);

// Runs `command <pdf> <out>` (command split on whitespace, no shell) and
// reads the dump it writes.
CharDump run_char_extractor(const std::string& command, const std::filesystem::path& pdf,
                            const std::filesystem::path& out);

}  // namespace docqa::extract
