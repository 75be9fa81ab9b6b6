#include "docqa/extract/extract.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "docqa/corpus/normalize.hpp"
#include "docqa/metrics/f1_kernel.hpp"
#include "utf8.hpp"

namespace docqa::extract {
namespace {

bool is_blank(char32_t c) {
  return c == U' ' || c == U'\t' || c == U'\n' || c == U'\r' || c == U'\f' || c == U'\v' ||
         c == 0xA0;
}

bool is_lower(char32_t c) {
  return (c >= U'a' && c <= U'z') || (c >= 0xDF && c <= 0xFF && c != 0xF7);
}

double median(std::vector<double> v) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : (v[n / 2 - 1] + v[n / 2]) / 2;
}

std::string line_text(const TextLine& line, double word_gap) {
  std::string s;
  const CharBox* prev = nullptr;
  for (const auto& c : line.chars) {
    if (prev && c.x0 - prev->x1 > word_gap) s.push_back(' ');
    detail::append_utf8(s, c.ch);
    prev = &c;
  }
  return s;
}

std::string assemble_lines(const std::vector<TextLine>& lines, double word_gap) {
  std::string out;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const std::string text = line_text(lines[i], word_gap);
    if (i > 0) {
      const bool hyphenated = !out.empty() && out.back() == '-' &&
                              !lines[i].chars.empty() && is_lower(lines[i].chars.front().ch);
      if (hyphenated)
        out.pop_back();
      else
        out.push_back('\n');
    }
    out += text;
  }
  return out;
}

int column_of(const RegionBox& r, double page_mid) { return r.x0 >= page_mid ? 1 : 0; }

}  // namespace

GlyphMetrics page_glyph_metrics(std::span<const CharBox> chars, int page_index) {
  std::vector<double> heights, widths;
  for (const auto& c : chars) {
    if (c.page_index != page_index || is_blank(c.ch) || !c.valid()) continue;
    heights.push_back(c.height());
    widths.push_back(c.width());
  }
  return {median(std::move(heights)), median(std::move(widths))};
}

std::vector<TextLine> group_lines(std::vector<CharBox> chars, const GlyphMetrics& metrics,
                                  const AssemblyParams& params) {
  std::erase_if(chars, [](const CharBox& c) { return is_blank(c.ch) || !c.valid(); });
  std::stable_sort(chars.begin(), chars.end(), [](const CharBox& a, const CharBox& b) {
    if (a.baseline_y != b.baseline_y) return a.baseline_y < b.baseline_y;
    return a.x0 < b.x0;
  });
  const double tol = params.line_tolerance * metrics.median_height;
  std::vector<TextLine> lines;
  for (const auto& c : chars) {
    if (lines.empty() || c.baseline_y - lines.back().baseline_y > tol) {
      lines.push_back(TextLine{{}, c.baseline_y, c.x0, c.y0, c.x1, c.y1});
    }
    auto& line = lines.back();
    line.chars.push_back(c);
    line.x0 = std::min(line.x0, c.x0);
    line.y0 = std::min(line.y0, c.y0);
    line.x1 = std::max(line.x1, c.x1);
    line.y1 = std::max(line.y1, c.y1);
  }
  for (auto& line : lines) {
    std::stable_sort(line.chars.begin(), line.chars.end(),
                     [](const CharBox& a, const CharBox& b) { return a.x0 < b.x0; });
  }
  return lines;
}

std::string clip_text_to_region(std::span<const CharBox> chars, const RegionBox& region,
                                const AssemblyParams& params) {
  const GlyphMetrics metrics = page_glyph_metrics(chars, region.page_index);
  std::vector<CharBox> inside;
  for (const auto& c : chars) {
    if (c.page_index != region.page_index) continue;
    if (region.contains(c.center_x(), c.center_y(), params.region_inflation)) inside.push_back(c);
  }
  const auto lines = group_lines(std::move(inside), metrics, params);
  return assemble_lines(lines, params.word_gap * metrics.median_width);
}

corpus::PassageCategory passage_category_for(RegionCategory c) {
  switch (c) {
    case RegionCategory::paragraph: return corpus::PassageCategory::paragraph;
    case RegionCategory::table: return corpus::PassageCategory::table;
    case RegionCategory::caption: return corpus::PassageCategory::caption;
    default: return corpus::PassageCategory::other;
  }
}

std::vector<RegionBox> deduplicate_regions(std::span<const RegionBox> regions,
                                           double iou_threshold) {
  std::vector<std::size_t> order(regions.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return regions[a].detector_score > regions[b].detector_score;
  });
  std::vector<bool> kept(regions.size(), false);
  std::vector<std::size_t> survivors;
  for (const std::size_t i : order) {
    const bool dup = std::any_of(survivors.begin(), survivors.end(), [&](std::size_t j) {
      return regions[j].category == regions[i].category &&
             intersection_over_union(regions[i], regions[j]) > iou_threshold;
    });
    if (!dup) {
      survivors.push_back(i);
      kept[i] = true;
    }
  }
  std::vector<RegionBox> out;
  for (std::size_t i = 0; i < regions.size(); ++i)
    if (kept[i]) out.push_back(regions[i]);
  return out;
}

std::vector<corpus::Passage> assemble_passages(std::span<const RegionBox> regions,
                                               std::span<const CharBox> chars,
                                               const std::set<RegionCategory>& keep,
                                               std::span<const PageSize> pages,
                                               const AssemblyParams& params) {
  std::map<int, PageSize> page_size;
  for (const auto& p : pages) page_size[p.page_index] = p;

  std::vector<RegionBox> clamped;
  clamped.reserve(regions.size());
  for (const auto& r : regions) {
    auto it = page_size.find(r.page_index);
    clamped.push_back(it != page_size.end() ? clamp_to_page(r, it->second) : r);
  }
  auto unique = deduplicate_regions(clamped);
  std::erase_if(unique, [&](const RegionBox& r) { return !keep.contains(r.category); });

  // Column split per page: half the page width when known, otherwise the
  // midpoint of the horizontal extent of that page's regions.
  std::map<int, std::pair<double, double>> extent;
  for (const auto& r : unique) {
    auto [it, fresh] = extent.try_emplace(r.page_index, r.x0, r.x1);
    if (!fresh) {
      it->second.first = std::min(it->second.first, r.x0);
      it->second.second = std::max(it->second.second, r.x1);
    }
  }
  std::map<int, double> mid;
  for (const auto& [page, e] : extent) {
    auto it = page_size.find(page);
    mid[page] = it != page_size.end() ? it->second.width / 2 : (e.first + e.second) / 2;
  }

  std::vector<std::size_t> order(unique.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const auto& ra = unique[a];
    const auto& rb = unique[b];
    if (ra.page_index != rb.page_index) return ra.page_index < rb.page_index;
    const int ca = column_of(ra, mid[ra.page_index]);
    const int cb = column_of(rb, mid[rb.page_index]);
    if (ca != cb) return ca < cb;
    if (ra.y0 != rb.y0) return ra.y0 < rb.y0;
    return ra.x0 < rb.x0;
  });

  std::vector<corpus::Passage> out;
  for (const std::size_t i : order) {
    const auto& r = unique[i];
    std::string text = clip_text_to_region(chars, r, params);
    if (text.find_first_not_of(" \n") == std::string::npos) continue;
    out.push_back(corpus::Passage{{}, std::move(text), passage_category_for(r.category),
                                  r.page_index, r});
  }
  return out;
}

std::vector<RegionBox> fallback_regions(std::span<const CharBox> chars,
                                        const AssemblyParams& params) {
  std::set<int> page_ids;
  for (const auto& c : chars) page_ids.insert(c.page_index);

  std::vector<RegionBox> out;
  for (const int page : page_ids) {
    std::vector<CharBox> on_page;
    for (const auto& c : chars)
      if (c.page_index == page) on_page.push_back(c);
    const auto metrics = page_glyph_metrics(chars, page);
    const auto lines = group_lines(on_page, metrics, params);
    if (lines.empty()) continue;

    // Body line pitch: lower quartile of baseline gaps, so short paragraphs
    // do not let paragraph breaks dominate; never below one glyph height.
    std::vector<double> pitches;
    for (std::size_t i = 1; i < lines.size(); ++i)
      pitches.push_back(lines[i].baseline_y - lines[i - 1].baseline_y);
    double body = metrics.median_height;
    if (!pitches.empty()) {
      std::sort(pitches.begin(), pitches.end());
      body = std::max(body, pitches[(pitches.size() - 1) / 4]);
    }
    const double gap_limit = 1.5 * body;

    RegionBox block{page, lines[0].x0, lines[0].y0, lines[0].x1, lines[0].y1,
                    RegionCategory::paragraph, 1.0};
    for (std::size_t i = 1; i < lines.size(); ++i) {
      if (lines[i].baseline_y - lines[i - 1].baseline_y > gap_limit) {
        out.push_back(block);
        block = RegionBox{page, lines[i].x0, lines[i].y0, lines[i].x1, lines[i].y1,
                          RegionCategory::paragraph, 1.0};
        continue;
      }
      block.x0 = std::min(block.x0, lines[i].x0);
      block.y0 = std::min(block.y0, lines[i].y0);
      block.x1 = std::max(block.x1, lines[i].x1);
      block.y1 = std::max(block.y1, lines[i].y1);
    }
    out.push_back(block);
  }
  return out;
}

ExtractionScore extraction_score(std::string_view extracted, std::string_view gold,
                                 RegionCategory category) {
  const auto prf =
      metrics::token_prf(corpus::normalize_tokens(extracted), corpus::normalize_tokens(gold));
  return {prf.precision, prf.recall, prf.f1, category};
}

std::map<corpus::PassageCategory, ExtractionScore> pooled_extraction_scores(
    std::span<const corpus::Passage> extracted, std::span<const corpus::Passage> gold) {
  std::map<corpus::PassageCategory, std::pair<std::vector<std::string>, std::vector<std::string>>>
      pools;
  for (const auto& p : extracted) {
    auto toks = corpus::normalize_tokens(p.text);
    auto& pool = pools[p.category].first;
    pool.insert(pool.end(), toks.begin(), toks.end());
  }
  for (const auto& p : gold) {
    auto toks = corpus::normalize_tokens(p.text);
    auto& pool = pools[p.category].second;
    pool.insert(pool.end(), toks.begin(), toks.end());
  }
  std::map<corpus::PassageCategory, ExtractionScore> out;
  for (const auto& [cat, pool] : pools) {
    const auto prf = metrics::token_prf(pool.first, pool.second);
    RegionCategory rc = RegionCategory::other;
    if (cat == corpus::PassageCategory::paragraph) rc = RegionCategory::paragraph;
    if (cat == corpus::PassageCategory::table) rc = RegionCategory::table;
    if (cat == corpus::PassageCategory::caption) rc = RegionCategory::caption;
    out[cat] = ExtractionScore{prf.precision, prf.recall, prf.f1, rc};
  }
  return out;
}

}  // namespace docqa::extract
