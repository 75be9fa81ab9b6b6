#include "docqa/extract/io.hpp"

#include <spawn.h>
#include <sys/wait.h>

#include <algorithm>
#include <fstream>
#include <sstream>

#include "docqa/error.hpp"
#include "json_io.hpp"
#include "utf8.hpp"

extern char** environ;

namespace docqa::extract {
namespace {

std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IngestError(path.string(), "cannot open file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

int CharDump::page_count() const {
  int n = 0;
  for (const auto& p : pages) n = std::max(n, p.page_index + 1);
  for (const auto& c : chars) n = std::max(n, c.page_index + 1);
  return n;
}

CharDump parse_char_dump(std::string_view text, const std::string& origin) {
  CharDump dump;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      const auto j = json::parse(line);
      if (j.contains("ch")) {
        CharBox c;
        c.ch = detail::decode_first_utf8(j["ch"].get<std::string>());
        c.x0 = j.at("x0").get<double>();
        c.y0 = j.at("y0").get<double>();
        c.x1 = j.at("x1").get<double>();
        c.y1 = j.at("y1").get<double>();
        c.page_index = j.at("page").get<int>();
        c.baseline_y = j.value("baseline", c.y1);
        dump.chars.push_back(c);
      } else {
        dump.pages.push_back(
            {j.at("page").get<int>(), j.at("width").get<double>(), j.at("height").get<double>()});
      }
    } catch (const json::exception& e) {
      throw IngestError(origin, "line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  return dump;
}

CharDump read_char_dump(const std::filesystem::path& path) {
  return parse_char_dump(slurp(path), path.string());
}

std::string serialize_char_dump(const CharDump& dump) {
  std::string out;
  for (const auto& p : dump.pages) {
    out += json{{"page", p.page_index}, {"width", p.width}, {"height", p.height}}.dump();
    out += '\n';
  }
  for (const auto& c : dump.chars) {
    std::string ch;
    detail::append_utf8(ch, c.ch);
    out += json{{"ch", ch}, {"x0", c.x0}, {"y0", c.y0}, {"x1", c.x1},
                {"y1", c.y1},           {"page", c.page_index}, {"baseline", c.baseline_y}}
               .dump();
    out += '\n';
  }
  return out;
}

std::vector<RegionBox> parse_region_sidecar(std::string_view text, const std::string& origin) {
  try {
    const auto j = json::parse(text);
    if (!j.is_array()) throw IngestError(origin, "region sidecar must be a JSON array");
    return j.get<std::vector<RegionBox>>();
  } catch (const json::exception& e) {
    throw IngestError(origin, std::string("bad region sidecar: ") + e.what());
  }
}

std::vector<RegionBox> read_region_sidecar(const std::filesystem::path& path) {
  return parse_region_sidecar(slurp(path), path.string());
}

std::string serialize_region_sidecar(const std::vector<RegionBox>& regions) {
  return json(regions).dump();
}

std::vector<RegionBox> validate_regions(std::vector<RegionBox> regions, const CharDump& dump) {
  const int pages = dump.page_count();
  for (std::size_t i = 0; i < regions.size(); ++i) {
    auto& r = regions[i];
    if (r.page_index < 0 || r.page_index >= pages)
      throw ValidationError("region " + std::to_string(i) + " references page " +
                            std::to_string(r.page_index) + " but the document has " +
                            std::to_string(pages) + " page(s)");
    if (!(r.x0 < r.x1) || !(r.y0 < r.y1))
      throw ValidationError("region " + std::to_string(i) + " has a degenerate box");
    for (const auto& p : dump.pages)
      if (p.page_index == r.page_index) r = clamp_to_page(r, p);
    r.detector_score = std::clamp(r.detector_score, 0.0, 1.0);
  }
  return regions;
}

CharDump run_char_extractor(const std::string& command, const std::filesystem::path& pdf,
                            const std::filesystem::path& out) {
  std::vector<std::string> args;
  std::istringstream words(command);
  for (std::string w; words >> w;) args.push_back(w);
  if (args.empty()) throw StageError("extract", "no character extractor command configured");
  args.push_back(pdf.string());
  args.push_back(out.string());

  std::vector<char*> argv;
  for (auto& a : args) argv.push_back(a.data());
  argv.push_back(nullptr);

  pid_t pid = 0;
  if (posix_spawnp(&pid, argv[0], nullptr, nullptr, argv.data(), environ) != 0)
    throw StageError("extract", "cannot launch '" + args[0] + "'");
  int status = 0;
  if (waitpid(pid, &status, 0) < 0 || !WIFEXITED(status) || WEXITSTATUS(status) != 0)
    throw StageError("extract", "character extractor failed on " + pdf.string());
  return read_char_dump(out);
}

}  // namespace docqa::extract
