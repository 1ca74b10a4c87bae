#include "depnet/registry.hpp"

#include <zlib.h>

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iterator>
#include <stdexcept>

#include <json.hpp>

#include "depnet/parallel.hpp"

namespace depnet {

using json = nlohmann::json;
namespace chr = std::chrono;

// ---------------------------------------------------------------------------
// Timestamps

namespace {

struct Cursor {
  std::string_view s;
  std::size_t pos = 0;

  bool done() const { return pos >= s.size(); }
  bool eat(char c) {
    if (pos < s.size() && s[pos] == c) {
      ++pos;
      return true;
    }
    return false;
  }
  bool digits(std::size_t count, int& value) {
    if (pos + count > s.size()) return false;
    value = 0;
    for (std::size_t i = 0; i < count; ++i) {
      const char c = s[pos + i];
      if (c < '0' || c > '9') return false;
      value = value * 10 + (c - '0');
    }
    pos += count;
    return true;
  }
};

std::optional<Timestamp> parse_iso(std::string_view text, bool end_of_day_for_dates) {
  Cursor cur{text};
  int year = 0, month = 0, day = 0;
  if (!cur.digits(4, year) || !cur.eat('-') || !cur.digits(2, month) || !cur.eat('-') || !cur.digits(2, day)) {
    return std::nullopt;
  }
  const chr::year_month_day ymd{chr::year{year}, chr::month{static_cast<unsigned>(month)},
                                chr::day{static_cast<unsigned>(day)}};
  if (!ymd.ok()) return std::nullopt;
  Timestamp t{chr::sys_days{ymd}};
  if (cur.done()) {
    if (end_of_day_for_dates) t += chr::days{1} - chr::milliseconds{1};
    return t;
  }

  if (!cur.eat('T') && !cur.eat('t') && !cur.eat(' ')) return std::nullopt;
  int hour = 0, minute = 0, second = 0;
  if (!cur.digits(2, hour) || !cur.eat(':') || !cur.digits(2, minute)) return std::nullopt;
  if (cur.eat(':')) {
    if (!cur.digits(2, second)) return std::nullopt;
    if (cur.eat('.') || cur.eat(',')) {
      int millis = 0;
      std::size_t count = 0;
      while (!cur.done() && cur.s[cur.pos] >= '0' && cur.s[cur.pos] <= '9') {
        if (count < 3) millis = millis * 10 + (cur.s[cur.pos] - '0');
        ++count;
        ++cur.pos;
      }
      if (count == 0) return std::nullopt;
      for (std::size_t i = count; i < 3; ++i) millis *= 10;
      t += chr::milliseconds{millis};
    }
  }
  // 24:00:00 is not accepted; leap seconds are clamped to :59.
  if (hour > 23 || minute > 59 || second > 60) return std::nullopt;
  t += chr::hours{hour} + chr::minutes{minute} + chr::seconds{std::min(second, 59)};

  if (cur.eat('Z') || cur.eat('z')) {
  } else if (!cur.done() && (cur.s[cur.pos] == '+' || cur.s[cur.pos] == '-')) {
    const bool ahead = cur.s[cur.pos] == '+';
    ++cur.pos;
    int oh = 0, om = 0;
    if (!cur.digits(2, oh)) return std::nullopt;
    cur.eat(':');
    if (!cur.digits(2, om) || oh > 23 || om > 59) return std::nullopt;
    const auto offset = chr::hours{oh} + chr::minutes{om};
    t = ahead ? t - offset : t + offset;
  }
  if (!cur.done()) return std::nullopt;
  return t;
}

}  // namespace

std::optional<Timestamp> parse_timestamp(std::string_view text) { return parse_iso(text, false); }

std::optional<Timestamp> parse_cutoff(std::string_view text) { return parse_iso(text, true); }

std::string format_timestamp(Timestamp t) {
  const auto day = chr::floor<chr::days>(t);
  const chr::year_month_day ymd{day};
  const chr::hh_mm_ss hms{t - day};
  char buf[40];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02uT%02d:%02d:%02d.%03dZ", static_cast<int>(ymd.year()),
                static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()),
                static_cast<int>(hms.hours().count()), static_cast<int>(hms.minutes().count()),
                static_cast<int>(hms.seconds().count()), static_cast<int>(hms.subseconds().count()));
  return buf;
}

// ---------------------------------------------------------------------------
// Dump parsing

namespace {

constexpr std::size_t kLinesPerBlock = 2048;

void sort_versions(std::vector<VersionEntry>& versions) {
  std::sort(versions.begin(), versions.end(), [](const VersionEntry& a, const VersionEntry& b) {
    if (a.release_time != b.release_time) return a.release_time < b.release_time;
    return a.version < b.version;
  });
}

// Converts one package document. Returns nullopt (and counts) when it has no name.
std::optional<PackageRecord> convert_document(const json& doc, ParseReport& report) {
  const auto name_it = doc.find("name");
  if (name_it == doc.end() || !name_it->is_string() || name_it->get_ref<const std::string&>().empty()) {
    ++report.missing_name;
    return std::nullopt;
  }
  PackageRecord record;
  record.name = name_it->get<std::string>();

  const auto versions_it = doc.find("versions");
  const auto time_it = doc.find("time");
  if (versions_it == doc.end() || !versions_it->is_object()) return record;
  const json* times = (time_it != doc.end() && time_it->is_object()) ? &*time_it : nullptr;

  for (const auto& [version, body] : versions_it->items()) {
    const json* stamp = nullptr;
    if (times != nullptr) {
      if (auto it = times->find(version); it != times->end()) stamp = &*it;
    }
    if (stamp == nullptr) {
      ++report.untimed_versions;
      continue;
    }
    std::optional<Timestamp> when;
    if (stamp->is_string()) when = parse_timestamp(stamp->get_ref<const std::string&>());
    if (!when) {
      ++report.bad_timestamps;
      continue;
    }
    VersionEntry entry{version, *when, {}};
    if (body.is_object()) {
      if (auto deps = body.find("dependencies"); deps != body.end() && deps->is_object()) {
        for (const auto& dep : deps->items()) entry.dependency_names.push_back(dep.key());
      }
    }
    std::sort(entry.dependency_names.begin(), entry.dependency_names.end());
    entry.dependency_names.erase(std::unique(entry.dependency_names.begin(), entry.dependency_names.end()),
                                 entry.dependency_names.end());
    record.versions.push_back(std::move(entry));
  }
  sort_versions(record.versions);
  return record;
}

void merge_into(ParseReport& total, ParseReport&& part) {
  total.records.insert(total.records.end(), std::make_move_iterator(part.records.begin()),
                       std::make_move_iterator(part.records.end()));
  total.malformed.insert(total.malformed.end(), std::make_move_iterator(part.malformed.begin()),
                         std::make_move_iterator(part.malformed.end()));
  total.missing_name += part.missing_name;
  total.untimed_versions += part.untimed_versions;
  total.bad_timestamps += part.bad_timestamps;
}

// Stable name sort, then drop later documents with a name already seen.
void finalize(ParseReport& report) {
  std::stable_sort(report.records.begin(), report.records.end(),
                   [](const PackageRecord& a, const PackageRecord& b) { return a.name < b.name; });
  const auto last = std::unique(report.records.begin(), report.records.end(),
                                [](const PackageRecord& a, const PackageRecord& b) { return a.name == b.name; });
  report.duplicate_names += static_cast<std::size_t>(report.records.end() - last);
  report.records.erase(last, report.records.end());
}

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::optional<ParseReport> try_rows_wrapper(std::string_view text) {
  json whole = json::parse(text, nullptr, false);
  if (whole.is_discarded() || !whole.is_object()) return std::nullopt;
  const auto rows = whole.find("rows");
  if (rows == whole.end() || !rows->is_array()) return std::nullopt;
  ParseReport report;
  for (const json& row : *rows) {
    const json* doc = nullptr;
    if (row.is_object()) {
      if (auto it = row.find("doc"); it != row.end() && it->is_object()) doc = &*it;
    }
    if (doc == nullptr) {
      ++report.missing_name;
      continue;
    }
    if (auto rec = convert_document(*doc, report)) report.records.push_back(std::move(*rec));
  }
  return report;
}

}  // namespace

ParseReport parse_registry_dump(std::string_view text, unsigned threads) {
  std::vector<std::string_view> lines;
  for (std::size_t start = 0; start < text.size();) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    lines.push_back(text.substr(start, end - start));
    start = end + 1;
  }

  // A first line that is not a complete JSON value, or one that is itself a
  // rows wrapper, means the whole input is a single wrapper document.
  std::size_t first = 0;
  while (first < lines.size() && trim(lines[first]).empty()) ++first;
  if (first < lines.size()) {
    const json head = json::parse(trim(lines[first]), nullptr, false);
    const bool wrapper_head = !head.is_discarded() && head.is_object() && head.contains("rows");
    if (head.is_discarded() || wrapper_head) {
      if (auto wrapped = try_rows_wrapper(text)) {
        finalize(*wrapped);
        return std::move(*wrapped);
      }
    }
  }

  const std::size_t blocks = (lines.size() + kLinesPerBlock - 1) / kLinesPerBlock;
  std::vector<ParseReport> parts(blocks);
  parallel_for(blocks, threads, [&](std::size_t b) {
    ParseReport& part = parts[b];
    const std::size_t end = std::min(lines.size(), (b + 1) * kLinesPerBlock);
    for (std::size_t i = b * kLinesPerBlock; i < end; ++i) {
      const std::string_view line = trim(lines[i]);
      if (line.empty()) continue;
      json doc = json::parse(line, nullptr, false);
      if (doc.is_discarded() || !doc.is_object()) {
        part.malformed.push_back({i + 1, doc.is_discarded() ? "invalid JSON" : "not a JSON object"});
        continue;
      }
      if (auto rec = convert_document(doc, part)) part.records.push_back(std::move(*rec));
    }
  });

  ParseReport report;
  for (auto& part : parts) merge_into(report, std::move(part));
  finalize(report);
  return report;
}

ParseReport parse_registry_dump(std::istream& in, unsigned threads) {
  std::string text{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
  if (text.size() >= 2 && static_cast<unsigned char>(text[0]) == 0x1f && static_cast<unsigned char>(text[1]) == 0x8b) {
    text = gunzip(text);
  }
  return parse_registry_dump(std::string_view(text), threads);
}

std::string gunzip(std::string_view compressed) {
  z_stream zs{};
  // 16 + MAX_WBITS: gzip wrapper only.
  if (inflateInit2(&zs, 16 + MAX_WBITS) != Z_OK) throw std::runtime_error("zlib init failed");
  std::string out;
  char buffer[1 << 16];
  zs.next_in = reinterpret_cast<Bytef*>(const_cast<char*>(compressed.data()));
  zs.avail_in = static_cast<uInt>(compressed.size());
  for (;;) {
    zs.next_out = reinterpret_cast<Bytef*>(buffer);
    zs.avail_out = sizeof buffer;
    const int rc = inflate(&zs, Z_NO_FLUSH);
    if (rc != Z_OK && rc != Z_STREAM_END && rc != Z_BUF_ERROR) {
      const std::string msg = zs.msg ? zs.msg : "corrupt stream";
      inflateEnd(&zs);
      throw std::runtime_error("gzip decode failed: " + msg);
    }
    out.append(buffer, sizeof buffer - zs.avail_out);
    if (rc == Z_STREAM_END) {
      if (zs.avail_in == 0) break;
      // Concatenated gzip members.
      inflateReset(&zs);
      continue;
    }
    if (rc == Z_BUF_ERROR || (zs.avail_in == 0 && zs.avail_out != 0)) {
      inflateEnd(&zs);
      throw std::runtime_error("gzip decode failed: truncated input");
    }
  }
  inflateEnd(&zs);
  return out;
}

std::string read_possibly_gzipped(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::string bytes{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
  if (bytes.size() >= 2 && static_cast<unsigned char>(bytes[0]) == 0x1f &&
      static_cast<unsigned char>(bytes[1]) == 0x8b) {
    return gunzip(bytes);
  }
  return bytes;
}

// ---------------------------------------------------------------------------
// Snapshots

DependencyGraph SnapshotEdges::to_graph() const { return build_graph(edges, packages, LabelOrder::sorted); }

SnapshotEdges snapshot_edges(const std::vector<PackageRecord>& records, const SnapshotSpec& spec) {
  std::vector<const VersionEntry*> selected;
  SnapshotEdges out;
  for (const PackageRecord& record : records) {
    // Versions are ascending, so the last qualifying entry is the latest one
    // (ties on time resolve to the greatest version string).
    auto after = std::upper_bound(record.versions.begin(), record.versions.end(), spec.cutoff,
                                  [](Timestamp c, const VersionEntry& v) { return c < v.release_time; });
    if (after == record.versions.begin()) continue;
    out.packages.push_back(record.name);
    selected.push_back(&*std::prev(after));
  }
  if (!std::is_sorted(out.packages.begin(), out.packages.end())) {
    throw std::invalid_argument("snapshot_edges: records must be sorted by name");
  }

  for (std::size_t i = 0; i < out.packages.size(); ++i) {
    for (const std::string& dep : selected[i]->dependency_names) {
      if (dep == out.packages[i]) {
        ++out.self_dependencies;
      } else if (std::binary_search(out.packages.begin(), out.packages.end(), dep)) {
        out.edges.push_back({out.packages[i], dep});
      } else {
        ++out.dropped_edges;
      }
    }
  }
  return out;
}

SnapshotEdges latest_edges(const std::vector<PackageRecord>& records) { return snapshot_edges(records, {}); }

// ---------------------------------------------------------------------------
// Record cache

void write_record_cache(const std::vector<PackageRecord>& records, std::ostream& out) {
  for (const PackageRecord& record : records) {
    json versions = json::array();
    for (const VersionEntry& v : record.versions) {
      versions.push_back({{"version", v.version},
                          {"time", format_timestamp(v.release_time)},
                          {"dependencies", v.dependency_names}});
    }
    out << json{{"name", record.name}, {"versions", std::move(versions)}}.dump() << '\n';
  }
}

std::vector<PackageRecord> read_record_cache(std::istream& in) {
  std::vector<PackageRecord> records;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    try {
      const json doc = json::parse(line);
      PackageRecord record;
      record.name = doc.at("name").get<std::string>();
      for (const json& v : doc.at("versions")) {
        auto when = parse_timestamp(v.at("time").get<std::string>());
        if (!when) throw std::runtime_error("bad timestamp");
        record.versions.push_back(
            {v.at("version").get<std::string>(), *when, v.at("dependencies").get<std::vector<std::string>>()});
      }
      records.push_back(std::move(record));
    } catch (const std::exception& e) {
      throw std::runtime_error("record cache line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return records;
}

void save_record_cache(const std::vector<PackageRecord>& records, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  write_record_cache(records, out);
  if (!out.flush()) throw std::runtime_error("write failed for " + path.string());
}

std::vector<PackageRecord> load_record_cache(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  return read_record_cache(in);
}

}  // namespace depnet
