#pragma once

// npm-style registry metadata.
//
// A dump is newline-delimited JSON, one package document per line:
//
//   {"name": "a",
//    "versions": {"1.0.0": {"dependencies": {"b": "^1.0.0"}}},
//    "time": {"1.0.0": "2014-01-01T00:00:00Z"}}
//
// or a single CouchDB-style `{"rows": [{"doc": {...}}, ...]}` document.
// Either form may be gzip-compressed. Only runtime `dependencies` are kept,
// by package name; version ranges are discarded.

#include <chrono>
#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "depnet/graph.hpp"

namespace depnet {

using Timestamp = std::chrono::sys_time<std::chrono::milliseconds>;

/// Parses ISO-8601 date-times: `YYYY-MM-DD[THH:MM[:SS[.fff]]][Z|+HH:MM|-HH:MM]`.
/// A missing zone means UTC. Sub-millisecond digits are truncated.
std::optional<Timestamp> parse_timestamp(std::string_view text);

/// Like parse_timestamp, but a bare date means the last millisecond of that
/// day, so `2014-12-31` includes everything released on Dec 31.
std::optional<Timestamp> parse_cutoff(std::string_view text);

/// `YYYY-MM-DDTHH:MM:SS.mmmZ`
std::string format_timestamp(Timestamp t);

struct VersionEntry {
  std::string version;
  Timestamp release_time;
  std::vector<std::string> dependency_names;  ///< sorted, unique
  friend bool operator==(const VersionEntry&, const VersionEntry&) = default;
};

struct PackageRecord {
  std::string name;
  std::vector<VersionEntry> versions;  ///< ascending by (release_time, version)
  friend bool operator==(const PackageRecord&, const PackageRecord&) = default;
};

struct ParseIssue {
  std::size_t line = 0;  ///< 1-based; 0 for whole-document problems
  std::string message;
};

struct ParseReport {
  std::vector<PackageRecord> records;  ///< sorted by name
  std::vector<ParseIssue> malformed;   ///< lines that were not valid JSON objects
  std::size_t missing_name = 0;        ///< documents skipped for lack of a name
  std::size_t duplicate_names = 0;     ///< later documents for an already-seen name
  std::size_t untimed_versions = 0;    ///< versions without a `time` entry
  std::size_t bad_timestamps = 0;      ///< versions whose time did not parse
};

/// Parses an uncompressed dump held in memory. Lines are parsed in fixed
/// blocks on up to `threads` workers; the report does not depend on the
/// thread count. Duplicate names keep the first document.
ParseReport parse_registry_dump(std::string_view text, unsigned threads = 1);
ParseReport parse_registry_dump(std::istream& in, unsigned threads = 1);

/// Reads a whole file, inflating it when it starts with the gzip magic bytes.
std::string read_possibly_gzipped(const std::filesystem::path& path);
std::string gunzip(std::string_view compressed);

struct SnapshotSpec {
  Timestamp cutoff = Timestamp::max();  ///< inclusive
};

struct SnapshotEdges {
  std::vector<std::string> packages;  ///< packages present at the cutoff, sorted
  std::vector<LabeledEdge> edges;
  std::size_t dropped_edges = 0;      ///< dependencies on packages absent from the snapshot
  std::size_t self_dependencies = 0;  ///< dependencies of a package on itself, also dropped

  DependencyGraph to_graph() const;
};

/// For every package with a version released at or before the cutoff, the
/// latest such version contributes one edge per dependency that is itself
/// present in the snapshot. `records` must be sorted by name.
SnapshotEdges snapshot_edges(const std::vector<PackageRecord>& records, const SnapshotSpec& spec);

/// Snapshot with no cutoff: every package's latest version.
SnapshotEdges latest_edges(const std::vector<PackageRecord>& records);

/// Line-JSON record cache, one package per line, e.g.
/// `{"name":"a","versions":[{"version":"1.0.0","time":"2014-01-01T00:00:00.000Z","dependencies":["b"]}]}`
void write_record_cache(const std::vector<PackageRecord>& records, std::ostream& out);
/// Throws std::runtime_error on malformed cache lines.
std::vector<PackageRecord> read_record_cache(std::istream& in);

void save_record_cache(const std::vector<PackageRecord>& records, const std::filesystem::path& path);
std::vector<PackageRecord> load_record_cache(const std::filesystem::path& path);

}  // namespace depnet
