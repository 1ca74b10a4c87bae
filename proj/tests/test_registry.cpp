#include <gtest/gtest.h>
#include <zlib.h>

#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "depnet/registry.hpp"
#include "support.hpp"

using namespace depnet;
using namespace depnet::testing;

namespace {

std::string gzip(std::string_view text) {
  z_stream zs{};
  EXPECT_EQ(deflateInit2(&zs, Z_DEFAULT_COMPRESSION, Z_DEFLATED, 15 + 16, 8, Z_DEFAULT_STRATEGY), Z_OK);
  std::string out(deflateBound(&zs, text.size()) + 32, '\0');
  zs.next_in = reinterpret_cast<Bytef*>(const_cast<char*>(text.data()));
  zs.avail_in = static_cast<uInt>(text.size());
  zs.next_out = reinterpret_cast<Bytef*>(out.data());
  zs.avail_out = static_cast<uInt>(out.size());
  EXPECT_EQ(deflate(&zs, Z_FINISH), Z_STREAM_END);
  out.resize(zs.total_out);
  deflateEnd(&zs);
  return out;
}

std::set<std::pair<std::string, std::string>> edge_set(const SnapshotEdges& s) {
  std::set<std::pair<std::string, std::string>> out;
  for (const auto& e : s.edges) out.insert({e.source, e.target});
  return out;
}

using EdgeSet = std::set<std::pair<std::string, std::string>>;

const char* kLineA =
    R"({"name":"a","versions":{"1.0.0":{"dependencies":{"b":"^1.0.0"}}},"time":{"1.0.0":"2014-01-01T00:00:00Z"}})";

}  // namespace

TEST(Timestamp, ParsesCommonForms) {
  EXPECT_EQ(format_timestamp(at("2014-01-01T00:00:00Z")), "2014-01-01T00:00:00.000Z");
  EXPECT_EQ(format_timestamp(at("2014-01-01T00:00:00.123456Z")), "2014-01-01T00:00:00.123Z");
  EXPECT_EQ(format_timestamp(at("2014-01-01T02:30:00+02:30")), "2014-01-01T00:00:00.000Z");
  EXPECT_EQ(format_timestamp(at("2013-12-31T23:00:00-01:00")), "2014-01-01T00:00:00.000Z");
  EXPECT_EQ(format_timestamp(at("2014-01-01T12:34")), "2014-01-01T12:34:00.000Z");
  EXPECT_EQ(format_timestamp(at("2014-01-01")), "2014-01-01T00:00:00.000Z");
  EXPECT_FALSE(parse_timestamp("2014-13-01"));
  EXPECT_FALSE(parse_timestamp("2014-02-30"));
  EXPECT_FALSE(parse_timestamp("yesterday"));
  EXPECT_FALSE(parse_timestamp("2014-01-01T25:00:00Z"));
  EXPECT_FALSE(parse_timestamp(""));
}

TEST(Timestamp, BareDateCutoffCoversTheWholeDay) {
  EXPECT_EQ(format_timestamp(*parse_cutoff("2014-12-31")), "2014-12-31T23:59:59.999Z");
  EXPECT_EQ(format_timestamp(*parse_cutoff("2014-12-31T10:00:00Z")), "2014-12-31T10:00:00.000Z");
}

TEST(ParseDump, SingleDocument) {
  const auto report = parse_registry_dump(std::string_view(kLineA));
  ASSERT_EQ(report.records.size(), 1u);
  const auto& r = report.records[0];
  EXPECT_EQ(r.name, "a");
  ASSERT_EQ(r.versions.size(), 1u);
  EXPECT_EQ(r.versions[0].version, "1.0.0");
  EXPECT_EQ(r.versions[0].release_time, at("2014-01-01T00:00:00Z"));
  EXPECT_EQ(r.versions[0].dependency_names, std::vector<std::string>{"b"});
  EXPECT_TRUE(report.malformed.empty());
}

TEST(ParseDump, EmptyTimeMapDropsVersions) {
  const auto report = parse_registry_dump(std::string_view(R"({"name":"a","versions":{"1.0.0":{}},"time":{}})"));
  ASSERT_EQ(report.records.size(), 1u);
  EXPECT_TRUE(report.records[0].versions.empty());
  EXPECT_EQ(report.untimed_versions, 1u);
}

TEST(ParseDump, TwoPackagesWithoutDependencies) {
  const std::string text =
      R"({"name":"b","versions":{"1.0.0":{}},"time":{"1.0.0":"2014-01-01T00:00:00Z"}})"
      "\n"
      R"({"name":"a","versions":{"0.1.0":{}},"time":{"0.1.0":"2013-01-01T00:00:00Z"}})"
      "\n";
  const auto report = parse_registry_dump(text);
  ASSERT_EQ(report.records.size(), 2u);
  EXPECT_EQ(report.records[0].name, "a");
  EXPECT_EQ(report.records[1].name, "b");
  for (const auto& r : report.records) EXPECT_TRUE(r.versions.at(0).dependency_names.empty());
}

TEST(ParseDump, IgnoresNonRuntimeDependencyMaps) {
  const auto report = parse_registry_dump(std::string_view(
      R"({"name":"a","versions":{"1.0.0":{"dependencies":{"z":"1","b":"2","b ":"3"},"devDependencies":{"c":"1"},"peerDependencies":{"d":"1"}}},"time":{"1.0.0":"2014-01-01T00:00:00Z","modified":"2020-01-01T00:00:00Z"}})"));
  ASSERT_EQ(report.records.size(), 1u);
  EXPECT_EQ(report.records[0].versions.at(0).dependency_names, (std::vector<std::string>{"b", "b ", "z"}));
}

TEST(ParseDump, CollectsErrorsAndKeepsGoing) {
  const std::string text = std::string(kLineA) + "\n{not json\n" +
                           R"({"versions":{}})" "\n" +
                           R"({"name":"c","versions":{"1.0.0":{},"2.0.0":{}},"time":{"1.0.0":"garbage","2.0.0":"2015-01-01"}})" "\n" +
                           R"({"name":"a","versions":{},"time":{}})" "\n\n";
  const auto report = parse_registry_dump(text);
  ASSERT_EQ(report.records.size(), 2u);
  EXPECT_EQ(report.records[0].name, "a");
  EXPECT_EQ(report.records[0].versions.size(), 1u);  // first document wins
  EXPECT_EQ(report.records[1].name, "c");
  EXPECT_EQ(report.records[1].versions.size(), 1u);
  ASSERT_EQ(report.malformed.size(), 1u);
  EXPECT_EQ(report.malformed[0].line, 2u);
  EXPECT_EQ(report.missing_name, 1u);
  EXPECT_EQ(report.bad_timestamps, 1u);
  EXPECT_EQ(report.duplicate_names, 1u);
}

TEST(ParseDump, RowsWrapper) {
  const std::string text = std::string(R"({"total_rows":2,"rows":[{"id":"a","doc":)") + kLineA +
                           R"(},{"id":"b","doc":{"name":"b","versions":{},"time":{}}}]})";
  const auto report = parse_registry_dump(text);
  ASSERT_EQ(report.records.size(), 2u);
  EXPECT_EQ(report.records[0].versions.at(0).dependency_names, std::vector<std::string>{"b"});
  EXPECT_EQ(report.records[1].name, "b");
}

TEST(ParseDump, PrettyPrintedRowsWrapperSpanningLines) {
  const std::string text = std::string("{\n  \"rows\": [\n    {\"doc\": ") + kLineA + "}\n  ]\n}\n";
  const auto report = parse_registry_dump(text);
  ASSERT_EQ(report.records.size(), 1u);
  EXPECT_TRUE(report.malformed.empty());
}

TEST(ParseDump, GzipInputIsDetected) {
  const auto dir = std::filesystem::temp_directory_path() / "depnet_registry_test";
  std::filesystem::create_directories(dir);
  const std::string plain = std::string(kLineA) + "\n";
  {
    std::ofstream(dir / "dump.json.gz", std::ios::binary) << gzip(plain);
    std::ofstream(dir / "dump.json", std::ios::binary) << plain;
  }
  EXPECT_EQ(read_possibly_gzipped(dir / "dump.json.gz"), plain);
  EXPECT_EQ(read_possibly_gzipped(dir / "dump.json"), plain);
  std::ifstream in(dir / "dump.json.gz", std::ios::binary);
  EXPECT_EQ(parse_registry_dump(in).records.size(), 1u);
  EXPECT_THROW(gunzip(gzip(plain).substr(0, 12)), std::runtime_error);
  std::filesystem::remove_all(dir);
}

TEST(ParseDump, ThreadCountDoesNotChangeTheReport) {
  std::string text;
  for (int i = 0; i < 5000; ++i) {
    text += R"({"name":"n)" + std::to_string(i % 4500) + R"(","versions":{"1.0.0":{"dependencies":{"n)" +
            std::to_string((i * 7) % 4500) + R"(":"*"}}},"time":{"1.0.0":"2016-01-01"}})" "\n";
    if (i % 997 == 0) text += "garbage\n";
  }
  const auto one = parse_registry_dump(text, 1);
  const auto many = parse_registry_dump(text, 8);
  EXPECT_EQ(one.records, many.records);
  EXPECT_EQ(one.malformed.size(), many.malformed.size());
  EXPECT_EQ(one.duplicate_names, 500u);
  EXPECT_EQ(many.duplicate_names, 500u);
}

TEST(Snapshot, LastExistingVersionRule) {
  const auto records = pqr_corpus();
  const auto s2014 = snapshot_edges(records, {*parse_cutoff("2014-12-31")});
  EXPECT_EQ(edge_set(s2014), (EdgeSet{{"P", "Q"}}));
  EXPECT_EQ(s2014.packages, (std::vector<std::string>{"P", "Q", "R"}));
  const auto latest = latest_edges(records);
  EXPECT_EQ(edge_set(latest), (EdgeSet{{"P", "Q"}, {"P", "R"}}));
  EXPECT_EQ(latest.dropped_edges, 0u);
}

TEST(Snapshot, CutoffBeforeEveryRelease) {
  const auto s = snapshot_edges(pqr_corpus(), {at("2011-01-01")});
  EXPECT_TRUE(s.edges.empty());
  EXPECT_TRUE(s.packages.empty());
}

TEST(Snapshot, TargetNotYetReleasedIsDropped) {
  // At mid-2012 only Q exists; at 2013-05 P depends on Q.
  const auto s = snapshot_edges(pqr_corpus(), {at("2012-03-01")});
  EXPECT_EQ(s.packages, std::vector<std::string>{"Q"});
}

TEST(Snapshot, UnresolvableDependencyCounted) {
  const std::vector<PackageRecord> records{{"P", {{"1.0.0", at("2013-01-01"), {"X"}}}}};
  const auto s = latest_edges(records);
  EXPECT_TRUE(s.edges.empty());
  EXPECT_EQ(s.dropped_edges, 1u);
  EXPECT_EQ(s.to_graph().node_count(), 1u);
}

TEST(Snapshot, SelfDependencyCountedSeparately) {
  const std::vector<PackageRecord> records{{"P", {{"1.0.0", at("2013-01-01"), {"P"}}}}};
  const auto s = latest_edges(records);
  EXPECT_TRUE(s.edges.empty());
  EXPECT_EQ(s.self_dependencies, 1u);
  EXPECT_EQ(s.dropped_edges, 0u);
}

TEST(Snapshot, EmptyAndEdgelessCorpora) {
  EXPECT_TRUE(latest_edges({}).edges.empty());
  const std::vector<PackageRecord> records{{"a", {{"1", at("2013-01-01"), {}}}}, {"b", {{"1", at("2013-01-01"), {}}}}};
  const auto g = latest_edges(records).to_graph();
  EXPECT_EQ(g.node_count(), 2u);
  EXPECT_EQ(g.edge_count(), 0u);
}

TEST(Snapshot, SameTimeTieGoesToGreatestVersionString) {
  const std::vector<PackageRecord> records{
      {"P", {{"1.0.0", at("2013-01-01"), {"Q"}}, {"1.0.1", at("2013-01-01"), {"R"}}}},
      {"Q", {{"1", at("2012-01-01"), {}}}},
      {"R", {{"1", at("2012-01-01"), {}}}},
  };
  EXPECT_EQ(edge_set(latest_edges(records)), (EdgeSet{{"P", "R"}}));
}

TEST(Snapshot, RejectsUnsortedRecords) {
  auto records = pqr_corpus();
  std::swap(records[0], records[2]);
  EXPECT_THROW(latest_edges(records), std::invalid_argument);
}

TEST(Snapshot, MembershipAndMonotonicity) {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const auto records = random_corpus(60, seed);
    std::vector<std::string> previous;
    for (int year = 2009; year <= 2022; ++year) {
      const auto cutoff = *parse_cutoff(std::to_string(year) + "-12-31");
      const auto s = snapshot_edges(records, {cutoff});
      std::vector<std::string> expected;
      for (const auto& r : records) {
        if (std::any_of(r.versions.begin(), r.versions.end(), [&](const auto& v) { return v.release_time <= cutoff; }))
          expected.push_back(r.name);
      }
      EXPECT_EQ(s.packages, expected);
      EXPECT_TRUE(std::includes(s.packages.begin(), s.packages.end(), previous.begin(), previous.end()));
      EXPECT_EQ(edge_set(s).size(), s.edges.size());
      EXPECT_EQ(s.to_graph().edge_count(), s.edges.size());
      previous = s.packages;
    }
  }
}

TEST(RecordCache, RoundTrip) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto records = random_corpus(40, seed);
    std::stringstream buffer;
    write_record_cache(records, buffer);
    EXPECT_EQ(read_record_cache(buffer), records);
  }
}

TEST(RecordCache, ParseSerializeParse) {
  const auto report = parse_registry_dump(std::string(kLineA) + "\n" +
                                          R"({"name":"b","versions":{"1.0.0":{},"0.9.0":{"dependencies":{"a":"1"}}},"time":{"1.0.0":"2015-06-01T10:11:12.345Z","0.9.0":"2014-06-01"}})");
  std::stringstream buffer;
  write_record_cache(report.records, buffer);
  const auto back = read_record_cache(buffer);
  EXPECT_EQ(back, report.records);
  ASSERT_EQ(back[1].versions.size(), 2u);
  EXPECT_EQ(back[1].versions[0].version, "0.9.0");
}

TEST(RecordCache, MalformedLineThrows) {
  std::stringstream buffer("{\"name\":\"a\"}\n");
  EXPECT_THROW(read_record_cache(buffer), std::runtime_error);
}
