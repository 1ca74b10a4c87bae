#include "depnet/edge_list_io.hpp"

#include <fstream>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <string>

namespace depnet {

namespace {

void strip_cr(std::string& line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
}

std::ifstream open_in(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  return in;
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  return out;
}

}  // namespace

void write_edge_list(const DependencyGraph& g, std::ostream& edges) {
  for (NodeId u = 0; u < g.node_count(); ++u) {
    const std::string source = g.label(u);
    for (NodeId v : g.dependencies(u)) edges << source << '\t' << g.label(v) << '\n';
  }
}

void write_label_file(const DependencyGraph& g, std::ostream& labels) {
  for (NodeId v = 0; v < g.node_count(); ++v) labels << g.label(v) << '\n';
}

DependencyGraph read_edge_list(std::istream& edges, std::istream* labels) {
  std::vector<LabeledEdge> parsed;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(edges, line)) {
    ++line_no;
    strip_cr(line);
    if (line.empty() || line.front() == '#') continue;
    const auto tab = line.find('\t');
    if (tab == std::string::npos || tab == 0 || tab + 1 == line.size() ||
        line.find('\t', tab + 1) != std::string::npos) {
      throw std::runtime_error("edge list line " + std::to_string(line_no) + ": expected source<TAB>target");
    }
    parsed.push_back({line.substr(0, tab), line.substr(tab + 1)});
  }

  if (labels == nullptr) return build_graph(parsed);
  std::vector<std::string> names;
  while (std::getline(*labels, line)) {
    strip_cr(line);
    names.push_back(line);
  }
  return build_graph(parsed, std::move(names), LabelOrder::as_given);
}

std::filesystem::path label_path_for(const std::filesystem::path& edges) {
  std::filesystem::path p = edges;
  p += ".labels";
  return p;
}

void save_edge_list(const DependencyGraph& g, const std::filesystem::path& edges) {
  auto out = open_out(edges);
  write_edge_list(g, out);
  auto lab = open_out(label_path_for(edges));
  write_label_file(g, lab);
  if (!out.flush() || !lab.flush()) throw std::runtime_error("write failed for " + edges.string());
}

DependencyGraph load_edge_list(const std::filesystem::path& edges) {
  auto in = open_in(edges);
  const auto sidecar = label_path_for(edges);
  if (!std::filesystem::exists(sidecar)) return read_edge_list(in);
  auto lab = open_in(sidecar);
  return read_edge_list(in, &lab);
}

}  // namespace depnet
