#include "slk/bitgraph.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <regex>
#include <sstream>
#include <unordered_set>

#include "slk/error.hpp"

namespace slk {

BitGraph::BitGraph(int right_len, std::vector<BitString> left,
                   std::vector<std::vector<BitString>> adjacency)
    : right_len_(right_len), left_(std::move(left)), adjacency_(std::move(adjacency)) {
  if (right_len_ < 0) throw Error(ErrorKind::kInvalidArgument, "negative right_len");
  if (left_.size() != adjacency_.size()) {
    throw Error(ErrorKind::kInvalidArgument, "left node and adjacency counts differ");
  }
  index_.reserve(left_.size());
  for (std::size_t i = 0; i < left_.size(); ++i) {
    if (!index_.emplace(left_[i], i).second) {
      throw Error(ErrorKind::kInvalidArgument, "duplicate left node " + left_[i].render());
    }
    std::unordered_set<BitString, BitStringHash> seen;
    for (const auto& p : adjacency_[i]) {
      if (p.size() != static_cast<std::size_t>(right_len_)) {
        throw Error(ErrorKind::kInconsistentRightLength,
                    "right node " + p.render() + " of " + left_[i].render() +
                        " has length " + std::to_string(p.size()) + ", expected " +
                        std::to_string(right_len_));
      }
      if (!seen.insert(p).second) {
        throw Error(ErrorKind::kDuplicateNeighbor,
                    "duplicate neighbor " + p.render() + " of " + left_[i].render());
      }
    }
  }
}

std::optional<std::size_t> BitGraph::index_of(const BitString& x) const {
  auto it = index_.find(x);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::span<const BitString> BitGraph::neighbors(const BitString& x) const {
  auto it = index_.find(x);
  if (it == index_.end()) {
    throw Error(ErrorKind::kUnknownLeftNode, "unknown left node " + x.render());
  }
  return adjacency_[it->second];
}

std::size_t BitGraph::max_degree() const {
  std::size_t d = 0;
  for (const auto& a : adjacency_) d = std::max(d, a.size());
  return d;
}

std::size_t BitGraph::edge_count() const {
  return std::accumulate(adjacency_.begin(), adjacency_.end(), std::size_t{0},
                         [](std::size_t acc, const auto& a) { return acc + a.size(); });
}

std::size_t degree(const BitGraph& g, const BitString& x) { return g.neighbors(x).size(); }

namespace {

std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
    std::size_t j = i;
    while (j < line.size() && line[j] != ' ' && line[j] != '\t') ++j;
    if (j > i) out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

BitString parse_node(std::string_view token, std::size_t line_no) {
  try {
    return BitString::parse(token);
  } catch (const Error& e) {
    throw ParseError(line_no, e.what());
  }
}

}  // namespace

BitGraph read_graph(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start < text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    lines.push_back(line);
    start = end + 1;
  }
  while (!lines.empty() && lines.back().empty()) lines.pop_back();
  if (lines.empty()) throw ParseError(1, "missing header");

  static const std::regex header(R"(bigraph v1 right_len=(\d+))");
  std::match_results<std::string_view::const_iterator> m;
  if (!std::regex_match(lines[0].begin(), lines[0].end(), m, header)) {
    throw ParseError(1, "expected 'bigraph v1 right_len=<m>'");
  }
  const int right_len = std::stoi(m[1].str());

  std::vector<BitString> left;
  std::vector<std::vector<BitString>> adjacency;
  for (std::size_t li = 1; li < lines.size(); ++li) {
    const std::size_t line_no = li + 1;
    auto tokens = split_ws(lines[li]);
    if (tokens.size() < 2 || tokens[1] != ":") {
      throw ParseError(line_no, "expected '<left> : <neighbors...>'");
    }
    left.push_back(parse_node(tokens[0], line_no));
    std::vector<BitString> nbrs;
    for (std::size_t t = 2; t < tokens.size(); ++t) {
      nbrs.push_back(parse_node(tokens[t], line_no));
    }
    adjacency.push_back(std::move(nbrs));
  }
  try {
    return BitGraph(right_len, std::move(left), std::move(adjacency));
  } catch (const Error& e) {
    // Re-raise with the same kind; the message names the offending node.
    throw Error(e.kind(), std::string("invalid graph: ") + e.what());
  }
}

std::string write_graph(const BitGraph& g) {
  std::string out = "bigraph v1 right_len=" + std::to_string(g.right_len()) + "\n";
  for (std::size_t i = 0; i < g.left_count(); ++i) {
    out += g.left_nodes()[i].render();
    out += " :";
    for (const auto& p : g.neighbors_at(i)) {
      out += ' ';
      out += p.render();
    }
    out += '\n';
  }
  return out;
}

BitGraph read_graph_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::kInvalidArgument, "cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return read_graph(ss.str());
}

void write_graph_file(const BitGraph& g, const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorKind::kInvalidArgument, "cannot write " + path);
  out << write_graph(g);
}

BitGraph disjoint_union(std::span<const BitGraph> graphs, std::span<const BitString> tags) {
  if (graphs.empty()) throw Error(ErrorKind::kInvalidArgument, "no graphs to unite");
  if (graphs.size() != tags.size()) {
    throw Error(ErrorKind::kInvalidArgument, "need exactly one tag per graph");
  }
  std::unordered_set<BitString, BitStringHash> distinct;
  for (const auto& t : tags) {
    if (t.size() != tags[0].size()) {
      throw Error(ErrorKind::kInvalidArgument, "tags have different lengths");
    }
    if (!distinct.insert(t).second) {
      throw Error(ErrorKind::kInvalidArgument, "duplicate tag " + t.render());
    }
  }
  const auto& left = graphs[0].left_nodes();
  for (const auto& g : graphs) {
    if (g.left_nodes() != left) {
      throw Error(ErrorKind::kInvalidArgument, "graphs have different left sets");
    }
    if (g.right_len() != graphs[0].right_len()) {
      throw Error(ErrorKind::kInconsistentRightLength, "graphs have different right_len");
    }
  }
  std::vector<std::vector<BitString>> adjacency(left.size());
  for (std::size_t i = 0; i < left.size(); ++i) {
    for (std::size_t gi = 0; gi < graphs.size(); ++gi) {
      for (const auto& p : graphs[gi].neighbors_at(i)) adjacency[i].push_back(tags[gi] + p);
    }
  }
  return BitGraph(graphs[0].right_len() + static_cast<int>(tags[0].size()), left,
                  std::move(adjacency));
}

std::vector<BitString> copy_tags(std::size_t count) {
  const int width = count <= 1 ? 0 : field_width(count - 1);
  std::vector<BitString> tags;
  for (std::size_t i = 0; i < count; ++i) tags.push_back(BitString::from_uint(i, width));
  return tags;
}

GraphFamily GraphFamily::load_dir(const std::string& dir) {
  namespace fs = std::filesystem;
  if (!fs::is_directory(dir)) throw Error(ErrorKind::kInvalidArgument, "not a directory: " + dir);
  static const std::regex name(R"(G_n(\d+)_k(\d+)\.bg)");
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir)) files.push_back(entry.path());
  std::sort(files.begin(), files.end());
  GraphFamily family;
  for (const auto& path : files) {
    std::smatch m;
    const std::string fname = path.filename().string();
    if (!std::regex_match(fname, m, name)) continue;
    family.members.emplace(std::make_pair(std::stoi(m[1]), std::stoi(m[2])),
                           read_graph_file(path.string()));
  }
  if (family.members.empty()) {
    throw Error(ErrorKind::kInvalidArgument, "no G_n<n>_k<k>.bg files in " + dir);
  }
  for (const auto& [key, g] : family.members) {
    const int c = g.right_len() - key.second;
    auto [it, inserted] = family.overhead.emplace(key.first, c);
    if (!inserted) it->second = std::max(it->second, c);
  }
  return family;
}

void GraphFamily::save_dir(const std::string& dir) const {
  std::filesystem::create_directories(dir);
  for (const auto& [key, g] : members) {
    write_graph_file(g, dir + "/G_n" + std::to_string(key.first) + "_k" +
                            std::to_string(key.second) + ".bg");
  }
}

void GraphFamily::validate() const {
  for (const auto& [key, g] : members) {
    const auto [n, k] = key;
    for (const auto& x : g.left_nodes()) {
      const bool ok = variable_length ? static_cast<int>(x.size()) >= k
                                      : static_cast<int>(x.size()) == n;
      if (!ok) {
        throw Error(ErrorKind::kInvalidArgument,
                    "member (" + std::to_string(n) + "," + std::to_string(k) +
                        ") has left node of wrong length: " + x.render());
      }
    }
    auto it = overhead.find(n);
    const int c = it == overhead.end() ? 0 : it->second;
    if (g.right_len() > k + c + slack) {
      throw Error(ErrorKind::kInvalidArgument,
                  "member (" + std::to_string(n) + "," + std::to_string(k) +
                      ") right_len exceeds k + c(n) + slack");
    }
  }
}

}  // namespace slk
