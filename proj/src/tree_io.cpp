#include "vsynth/tree_io.hpp"

#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <unordered_map>

#include "vsynth/error.hpp"

namespace vsynth {

namespace {

constexpr const char* kMagic = "vasculsynth-tree";
constexpr const char* kVersion = "v1";

const char* kind_name(NodeKind kind) {
  switch (kind) {
    case NodeKind::root: return "root";
    case NodeKind::leaf: return "leaf";
    case NodeKind::inter: return "inter";
    case NodeKind::bifurcation: return "bifurcation";
  }
  return "leaf";
}

std::string fmt9(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

}  // namespace

void write_tree(std::ostream& out, const Tree& tree) {
  std::unordered_map<NodeId, long long> compact;
  long long next = 0;
  for (const Node& n : tree.arena())
    if (n.alive) compact.emplace(n.id, next++);
  out << kMagic << ' ' << kVersion << ' ' << next << '\n';
  for (const Node& n : tree.arena()) {
    if (!n.alive) continue;
    out << compact.at(n.id) << ' ' << (n.parent ? compact.at(*n.parent) : -1LL);
    for (double v : {n.position.x(), n.position.y(), n.position.z(), n.direction.x(),
                     n.direction.y(), n.direction.z(), n.beta})
      out << ' ' << fmt9(v);
    out << ' ' << kind_name(n.kind) << '\n';
  }
}

Tree read_tree(std::istream& in) {
  std::string magic, version;
  long long count = -1;
  std::string header;
  if (!std::getline(in, header)) throw Error(Errc::ParseError, "missing tree header");
  std::istringstream hs(header);
  if (!(hs >> magic >> version >> count) || magic != kMagic || version != kVersion || count < 0)
    throw Error(Errc::ParseError, "bad tree header: " + header);
  std::vector<Node> nodes;
  nodes.reserve(static_cast<std::size_t>(count));
  std::string line;
  for (long long n = 0; n < count; ++n) {
    if (!std::getline(in, line)) throw Error(Errc::TruncatedPayload, "tree file ends early");
    std::istringstream ls(line);
    long long id = 0, parent = 0;
    Node node;
    std::string kind;
    if (!(ls >> id >> parent >> node.position.x() >> node.position.y() >> node.position.z() >>
          node.direction.x() >> node.direction.y() >> node.direction.z() >> node.beta >> kind))
      throw Error(Errc::ParseError, "bad tree line: " + line);
    if (id != n) throw Error(Errc::ParseError, "tree ids must be sequential");
    if (kind != "root" && kind != "leaf" && kind != "inter" && kind != "bifurcation")
      throw Error(Errc::ParseError, "unknown node kind: " + kind);
    node.id = static_cast<NodeId>(id);
    if (parent >= 0) node.parent = static_cast<NodeId>(parent);
    node.origin = parent >= 0 ? NodeOrigin::extension : NodeOrigin::root;
    nodes.push_back(std::move(node));
  }
  return Tree::from_nodes(std::move(nodes));
}

void save_tree(const std::filesystem::path& path, const Tree& tree) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(Errc::Io, "cannot open " + path.string() + " for writing");
  write_tree(out, tree);
  if (!out) throw Error(Errc::Io, "failed writing " + path.string());
}

Tree load_tree(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::Io, "cannot open " + path.string());
  return read_tree(in);
}

}  // namespace vsynth
