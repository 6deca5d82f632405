#include "berktree/tree.hpp"

#include <algorithm>
#include <sstream>

#include "berktree/errors.hpp"

namespace berktree {

namespace {

TreeNode fresh(const BerkPoint& x) {
  TreeNode n;
  n.point = x;
  return n;
}

}  // namespace

DynTree::DynTree() { nodes_.push_back(TreeNode{}); }

void DynTree::relink(int child, int parent) {
  TreeNode& c = nodes_[static_cast<std::size_t>(child)];
  c.parent = parent;
  if (parent == kRoot) {
    c.edge_length.reset();
  } else {
    c.edge_length = rho(c.point, nodes_[static_cast<std::size_t>(parent)].point);
  }
}

int DynTree::insert(const BerkPoint& x) {
  if (x.is_infinity()) return kRoot;
  if (!x.is_ball()) throw TypeIPoint("tree nodes must be type II points");
  int cur = kRoot;
  for (;;) {
    int next = -1;
    const auto kids = nodes_[static_cast<std::size_t>(cur)].children;
    for (std::size_t slot = 0; slot < kids.size(); ++slot) {
      const int c = kids[slot];
      const BerkPoint& cp = nodes_[static_cast<std::size_t>(c)].point;
      if (leq(x, cp)) {
        if (same_point(x, cp)) return c;
        next = c;
        break;
      }
      BerkPoint J = join_inf(x, cp);
      if (!strictly_below(J, nodes_[static_cast<std::size_t>(cur)].point)) continue;
      // x branches off the edge (c, cur) at J.
      const bool on_edge = same_point(J, x);
      const int j = static_cast<int>(nodes_.size());
      nodes_.push_back(fresh(on_edge ? x : J));
      nodes_[static_cast<std::size_t>(cur)].children[slot] = j;
      nodes_[static_cast<std::size_t>(j)].children.push_back(c);
      relink(j, cur);
      relink(c, j);
      if (on_edge) return j;
      const int id = static_cast<int>(nodes_.size());
      nodes_.push_back(fresh(x));
      nodes_[static_cast<std::size_t>(j)].children.push_back(id);
      relink(id, j);
      return id;
    }
    if (next < 0) {
      const int id = static_cast<int>(nodes_.size());
      nodes_.push_back(fresh(x));
      nodes_[static_cast<std::size_t>(cur)].children.push_back(id);
      relink(id, cur);
      return id;
    }
    cur = next;
  }
}

int DynTree::find(const BerkPoint& x) const {
  if (x.is_infinity()) return kRoot;
  int cur = kRoot;
  for (;;) {
    int next = -1;
    for (int c : node(cur).children) {
      if (leq(x, point(c))) {
        if (same_point(x, point(c))) return c;
        next = c;
        break;
      }
    }
    if (next < 0) return -1;
    cur = next;
  }
}

BerkPoint DynTree::retract(const BerkPoint& x) const {
  if (x.is_infinity()) return x;
  int cur = kRoot;
  for (;;) {
    int next = -1;
    for (int c : node(cur).children) {
      if (leq(x, point(c))) {
        if (same_point(x, point(c))) return point(c);
        next = c;
        break;
      }
      BerkPoint J = join_inf(x, point(c));
      if (strictly_below(J, point(cur))) return J;
    }
    if (next < 0) return point(cur);
    cur = next;
  }
}

bool DynTree::contains(const BerkPoint& x) const { return same_point(retract(x), x); }

int DynTree::top() const { return node(kRoot).children.empty() ? -1 : node(kRoot).children.front(); }

int DynTree::valency(int id) const {
  const TreeNode& n = node(id);
  return static_cast<int>(n.children.size()) + (n.parent >= 0 ? 1 : 0);
}

std::vector<int> DynTree::vertex_set() const {
  std::vector<int> out;
  for (int i = 0; i < static_cast<int>(nodes_.size()); ++i) {
    if (i == kRoot || valency(i) != 2) out.push_back(i);
  }
  return out;
}

std::vector<int> DynTree::leaves() const {
  std::vector<int> out;
  for (int i = 1; i < static_cast<int>(nodes_.size()); ++i) {
    if (node(i).children.empty()) out.push_back(i);
  }
  return out;
}

std::vector<int> DynTree::subtree(int id) const {
  std::vector<int> out, stack{id};
  while (!stack.empty()) {
    int cur = stack.back();
    stack.pop_back();
    out.push_back(cur);
    const auto& ch = node(cur).children;
    for (auto it = ch.rbegin(); it != ch.rend(); ++it) stack.push_back(*it);
  }
  return out;
}

bool DynTree::in_subtree(int id, int ancestor) const {
  for (int cur = id; cur >= 0; cur = node(cur).parent) {
    if (cur == ancestor) return true;
  }
  return false;
}

std::vector<Direction> DynTree::directions(int id) const {
  std::vector<Direction> out;
  const BerkPoint& base = point(id);
  if (id != kRoot) out.push_back(direction_to_infinity(base));
  for (int c : node(id).children) out.push_back(Direction{base, false, point(c)});
  return out;
}

void DynTree::set_level(int id, int k) {
  TreeNode& n = nodes_.at(static_cast<std::size_t>(id));
  if (n.level < 0 || k < n.level) n.level = k;
}

Rational total_mass(const TreeMeasure& m) {
  Rational s;
  for (const auto& [id, w] : m) s += w;
  return s;
}

TreeMeasure pruned(const TreeMeasure& m) {
  TreeMeasure out;
  for (const auto& [id, w] : m) {
    if (!w.is_zero()) out.emplace(id, w);
  }
  return out;
}

TreeMeasure valency_measure(const DynTree& t) {
  TreeMeasure m;
  for (int id = 0; id < static_cast<int>(t.size()); ++id) {
    int v = t.valency(id);
    if (v != 2) m[id] = Rational(2 - v, 2);
  }
  return m;
}

TreeMeasure laplacian(const DynTree& t, const PAFunction& f) {
  auto value = [&](int id) -> const Rational& {
    auto it = f.values.find(id);
    if (it == f.values.end()) throw InputError("function value missing at node " + std::to_string(id));
    return it->second;
  };
  TreeMeasure m;
  for (int id = 1; id < static_cast<int>(t.size()); ++id) {
    const TreeNode& n = t.node(id);
    Rational atom;
    for (int c : n.children) atom += (value(c) - value(id)) / *t.node(c).edge_length;
    if (n.parent == DynTree::kRoot) {
      atom += f.slope_inf;
    } else {
      atom += (value(n.parent) - value(id)) / *n.edge_length;
    }
    m[id] = atom;
  }
  m[DynTree::kRoot] = -f.slope_inf;
  return m;
}

std::string to_dot(const DynTree& t) {
  std::ostringstream os;
  os << "graph gamma {\n";
  for (int id = 0; id < static_cast<int>(t.size()); ++id) {
    os << "  n" << id << " [label=\"" << t.point(id).str() << "\\nv=" << t.valency(id) << "\"];\n";
  }
  for (int id = 1; id < static_cast<int>(t.size()); ++id) {
    const TreeNode& n = t.node(id);
    os << "  n" << id << " -- n" << n.parent << " [label=\""
       << (n.edge_length ? n.edge_length->str() : std::string("inf")) << "\"];\n";
  }
  os << "}\n";
  return os.str();
}

TreeFamily::TreeFamily(Poly P, long leaf_cap) : P_(std::move(P)), cap_(leaf_cap), base_(base_point(P_)) {
  levels_.push_back({{base_.point, 1}});
}

const std::vector<FiberEntry>& TreeFamily::fiber(int k) {
  if (k < 0) throw InputError("negative level");
  while (static_cast<int>(levels_.size()) <= k) {
    long total = 1;
    for (std::size_t i = 0; i < levels_.size(); ++i) total *= P_.degree();
    if (total > cap_) {
      throw LevelBoundExceeded("level " + std::to_string(levels_.size()) + " would carry " + std::to_string(total) +
                               " preimages, above the cap " + std::to_string(cap_));
    }
    const int level = static_cast<int>(levels_.size());
    if (failed_level_ == level) throw WildCase(failure_);
    std::vector<FiberEntry> next;
    if (base_.simple) {
      next.push_back({base_.point, static_cast<int>(total)});
    } else {
      try {
        for (const auto& e : levels_.back()) {
          for (const auto& pre : preimages(P_, e.point)) next.push_back({pre.point, pre.local_degree * e.local_degree});
        }
      } catch (const WildCase& ex) {
        failed_level_ = level;
        failure_ = ex.what();
        throw;
      }
    }
    levels_.push_back(std::move(next));
  }
  return levels_[static_cast<std::size_t>(k)];
}

const DynTree& TreeFamily::tree(int n) {
  auto it = trees_.find(n);
  if (it != trees_.end()) return it->second;
  DynTree t;
  t.level = n;
  t.simple = base_.simple;
  const int b = t.insert(base_.point);
  t.set_level(b, 0);
  if (base_.simple) {
    t.set_fiber_degree(b, fiber(n).front().local_degree);
    return trees_.emplace(n, std::move(t)).first->second;
  }
  if (n == 0) t.set_fiber_degree(b, 1);
  for (int k = 1; k <= n; ++k) {
    for (const auto& e : fiber(k)) {
      const int id = t.insert(e.point);
      t.set_level(id, k);
      if (k == n) t.set_fiber_degree(id, e.local_degree);
    }
  }
  long total = 0;
  std::size_t leaf_count = 0;
  for (int id : t.leaves()) {
    if (t.node(id).level != n) throw InvariantViolation("a tree end is not a point of the last level");
    total += t.node(id).fiber_degree;
    ++leaf_count;
  }
  if (leaf_count != fiber(n).size()) throw InvariantViolation("a point of the last level is not an end of the tree");
  long expect = 1;
  for (int k = 0; k < n; ++k) expect *= P_.degree();
  if (total != expect) throw InvariantViolation("leaf fiber degrees do not add up to d^n");
  return trees_.emplace(n, std::move(t)).first->second;
}

DynTree build_tree(const Poly& P, int n, long leaf_cap) {
  TreeFamily fam(P, leaf_cap);
  return fam.tree(n);
}

}  // namespace berktree
