#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "berktree/polydyn.hpp"

namespace berktree {

struct TreeNode {
  BerkPoint point;
  int parent = -1;  // -1 only for the root, which is infinity
  // rho to the parent; empty when the parent is infinity (or for the root).
  std::optional<Rational> edge_length;
  std::vector<int> children;
  int fiber_degree = 0;  // deg of P^n at leaves of L_n, 0 elsewhere
  int level = -1;        // smallest k with the point in L_k, -1 for branch points
};

// Finite subtree of the Berkovich line containing infinity, stored as a
// rooted tree: node 0 is infinity and every other node hangs below it.
class DynTree {
 public:
  static constexpr int kRoot = 0;

  DynTree();

  // Inserts x (a Ball), splitting edges and adding the branch point where
  // needed. Returns the id of x, reusing an existing node.
  int insert(const BerkPoint& x);
  // Node id of x, or -1.
  int find(const BerkPoint& x) const;

  std::size_t size() const { return nodes_.size(); }
  const TreeNode& node(int id) const { return nodes_.at(static_cast<std::size_t>(id)); }
  const BerkPoint& point(int id) const { return node(id).point; }
  // The unique child of infinity, or -1 for the bare root.
  int top() const;

  int valency(int id) const;
  // Ends and branch points, infinity included; sorted ids.
  std::vector<int> vertex_set() const;
  // Childless nodes other than infinity.
  std::vector<int> leaves() const;
  // Ids in the closed subtree below id, in preorder.
  std::vector<int> subtree(int id) const;
  bool in_subtree(int id, int ancestor) const;
  // Tangent directions of the tree at a node: up first (unless root), then
  // one per child in insertion order.
  std::vector<Direction> directions(int id) const;

  // Nearest point of the tree to x. For x on an edge this is x itself.
  BerkPoint retract(const BerkPoint& x) const;
  bool contains(const BerkPoint& x) const;

  int level = 0;
  bool simple = false;

  void set_fiber_degree(int id, int deg) { nodes_.at(static_cast<std::size_t>(id)).fiber_degree = deg; }
  void set_level(int id, int k);

 private:
  void relink(int child, int parent);

  std::vector<TreeNode> nodes_;
};

// Signed atomic measure on tree nodes.
using TreeMeasure = std::map<int, Rational>;
Rational total_mass(const TreeMeasure& m);
// Drops zero atoms.
TreeMeasure pruned(const TreeMeasure& m);

// A function on the tree, affine on edges, given by its node values, plus
// its slope per unit distance moving up the infinite edge.
struct PAFunction {
  std::map<int, Rational> values;
  Rational slope_inf;
};

TreeMeasure valency_measure(const DynTree& t);
TreeMeasure laplacian(const DynTree& t, const PAFunction& f);
// Retraction of x onto the subtree t of some larger tree.
inline BerkPoint retraction(const DynTree& t, const BerkPoint& x) { return t.retract(x); }

std::string to_dot(const DynTree& t);

// Fibers L_k = P^{-k}(xi_B) computed once and shared by every level.
class TreeFamily {
 public:
  explicit TreeFamily(Poly P, long leaf_cap = 4096);

  const Poly& poly() const { return P_; }
  const BasePoint& base() const { return base_; }
  const std::vector<FiberEntry>& fiber(int k);
  // A level whose fiber could not be computed fails again without retrying.
  const DynTree& tree(int n);

 private:
  Poly P_;
  long cap_;
  BasePoint base_;
  std::vector<std::vector<FiberEntry>> levels_;
  std::map<int, DynTree> trees_;
  int failed_level_ = -1;
  std::string failure_;
};

DynTree build_tree(const Poly& P, int n, long leaf_cap = 4096);

}  // namespace berktree
