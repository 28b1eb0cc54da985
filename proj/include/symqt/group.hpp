#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace symqt {

using Table = std::vector<std::vector<int>>;

// Finite group given by its full Cayley table, cayley[a][b] = ab.
class FiniteGroup {
 public:
  // Validates closure, identity, inverses and associativity.
  static std::shared_ptr<const FiniteGroup> from_cayley(Table cayley, std::vector<std::string> names = {});

  int order() const { return static_cast<int>(cayley_.size()); }
  int identity() const { return identity_; }
  int mul(int a, int b) const { return cayley_[a][b]; }
  int inv(int a) const { return inverses_[a]; }
  const Table& cayley() const { return cayley_; }
  const std::vector<int>& inverses() const { return inverses_; }
  const std::vector<std::string>& names() const { return names_; }
  const std::string& name(int g) const { return names_[g]; }

 private:
  FiniteGroup() = default;
  Table cayley_;
  int identity_ = 0;
  std::vector<int> inverses_;
  std::vector<std::string> names_;
};

using GroupPtr = std::shared_ptr<const FiniteGroup>;

GroupPtr trivial_group();
GroupPtr cyclic_group(int n);
// Dihedral group of order 2n: elements r^k (k < n) then r^k s.
GroupPtr dihedral_group(int n);
// Symmetric group on k letters, elements in lexicographic order of images.
GroupPtr symmetric_group(int k);
// Group on a set of permutations closed under composition, (p q)(i) = p(q(i)).
GroupPtr permutation_group(const std::vector<std::vector<int>>& perms, std::vector<std::string> names = {});

// Left action of a group on a finite set, table[g][x] = g x.
class GroupAction {
 public:
  GroupAction(GroupPtr group, Table table, std::vector<std::string> point_names = {});

  const FiniteGroup& group() const { return *group_; }
  GroupPtr group_ptr() const { return group_; }
  int set_size() const { return set_size_; }
  int act(int g, int x) const { return table_[g][x]; }
  const Table& table() const { return table_; }
  const std::vector<std::string>& point_names() const { return point_names_; }
  const std::string& point_name(int x) const { return point_names_[x]; }

 private:
  GroupPtr group_;
  int set_size_ = 0;
  Table table_;
  std::vector<std::string> point_names_;
};

// Action of a group on itself by left multiplication.
GroupAction regular_action(GroupPtr group);

// Subgroup as a sorted member list of its parent.
struct Subgroup {
  GroupPtr parent;
  std::vector<int> members;

  bool contains(int g) const;
  int size() const { return static_cast<int>(members.size()); }
  bool operator==(const Subgroup& o) const { return members == o.members; }
};

Subgroup full_subgroup(GroupPtr group);
bool is_subgroup(const FiniteGroup& group, const std::vector<int>& members);
Subgroup subgroup_generated(GroupPtr group, const std::vector<int>& generators);
Subgroup intersect(const Subgroup& a, const Subgroup& b);
bool is_normal(const Subgroup& h);
Subgroup conjugate(const Subgroup& h, int g);

using Partition = std::vector<std::vector<int>>;

Partition orbits(const GroupAction& action, const Subgroup& h);
bool is_transitive(const GroupAction& action, const Subgroup& h);
bool is_exact(const GroupAction& action, const Subgroup& h);

// Largest subgroup acting as a transformation group on the subset.
Subgroup restrict_group_to_subset(const GroupAction& action, const std::vector<int>& subset);

// Labeling of the points of a finite set; values indexed by first appearance.
class ParametricFunction {
 public:
  ParametricFunction() = default;
  ParametricFunction(std::string name, std::vector<std::string> labels,
                     std::optional<std::vector<std::string>> value_order = std::nullopt);
  // Labels from integers, names "0", "1", ...
  static ParametricFunction from_indices(std::string name, const std::vector<int>& idx);

  const std::string& name() const { return name_; }
  int size() const { return static_cast<int>(labels_.size()); }
  int value_count() const { return static_cast<int>(values_.size()); }
  const std::vector<std::string>& labels() const { return labels_; }
  const std::vector<std::string>& values() const { return values_; }
  int index(int x) const { return index_[x]; }
  const std::vector<int>& indices() const { return index_; }
  // Value index of a label, or -1.
  int value_index(const std::string& v) const;
  const std::string& value(int k) const { return values_[k]; }
  std::vector<int> level_set(int k) const;
  Partition level_sets() const;

 private:
  std::string name_;
  std::vector<std::string> labels_;
  std::vector<std::string> values_;
  std::vector<int> index_;
};

// G_theta: elements that map the level set of the value into level sets of theta
// consistently, i.e. theta(g x) = theta(x) on that level set.
Subgroup level_set_stabilizer(const GroupAction& action, const ParametricFunction& theta, const std::string& value);
// Intersection of the subgroups; throws HypothesisError if it is not normal in the parent.
Subgroup normal_core(const std::vector<Subgroup>& subgroups);

// Uniform Haar weight of the counting measure.
inline double haar_weight(const FiniteGroup& g) { return 1.0 / g.order(); }

}  // namespace symqt
