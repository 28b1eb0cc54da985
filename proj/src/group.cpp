#include "symqt/group.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>

#include "symqt/error.hpp"

namespace symqt {

namespace {

std::string cell(int a, int b) { return "cayley[" + std::to_string(a) + "][" + std::to_string(b) + "]"; }

}  // namespace

GroupPtr FiniteGroup::from_cayley(Table cayley, std::vector<std::string> names) {
  const int n = static_cast<int>(cayley.size());
  if (n == 0) throw ValidationError("group must have at least one element");
  for (int a = 0; a < n; ++a) {
    if (static_cast<int>(cayley[a].size()) != n)
      throw ValidationError("cayley row " + std::to_string(a) + " has length " + std::to_string(cayley[a].size()) +
                            ", expected " + std::to_string(n));
    for (int b = 0; b < n; ++b)
      if (cayley[a][b] < 0 || cayley[a][b] >= n)
        throw ValidationError(cell(a, b) + " = " + std::to_string(cayley[a][b]) + " is out of range");
  }
  // each element once per row and column
  for (int a = 0; a < n; ++a) {
    std::vector<int> row_seen(n, -1), col_seen(n, -1);
    for (int b = 0; b < n; ++b) {
      int r = cayley[a][b], c = cayley[b][a];
      if (row_seen[r] >= 0)
        throw ValidationError(cell(a, b) + " = " + std::to_string(r) + " repeats " + cell(a, row_seen[r]));
      if (col_seen[c] >= 0)
        throw ValidationError(cell(b, a) + " = " + std::to_string(c) + " repeats " + cell(col_seen[c], a));
      row_seen[r] = b;
      col_seen[c] = b;
    }
  }
  int e = -1;
  for (int a = 0; a < n && e < 0; ++a) {
    bool ok = true;
    for (int b = 0; b < n && ok; ++b) ok = cayley[a][b] == b && cayley[b][a] == b;
    if (ok) e = a;
  }
  if (e < 0) throw ValidationError("cayley table has no two-sided identity");
  std::vector<int> inv(n, -1);
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b)
      if (cayley[a][b] == e && cayley[b][a] == e) inv[a] = b;
    if (inv[a] < 0) throw ValidationError("element " + std::to_string(a) + " has no inverse in the cayley table");
  }
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        if (cayley[cayley[a][b]][c] != cayley[a][cayley[b][c]])
          throw ValidationError("cayley table is not associative at (" + std::to_string(a) + ", " + std::to_string(b) +
                                ", " + std::to_string(c) + ")");
  if (names.empty()) {
    for (int a = 0; a < n; ++a) names.push_back("g" + std::to_string(a + 1));
  } else if (static_cast<int>(names.size()) != n) {
    throw ValidationError("element name count does not match the group order");
  }
  auto g = std::shared_ptr<FiniteGroup>(new FiniteGroup());
  g->cayley_ = std::move(cayley);
  g->identity_ = e;
  g->inverses_ = std::move(inv);
  g->names_ = std::move(names);
  return g;
}

GroupPtr trivial_group() { return FiniteGroup::from_cayley({{0}}, {"e"}); }

GroupPtr cyclic_group(int n) {
  if (n < 1) throw ValidationError("cyclic group order must be positive");
  Table t(n, std::vector<int>(n));
  std::vector<std::string> names;
  for (int a = 0; a < n; ++a) {
    names.push_back("r" + std::to_string(a));
    for (int b = 0; b < n; ++b) t[a][b] = (a + b) % n;
  }
  return FiniteGroup::from_cayley(std::move(t), std::move(names));
}

GroupPtr dihedral_group(int n) {
  if (n < 1) throw ValidationError("dihedral parameter must be positive");
  // element (k, f) = r^k s^f, index k + n f; s r = r^{-1} s.
  const int N = 2 * n;
  Table t(N, std::vector<int>(N));
  std::vector<std::string> names;
  for (int a = 0; a < N; ++a) {
    int ka = a % n, fa = a / n;
    names.push_back(fa ? "r" + std::to_string(ka) + "s" : "r" + std::to_string(ka));
    for (int b = 0; b < N; ++b) {
      int kb = b % n, fb = b / n;
      int k = fa ? (ka - kb + n) % n : (ka + kb) % n;
      t[a][b] = k + n * (fa ^ fb);
    }
  }
  return FiniteGroup::from_cayley(std::move(t), std::move(names));
}

GroupPtr permutation_group(const std::vector<std::vector<int>>& perms, std::vector<std::string> names) {
  std::map<std::vector<int>, int> index;
  for (int i = 0; i < static_cast<int>(perms.size()); ++i) {
    if (!index.emplace(perms[i], i).second) throw ValidationError("duplicate permutation in group list");
  }
  const int n = static_cast<int>(perms.size());
  Table t(n, std::vector<int>(n));
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      std::vector<int> c(perms[b].size());
      for (size_t i = 0; i < c.size(); ++i) c[i] = perms[a][perms[b][i]];
      auto it = index.find(c);
      if (it == index.end()) throw ValidationError("permutation list is not closed under composition");
      t[a][b] = it->second;
    }
  return FiniteGroup::from_cayley(std::move(t), std::move(names));
}

GroupPtr symmetric_group(int k) {
  std::vector<int> p(k);
  std::iota(p.begin(), p.end(), 0);
  std::vector<std::vector<int>> perms;
  do perms.push_back(p);
  while (std::next_permutation(p.begin(), p.end()));
  return permutation_group(perms);
}

GroupAction::GroupAction(GroupPtr group, Table table, std::vector<std::string> point_names)
    : group_(std::move(group)), table_(std::move(table)), point_names_(std::move(point_names)) {
  const int n = group_->order();
  if (static_cast<int>(table_.size()) != n) throw ValidationError("action table needs one row per group element");
  set_size_ = static_cast<int>(table_[0].size());
  if (set_size_ == 0) throw ValidationError("action set must be non-empty");
  for (int g = 0; g < n; ++g) {
    if (static_cast<int>(table_[g].size()) != set_size_)
      throw ValidationError("action row " + std::to_string(g) + " has the wrong length");
    std::vector<char> seen(set_size_, 0);
    for (int x = 0; x < set_size_; ++x) {
      int y = table_[g][x];
      if (y < 0 || y >= set_size_)
        throw ValidationError("action[" + std::to_string(g) + "][" + std::to_string(x) + "] is out of range");
      if (seen[y]) throw ValidationError("action row " + std::to_string(g) + " is not a bijection");
      seen[y] = 1;
    }
  }
  for (int x = 0; x < set_size_; ++x)
    if (table_[group_->identity()][x] != x) throw ValidationError("identity does not fix point " + std::to_string(x));
  for (int g = 0; g < n; ++g)
    for (int h = 0; h < n; ++h)
      for (int x = 0; x < set_size_; ++x)
        if (table_[group_->mul(g, h)][x] != table_[g][table_[h][x]])
          throw ValidationError("action law fails for (g, h, x) = (" + std::to_string(g) + ", " + std::to_string(h) +
                                ", " + std::to_string(x) + ")");
  if (point_names_.empty()) {
    for (int x = 0; x < set_size_; ++x) point_names_.push_back(std::to_string(x + 1));
  } else if (static_cast<int>(point_names_.size()) != set_size_) {
    throw ValidationError("point name count does not match the action set size");
  }
}

GroupAction regular_action(GroupPtr group) {
  Table t = group->cayley();
  std::vector<std::string> names = group->names();
  return GroupAction(std::move(group), std::move(t), std::move(names));
}

bool Subgroup::contains(int g) const { return std::binary_search(members.begin(), members.end(), g); }

Subgroup full_subgroup(GroupPtr group) {
  Subgroup h{group, {}};
  h.members.resize(group->order());
  std::iota(h.members.begin(), h.members.end(), 0);
  return h;
}

bool is_subgroup(const FiniteGroup& group, const std::vector<int>& members) {
  std::set<int> s(members.begin(), members.end());
  if (!s.count(group.identity())) return false;
  for (int a : s) {
    if (!s.count(group.inv(a))) return false;
    for (int b : s)
      if (!s.count(group.mul(a, b))) return false;
  }
  return true;
}

Subgroup subgroup_generated(GroupPtr group, const std::vector<int>& generators) {
  const int n = group->order();
  for (int g : generators)
    if (g < 0 || g >= n) throw ValidationError("generator index " + std::to_string(g) + " is out of range");
  std::vector<char> in(n, 0);
  std::vector<int> members{group->identity()};
  in[group->identity()] = 1;
  for (size_t i = 0; i < members.size(); ++i) {
    for (int s : generators) {
      int p = group->mul(members[i], s);
      if (!in[p]) {
        in[p] = 1;
        members.push_back(p);
      }
    }
  }
  std::sort(members.begin(), members.end());
  return Subgroup{std::move(group), std::move(members)};
}

Subgroup intersect(const Subgroup& a, const Subgroup& b) {
  Subgroup r{a.parent, {}};
  std::set_intersection(a.members.begin(), a.members.end(), b.members.begin(), b.members.end(),
                        std::back_inserter(r.members));
  return r;
}

Subgroup conjugate(const Subgroup& h, int g) {
  const FiniteGroup& G = *h.parent;
  Subgroup r{h.parent, {}};
  for (int x : h.members) r.members.push_back(G.mul(G.mul(g, x), G.inv(g)));
  std::sort(r.members.begin(), r.members.end());
  return r;
}

bool is_normal(const Subgroup& h) {
  for (int g = 0; g < h.parent->order(); ++g)
    if (!(conjugate(h, g) == h)) return false;
  return true;
}

Partition orbits(const GroupAction& action, const Subgroup& h) {
  const int m = action.set_size();
  std::vector<int> owner(m, -1);
  Partition out;
  for (int x = 0; x < m; ++x) {
    if (owner[x] >= 0) continue;
    std::vector<int> block;
    for (int g : h.members) {
      int y = action.act(g, x);
      if (owner[y] < 0) {
        owner[y] = static_cast<int>(out.size());
        block.push_back(y);
      }
    }
    std::sort(block.begin(), block.end());
    out.push_back(std::move(block));
  }
  return out;
}

bool is_transitive(const GroupAction& action, const Subgroup& h) { return orbits(action, h).size() == 1; }

bool is_exact(const GroupAction& action, const Subgroup& h) {
  for (int g : h.members) {
    if (g == action.group().identity()) continue;
    for (int x = 0; x < action.set_size(); ++x)
      if (action.act(g, x) == x) return false;
  }
  return true;
}

Subgroup restrict_group_to_subset(const GroupAction& action, const std::vector<int>& subset) {
  if (subset.empty()) throw ValidationError("subset must be non-empty");
  std::vector<char> in(action.set_size(), 0);
  for (int x : subset) {
    if (x < 0 || x >= action.set_size()) throw ValidationError("subset point out of range");
    in[x] = 1;
  }
  const FiniteGroup& G = action.group();
  Subgroup r{action.group_ptr(), {}};
  for (int g = 0; g < G.order(); ++g) {
    bool ok = true;
    for (int x : subset) ok = ok && in[action.act(g, x)] && in[action.act(G.inv(g), x)];
    if (ok) r.members.push_back(g);
  }
  if (!is_subgroup(G, r.members)) throw Error("restricted set is not closed");
  return r;
}

ParametricFunction::ParametricFunction(std::string name, std::vector<std::string> labels,
                                       std::optional<std::vector<std::string>> value_order)
    : name_(std::move(name)), labels_(std::move(labels)) {
  if (value_order) {
    values_ = *value_order;
    std::set<std::string> s(values_.begin(), values_.end());
    if (s.size() != values_.size()) throw ValidationError("duplicate value in value order of " + name_);
  }
  for (const auto& l : labels_) {
    if (std::find(values_.begin(), values_.end(), l) == values_.end()) {
      if (value_order) throw ValidationError("label '" + l + "' of " + name_ + " is not in its value order");
      values_.push_back(l);
    }
  }
  for (const auto& l : labels_) index_.push_back(value_index(l));
}

ParametricFunction ParametricFunction::from_indices(std::string name, const std::vector<int>& idx) {
  std::vector<std::string> labels;
  for (int i : idx) labels.push_back(std::to_string(i));
  return ParametricFunction(std::move(name), std::move(labels));
}

int ParametricFunction::value_index(const std::string& v) const {
  auto it = std::find(values_.begin(), values_.end(), v);
  return it == values_.end() ? -1 : static_cast<int>(it - values_.begin());
}

std::vector<int> ParametricFunction::level_set(int k) const {
  std::vector<int> out;
  for (int x = 0; x < size(); ++x)
    if (index_[x] == k) out.push_back(x);
  return out;
}

Partition ParametricFunction::level_sets() const {
  Partition p;
  for (int k = 0; k < value_count(); ++k) {
    auto ls = level_set(k);
    if (!ls.empty()) p.push_back(std::move(ls));
  }
  return p;
}

Subgroup level_set_stabilizer(const GroupAction& action, const ParametricFunction& theta, const std::string& value) {
  int k = theta.value_index(value);
  if (k < 0) throw ValidationError("value '" + value + "' does not occur in " + theta.name());
  Subgroup r{action.group_ptr(), {}};
  auto ls = theta.level_set(k);
  for (int g = 0; g < action.group().order(); ++g) {
    bool ok = true;
    for (int x : ls) ok = ok && theta.index(action.act(g, x)) == k;
    if (ok) r.members.push_back(g);
  }
  return r;
}

Subgroup normal_core(const std::vector<Subgroup>& subgroups) {
  if (subgroups.empty()) throw ValidationError("normal_core needs at least one subgroup");
  Subgroup r = subgroups.front();
  for (size_t i = 1; i < subgroups.size(); ++i) r = intersect(r, subgroups[i]);
  if (!is_normal(r)) throw HypothesisError("intersection of the given subgroups is not normal");
  return r;
}

}  // namespace symqt
