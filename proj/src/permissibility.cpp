#include "symqt/permissibility.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <set>

#include "symqt/error.hpp"

namespace symqt {

namespace {

bool preserves_partition(const ParametricFunction& theta, const GroupAction& action, int g, Witness* w) {
  const int m = theta.size();
  for (int x = 0; x < m; ++x)
    for (int y = x + 1; y < m; ++y)
      if (theta.index(x) == theta.index(y) && theta.index(action.act(g, x)) != theta.index(action.act(g, y))) {
        if (w) *w = {x, y, g};
        return false;
      }
  return true;
}

void require_size(const ParametricFunction& theta, const GroupAction& action) {
  if (theta.size() != action.set_size())
    throw ValidationError("parametric function " + theta.name() + " has " + std::to_string(theta.size()) +
                          " labels but the action set has " + std::to_string(action.set_size()) + " points");
}

// Labels relabeled by first appearance.
std::vector<int> canonical_rgs(const std::vector<int>& idx) {
  std::map<int, int> ren;
  std::vector<int> out;
  for (int v : idx) {
    auto it = ren.find(v);
    if (it == ren.end()) it = ren.emplace(v, static_cast<int>(ren.size())).first;
    out.push_back(it->second);
  }
  return out;
}

bool refines(const std::vector<int>& fine, const std::vector<int>& coarse) {
  std::map<int, int> f;
  for (size_t x = 0; x < fine.size(); ++x) {
    auto it = f.emplace(fine[x], coarse[x]).first;
    if (it->second != coarse[x]) return false;
  }
  return true;
}

}  // namespace

PermissibilityResult check_permissible(const ParametricFunction& theta, const GroupAction& action, const Subgroup& h) {
  require_size(theta, action);
  PermissibilityResult r;
  for (int g : h.members) {
    Witness w;
    if (!preserves_partition(theta, action, g, &w)) {
      r.permissible = false;
      r.witnesses.push_back(w);
    }
  }
  return r;
}

bool is_permissible(const ParametricFunction& theta, const GroupAction& action, const Subgroup& h) {
  return check_permissible(theta, action, h).permissible;
}

bool is_permissible(const ParametricFunction& theta, const GroupAction& action) {
  return is_permissible(theta, action, full_subgroup(action.group_ptr()));
}

Subgroup maximal_permissible_subgroup(const ParametricFunction& theta, const GroupAction& action) {
  require_size(theta, action);
  const FiniteGroup& G = action.group();
  Subgroup s{action.group_ptr(), {}};
  for (int g = 0; g < G.order(); ++g)
    if (preserves_partition(theta, action, g, nullptr) && preserves_partition(theta, action, G.inv(g), nullptr))
      s.members.push_back(g);
  if (!is_subgroup(G, s.members)) throw Error("maximal permissible set is not a subgroup");
  for (int g = 0; g < G.order(); ++g) {
    if (s.contains(g)) continue;
    auto gens = s.members;
    gens.push_back(g);
    if (is_permissible(theta, action, subgroup_generated(action.group_ptr(), gens)))
      throw Error("maximality check failed for element " + std::to_string(g));
  }
  return s;
}

int InducedGroup::act(int g, int value) const {
  auto it = std::lower_bound(base.members.begin(), base.members.end(), g);
  if (it == base.members.end() || *it != g) throw ValidationError("element is not in the induced group's base");
  return table[it - base.members.begin()][value];
}

std::vector<std::vector<int>> InducedGroup::image() const {
  std::set<std::vector<int>> s(table.begin(), table.end());
  return {s.begin(), s.end()};
}

InducedGroup induced_group(const ParametricFunction& theta, const GroupAction& action, const Subgroup& h) {
  auto pr = check_permissible(theta, action, h);
  if (!pr.permissible) {
    const Witness& w = pr.witnesses.front();
    throw HypothesisError(theta.name() + " is not permissible: witness (" + action.point_name(w.phi1) + ", " +
                          action.point_name(w.phi2) + ", " + action.group().name(w.g) + ")");
  }
  InducedGroup ig;
  ig.base = h;
  ig.value_count = theta.value_count();
  for (int g : h.members) {
    std::vector<int> row(theta.value_count(), -1);
    for (int x = 0; x < theta.size(); ++x) row[theta.index(x)] = theta.index(action.act(g, x));
    ig.table.push_back(std::move(row));
  }
  const FiniteGroup& G = action.group();
  for (size_t i = 0; i < h.members.size(); ++i)
    for (size_t j = 0; j < h.members.size(); ++j) {
      int gh = G.mul(h.members[i], h.members[j]);
      for (int k = 0; k < ig.value_count; ++k)
        if (ig.act(gh, k) != ig.table[i][ig.table[j][k]]) throw Error("induced map is not a homomorphism");
    }
  return ig;
}

std::string to_string(Ordering o) {
  switch (o) {
    case Ordering::Below: return "below";
    case Ordering::Above: return "above";
    case Ordering::Equivalent: return "equivalent";
    case Ordering::Incomparable: return "incomparable";
  }
  return "?";
}

Ordering compare(const ParametricFunction& theta1, const ParametricFunction& theta2) {
  if (theta1.size() != theta2.size()) throw ValidationError("parametric functions live on different sets");
  bool below = refines(theta2.indices(), theta1.indices());
  bool above = refines(theta1.indices(), theta2.indices());
  if (below && above) return Ordering::Equivalent;
  if (below) return Ordering::Below;
  if (above) return Ordering::Above;
  return Ordering::Incomparable;
}

ParametricFunction compound(const std::vector<ParametricFunction>& thetas, std::string name) {
  if (thetas.empty()) throw ValidationError("compound needs at least one parametric function");
  std::vector<std::string> labels(thetas[0].size());
  std::string nm = name;
  for (size_t i = 0; i < thetas.size(); ++i) {
    if (thetas[i].size() != thetas[0].size()) throw ValidationError("parametric functions live on different sets");
    if (name.empty()) nm += (i ? "," : "(") + thetas[i].name();
    for (int x = 0; x < thetas[i].size(); ++x) labels[x] += (i ? "," : "") + thetas[i].labels()[x];
  }
  if (name.empty()) nm += ")";
  return ParametricFunction(nm, std::move(labels));
}

InvariantSubspace parametric_invariant_subspace(const ParametricFunction& theta, const GroupAction& action,
                                                const Subgroup& h) {
  require_size(theta, action);
  if (!is_permissible(theta, action, h))
    throw HypothesisError(theta.name() + " is not permissible: its level-set span is not invariant");
  InvariantSubspace s;
  s.ambient_dim = action.set_size();
  s.basis = Mat::Zero(action.set_size(), theta.value_count());
  for (int k = 0; k < theta.value_count(); ++k) {
    auto ls = theta.level_set(k);
    for (int x : ls) s.basis(x, k) = 1.0 / std::sqrt(static_cast<double>(ls.size()));
  }
  Representation reg = regular_representation(action);
  for (int g : h.members)
    if (span_excess(s.basis, reg(g) * s.basis) > 1e-9) throw Error("parametric subspace failed the invariance check");
  s.irreducible = theta.value_count() == 1;
  return s;
}

InvariantSubspace parametric_invariant_subspace(const ParametricFunction& theta, const GroupAction& action) {
  return parametric_invariant_subspace(theta, action, full_subgroup(action.group_ptr()));
}

bool is_frame(const std::vector<ParametricFunction>& thetas) {
  ParametricFunction joint = compound(thetas);
  return joint.value_count() == joint.size();
}

bool is_consistent(const std::vector<ParametricFunction>& thetas, const GroupAction& action) {
  if (thetas.empty()) throw ValidationError("is_consistent needs at least one parametric function");
  std::vector<int> gens;
  for (const auto& t : thetas) {
    auto s = maximal_permissible_subgroup(t, action);
    gens.insert(gens.end(), s.members.begin(), s.members.end());
  }
  return subgroup_generated(action.group_ptr(), gens).size() == action.group().order();
}

ParametricFunction minimal_hyperparameter(const std::vector<ParametricFunction>& thetas, const GroupAction& action,
                                          int max_points) {
  if (thetas.empty()) throw ValidationError("minimal_hyperparameter needs at least one parametric function");
  const int m = action.set_size();
  if (m > max_points)
    throw LimitError("partition search over " + std::to_string(m) + " points exceeds the cap of " +
                     std::to_string(max_points));
  for (const auto& t : thetas) require_size(t, action);
  const Subgroup G = full_subgroup(action.group_ptr());
  std::vector<Subgroup> ga;
  for (const auto& t : thetas) ga.push_back(maximal_permissible_subgroup(t, action));
  const Partition blocks = compound(thetas).level_sets();

  std::vector<std::vector<int>> candidates;
  std::vector<int> labels(m, -1);
  // Each block of the joint partition is split independently by a restricted growth string.
  std::function<void(size_t, int)> over_blocks;
  std::function<void(size_t, size_t, int, int)> over_points = [&](size_t b, size_t i, int base, int used) {
    const auto& blk = blocks[b];
    if (i == blk.size()) {
      over_blocks(b + 1, base + used);
      return;
    }
    for (int k = 0; k <= used; ++k) {
      labels[blk[i]] = base + k;
      over_points(b, i + 1, base, std::max(used, k + 1));
    }
  };
  over_blocks = [&](size_t b, int next) {
    if (b == blocks.size()) {
      ParametricFunction psi = ParametricFunction::from_indices("psi", labels);
      if (!is_permissible(psi, action, G)) return;
      for (size_t a = 0; a < thetas.size(); ++a) {
        // theta_a as a function on the blocks of psi must stay permissible under G_a.
        for (int g : ga[a].members)
          for (int x = 0; x < m; ++x)
            for (int y = 0; y < m; ++y)
              if (thetas[a].index(x) == thetas[a].index(y) &&
                  thetas[a].index(action.act(g, x)) != thetas[a].index(action.act(g, y)))
                return;
      }
      candidates.push_back(canonical_rgs(labels));
      return;
    }
    over_points(b, 0, next, 0);
  };
  over_blocks(0, 0);
  if (candidates.empty()) throw Error("no permissible hyperparameter refines the given parametric functions");

  std::vector<std::vector<int>> minimal;
  for (const auto& c : candidates) {
    bool has_coarser = false;
    for (const auto& d : candidates)
      if (d != c && refines(c, d) && !refines(d, c)) {
        has_coarser = true;
        break;
      }
    if (!has_coarser) minimal.push_back(c);
  }
  std::sort(minimal.begin(), minimal.end());
  return ParametricFunction::from_indices("psi", minimal.front());
}

HaarSplitReport haar_split_check(const ParametricFunction& theta, const GroupAction& action, const Subgroup& h) {
  InducedGroup ig = induced_group(theta, action, h);
  HaarSplitReport rep;
  for (int k = 0; k < theta.value_count(); ++k) rep.level_set_sizes.push_back(static_cast<int>(theta.level_set(k).size()));
  std::vector<int> seen(theta.value_count(), 0);
  for (int k = 0; k < theta.value_count(); ++k) {
    if (seen[k]) continue;
    std::set<int> orb;
    for (const auto& row : ig.table) orb.insert(row[k]);
    for (int v : orb) seen[v] = 1;
    rep.value_orbits.emplace_back(orb.begin(), orb.end());
  }
  const FiniteGroup& G = action.group();
  for (const auto& orb : rep.value_orbits) {
    const int k0 = orb.front();
    Subgroup s0 = intersect(level_set_stabilizer(action, theta, theta.value(k0)), h);
    for (int k : orb) {
      if (rep.level_set_sizes[k] != rep.level_set_sizes[k0]) {
        rep.ok = false;
        rep.problems.push_back("level set of '" + theta.value(k) + "' has size " + std::to_string(rep.level_set_sizes[k]) +
                               ", expected " + std::to_string(rep.level_set_sizes[k0]));
      }
      Subgroup sk = intersect(level_set_stabilizer(action, theta, theta.value(k)), h);
      for (int x : theta.level_set(k))
        for (int g : sk.members)
          if (theta.index(action.act(g, x)) != k) {
            rep.ok = false;
            rep.problems.push_back("stabilizer of '" + theta.value(k) + "' leaves its level set");
          }
      for (int g : h.members) {
        if (ig.act(g, k0) != k) continue;
        // g carries the uniform measure on the level set of k0 onto the one of k.
        std::set<int> img;
        for (int x : theta.level_set(k0)) img.insert(action.act(g, x));
        auto ls = theta.level_set(k);
        if (img != std::set<int>(ls.begin(), ls.end())) {
          rep.ok = false;
          rep.problems.push_back("element " + G.name(g) + " does not map level set '" + theta.value(k0) + "' onto '" +
                                 theta.value(k) + "'");
        }
        if (!(conjugate(s0, g) == sk)) {
          rep.ok = false;
          rep.problems.push_back("stabilizer of '" + theta.value(k) + "' is not conjugate to that of '" +
                                 theta.value(k0) + "'");
        }
        break;
      }
    }
  }
  return rep;
}

HaarSplitReport haar_split_check(const ParametricFunction& theta, const GroupAction& action) {
  return haar_split_check(theta, action, full_subgroup(action.group_ptr()));
}

}  // namespace symqt
