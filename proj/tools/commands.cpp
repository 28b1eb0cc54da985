#include "commands.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "symqt/error.hpp"
#include "symqt/measurement.hpp"
#include "symqt/permissibility.hpp"
#include "symqt/rng.hpp"
#include "symqt/spin.hpp"
#include "symqt/triangle.hpp"

namespace symqt::cli {

using json = nlohmann::ordered_json;

int guarded(const std::function<int()>& fn, std::ostream& err) {
  try {
    return fn();
  } catch (const ValidationError& e) {
    err << "validation error: " << e.what() << "\n";
    return kValidation;
  } catch (const LimitError& e) {
    err << "limit exceeded: " << e.what() << "\n";
    return kValidation;
  } catch (const ResidualError& e) {
    err << "residual above tolerance: " << e.what() << "\n";
    return kResidual;
  } catch (const HypothesisError& e) {
    err << "hypothesis violated: " << e.what() << "\n";
    return kHypothesis;
  } catch (const json::exception& e) {
    err << "validation error: " << e.what() << "\n";
    return kValidation;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kFailure;
  }
}

std::string bundled_model_path() { return std::string(SYMQT_DATA_DIR) + "/s3_triangle.json"; }

namespace {

ModelDocument load(const std::string& path) { return load_model_file(path.empty() ? bundled_model_path() : path); }

json names_of(const GroupAction& act, const std::vector<int>& elems) {
  json j = json::array();
  for (int g : elems) j.push_back(act.group().name(g));
  return j;
}

json point_lists(const GroupAction& act, const Partition& p) {
  json j = json::array();
  for (const auto& blk : p) {
    json b = json::array();
    for (int x : blk) b.push_back(act.point_name(x));
    j.push_back(b);
  }
  return j;
}

std::string witness_text(const ParametricFunction& th, const GroupAction& act, const Witness& w) {
  auto side = [&](int phi) {
    int img = act.act(w.g, phi);
    return th.name() + "(" + act.group().name(w.g) + " " + std::to_string(phi + 1) + ") = " + th.name() + "(" +
           std::to_string(img + 1) + ") = " + th.labels()[img];
  };
  return side(w.phi1) + ", " + side(w.phi2);
}

// Diagonal operator of the encoded parameter on functions over the points.
Observable l2_observable(const ParametricFunction& th, const std::vector<double>& q) {
  QOperator A;
  A.basis_tag = "L2";
  A.hermitian = true;
  A.matrix = Mat::Zero(th.size(), th.size());
  for (int x = 0; x < th.size(); ++x) A.matrix(x, x) = q[th.index(x)];
  return make_observable(th, q, A);
}

std::vector<double> value_indices(const ParametricFunction& th) {
  std::vector<double> q;
  for (int k = 0; k < th.value_count(); ++k) q.push_back(k);
  return q;
}

std::vector<double> parse_q(const ParametricFunction& th, const std::string& spec) {
  std::vector<double> q(th.value_count(), 0.0);
  std::vector<char> seen(th.value_count(), 0);
  std::stringstream ss(spec);
  std::string item;
  while (std::getline(ss, item, ',')) {
    auto eq = item.find('=');
    if (eq == std::string::npos) throw ValidationError("q entry '" + item + "' must look like label=value");
    std::string label = item.substr(0, eq);
    int k = th.value_index(label);
    if (k < 0) throw ValidationError("unknown label '" + label + "' for " + th.name());
    try {
      size_t used = 0;
      q[k] = std::stod(item.substr(eq + 1), &used);
      if (used != item.size() - eq - 1) throw std::invalid_argument("trailing");
    } catch (const std::logic_error&) {
      throw ValidationError("q value for '" + label + "' is not a number");
    }
    seen[k] = 1;
  }
  for (int k = 0; k < th.value_count(); ++k)
    if (!seen[k]) throw ValidationError("q lacks a value for '" + th.value(k) + "'");
  return q;
}

json spectrum_table(const Observable& obs) {
  json s = json::array();
  for (size_t c = 0; c < obs.clusters.size(); ++c) {
    json e;
    e["value"] = obs.clusters[c].value;
    e["label"] = obs.cluster_value[c] >= 0 ? json(obs.theta.value(obs.cluster_value[c])) : json();
    e["multiplicity"] = obs.clusters[c].multiplicity();
    s.push_back(e);
  }
  return s;
}

double parse_double(const std::string& s, const std::string& what) {
  try {
    size_t used = 0;
    double v = std::stod(s, &used);
    if (used != s.size() || !std::isfinite(v)) throw std::invalid_argument("trailing");
    return v;
  } catch (const std::logic_error&) {
    throw ValidationError(what + " '" + s + "' is not a number");
  }
}

std::string trim(const std::string& s) {
  auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

}  // namespace

StateSpace state_space(const ModelDocument& doc) {
  Representation reg = regular_representation(*doc.action);
  auto blocks = decompose(reg);
  StateSpaceSelector sel;
  if (doc.state_space) {
    sel = *doc.state_space;
  } else {
    sel.irrep_dim = 1;
    for (const auto& b : blocks)
      if (b.dim() > 1) {
        sel.irrep_dim = b.dim();
        break;
      }
  }
  StateSpace ss;
  int copy = 0;
  bool found = false;
  for (const auto& b : blocks)
    if (b.dim() == sel.irrep_dim && copy++ == sel.copy) {
      ss.M = b;
      found = true;
      break;
    }
  if (!found)
    throw ValidationError("state_space selects copy " + std::to_string(sel.copy) + " of a " +
                          std::to_string(sel.irrep_dim) + "-dim irreducible block, which does not exist");
  Representation rm = restrict_representation(reg, ss.M.basis);
  const int d = rm.dim();
  Vec f0 = Vec::Zero(d);
  f0(0) = 1.0;
  // eigenvector of the first element with a simple spectrum, largest eigenvalue argument
  for (int g = 1; g < rm.group().order() && d > 1; ++g) {
    Eigen::ComplexEigenSolver<Mat> es(rm(g));
    const auto& ev = es.eigenvalues();
    bool simple = true;
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < i; ++j) simple = simple && std::abs(ev(i) - ev(j)) > 1e-6;
    if (!simple) continue;
    int pick = 0;
    for (int i = 1; i < d; ++i)
      if (std::arg(ev(i)) > std::arg(ev(pick))) pick = i;
    f0 = es.eigenvectors().col(pick).normalized();
    break;
  }
  ss.family = coherent_family(rm, canonical_phase(f0), *doc.action, 0, "M");
  return ss;
}

json analyze_report(const ModelDocument& doc) {
  const GroupAction& act = *doc.action;
  const Subgroup G = full_subgroup(act.group_ptr());
  json r;
  r["group"] = {{"order", act.group().order()}, {"elements", act.group().names()}};
  r["action"] = {{"points", act.point_names()},
                 {"transitive", is_transitive(act, G)},
                 {"exact", is_exact(act, G)},
                 {"orbits", point_lists(act, orbits(act, G))}};
  json dims = json::array();
  for (const auto& b : decompose(regular_representation(act))) dims.push_back(b.dim());
  r["regular_decomposition"] = dims;
  json params = json::array();
  for (const auto& th : doc.parameters) {
    json p;
    p["name"] = th.name();
    p["values"] = th.values();
    auto pr = check_permissible(th, act, G);
    p["permissible"] = pr.permissible;
    json ws = json::array();
    for (const auto& w : pr.witnesses) {
      ws.push_back({{"g", act.group().name(w.g)},
                    {"points", {w.phi1 + 1, w.phi2 + 1}},
                    {"images", {act.act(w.g, w.phi1) + 1, act.act(w.g, w.phi2) + 1}},
                    {"labels", {th.labels()[act.act(w.g, w.phi1)], th.labels()[act.act(w.g, w.phi2)]}},
                    {"text", witness_text(th, act, w)}});
    }
    p["witnesses"] = ws;
    Subgroup ga = maximal_permissible_subgroup(th, act);
    p["maximal_subgroup"] = names_of(act, ga.members);
    p["maximal_subgroup_orbits"] = point_lists(act, orbits(act, ga));
    InducedGroup ig = induced_group(th, act, ga);
    json perms = json::array();
    for (const auto& row : ig.table) {
      json m = json::object();
      for (int k = 0; k < th.value_count(); ++k) m[th.value(k)] = th.value(row[k]);
      perms.push_back(m);
    }
    p["induced_group"] = {{"elements", names_of(act, ga.members)}, {"value_maps", perms}, {"image_order", ig.image().size()}};
    p["invariant_subspace_dim"] = parametric_invariant_subspace(th, act, ga).dim();
    auto hs = haar_split_check(th, act, ga);
    json vo = json::array();
    for (const auto& o : hs.value_orbits) {
      json b = json::array();
      for (int k : o) b.push_back(th.value(k));
      vo.push_back(b);
    }
    p["haar_split"] = {{"ok", hs.ok}, {"level_set_sizes", hs.level_set_sizes}, {"value_orbits", vo}, {"problems", hs.problems}};
    params.push_back(p);
  }
  r["parameters"] = params;
  if (!doc.parameters.empty()) {
    r["frame"] = is_frame(doc.parameters);
    r["consistent"] = is_consistent(doc.parameters, act);
    json ord = json::array();
    for (size_t i = 0; i < doc.parameters.size(); ++i)
      for (size_t j = i + 1; j < doc.parameters.size(); ++j)
        ord.push_back({{"first", doc.parameters[i].name()},
                       {"second", doc.parameters[j].name()},
                       {"ordering", to_string(compare(doc.parameters[i], doc.parameters[j]))}});
    r["orderings"] = ord;
    try {
      ParametricFunction psi = minimal_hyperparameter(doc.parameters, act);
      r["minimal_hyperparameter"] = psi.indices();
    } catch (const LimitError& e) {
      r["minimal_hyperparameter"] = {{"skipped", e.what()}};
    }
  }
  return r;
}

json spectrum_report(const ModelDocument& doc, const std::string& parameter, const SpectrumOptions& opt) {
  if (opt.probes < 1) throw ValidationError("need at least one probe");
  const ParametricFunction& th = doc.parameter(parameter);
  StateSpace ss = state_space(doc);
  CounterRng rng(opt.seed, 0);
  std::vector<std::vector<double>> probes;
  for (int p = 0; p < opt.probes; ++p) {
    std::vector<double> eta;
    for (int x = 0; x < th.size(); ++x) eta.push_back(rng.uniform());
    probes.push_back(eta);
  }
  SpectrumTheoremReport t8 = verify_spectrum_theorem(th, ss.family, ss.M.basis, *doc.action, probes, doc.encoding(th), opt.search);
  json r;
  r["parameter"] = parameter;
  r["search"] = opt.search == PrespectrumSearch::OrbitUnions ? "orbit_unions" : "all_subsets";
  r["state_space"] = {{"dim", ss.M.dim()}, {"basis", matrix_to_json(ss.M.basis)}};
  r["probes"] = probes;
  r["seed"] = opt.seed;
  r["spectrum_theorem"] = to_json(t8, th);
  return r;
}

json operator_report(const ModelDocument& doc, const std::string& parameter, const std::string& q_spec,
                     const std::string& space) {
  const ParametricFunction& th = doc.parameter(parameter);
  std::vector<double> q = q_spec.empty() ? doc.encoding(th) : parse_q(th, q_spec);
  Observable obs;
  if (space == "M") {
    StateSpace ss = state_space(doc);
    SolveOptions so;
    so.throw_on_residual = false;
    obs = make_observable(th, q, operator_for_parameter(ss.family, th, q, so));
  } else if (space == "L2") {
    obs = l2_observable(th, q);
  } else {
    throw ValidationError("space must be M or L2, not '" + space + "'");
  }
  json r;
  r["parameter"] = parameter;
  r["space"] = space;
  json qj = json::object();
  for (int k = 0; k < th.value_count(); ++k) qj[th.value(k)] = q[k];
  r["q"] = qj;
  r["hermitian"] = obs.op.hermitian && max_abs(obs.op.matrix - obs.op.matrix.adjoint()) <= 1e-9;
  r["residual"] = obs.op.residual;
  r["within_tolerance"] = obs.op.residual <= kSolveTol;
  r["nullity"] = obs.op.nullity;
  r["matrix"] = matrix_to_json(obs.op.matrix);
  r["spectrum"] = spectrum_table(obs);
  return r;
}

json transition_report(const ModelDocument& doc, const std::string& param_a, const std::string& value_a,
                       const std::string& param_b) {
  const ParametricFunction& ta = doc.parameter(param_a);
  const ParametricFunction& tb = doc.parameter(param_b);
  Observable oa = l2_observable(ta, value_indices(ta));
  Observable ob = l2_observable(tb, value_indices(tb));
  State s = state_at(oa, value_a);
  auto p = outcome_probabilities(s, ob);
  json r;
  r["from"] = {{"parameter", param_a}, {"value", value_a}};
  r["to"] = param_b;
  json pj = json::object();
  for (int k = 0; k < tb.value_count(); ++k) pj[tb.value(k)] = p[k];
  r["probabilities"] = pj;
  return r;
}

namespace {

const char* kTriangleHelp =
    "commands:\n"
    "  open a|b|c|top   open a window and read it\n"
    "  state            current probabilities at every window\n"
    "  history          transcript as JSON lines\n"
    "  reset            put the triangle back in a fresh sphere\n"
    "  quit             leave\n";

json triangle_state(const TriangleModel& t) {
  json j;
  json pts = json::array();
  for (int x : t.support) pts.push_back(t.action().point_name(x));
  j["support"] = pts;
  j["last"] = t.last ? json(to_string(*t.last)) : json();
  j["step"] = t.step;
  json w = json::object();
  DensityOperator rho = t.state();
  for (Window win : {Window::A, Window::B, Window::C, Window::Top}) {
    const Observable& o = t.observable(win);
    json p = json::object();
    for (int k = 0; k < o.theta.value_count(); ++k) p[o.theta.value(k)] = probability(rho, o, {o.theta.value(k)});
    w[to_string(win)] = p;
  }
  j["windows"] = w;
  return j;
}

std::vector<json> read_transcript(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open transcript '" + path + "'");
  std::vector<json> recs;
  std::string line;
  int n = 0;
  while (std::getline(in, line)) {
    ++n;
    if (trim(line).empty()) continue;
    try {
      recs.push_back(json::parse(line));
    } catch (const json::parse_error& e) {
      throw ValidationError("transcript line " + std::to_string(n) + " is not JSON: " + e.what());
    }
  }
  return recs;
}

}  // namespace

int triangle_repl(std::istream& in, std::ostream& out, bool sealed_top, std::uint64_t seed,
                  const std::optional<std::string>& replay_path) {
  TriangleModel t = replay_path ? triangle_replay(read_transcript(*replay_path), sealed_top, seed)
                                : triangle_new(sealed_top, seed);
  std::string line;
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    std::string cmd, arg, extra;
    ls >> cmd >> arg >> extra;
    if (cmd.empty()) continue;
    if (cmd == "quit" || cmd == "exit") break;
    if (cmd == "open" && !arg.empty() && extra.empty()) {
      Window w;
      try {
        w = parse_window(arg);
      } catch (const ValidationError& e) {
        out << e.what() << "\n" << kTriangleHelp;
        continue;
      }
      if (w == Window::Top && t.sealed_top) {
        out << "refused: the top window is sealed\n";
        continue;
      }
      auto [obs, next] = triangle_open_window(t, w);
      t = std::move(next);
      out << to_json(obs).dump() << "\n";
      out << triangle_state(t).dump() << "\n";
    } else if (cmd == "state" && arg.empty()) {
      out << triangle_state(t).dump() << "\n";
    } else if (cmd == "history" && arg.empty()) {
      for (const auto& r : t.history) out << r.dump() << "\n";
    } else if (cmd == "reset" && arg.empty()) {
      t = triangle_new(sealed_top, seed);
      out << triangle_state(t).dump() << "\n";
    } else if (cmd == "help" && arg.empty()) {
      out << kTriangleHelp;
    } else {
      out << "unknown command: " << trim(line) << "\n" << kTriangleHelp;
    }
  }
  return kOk;
}

std::vector<double> parse_angles(const std::string& spec) {
  std::vector<double> out;
  std::stringstream ss(spec);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_double(trim(item), "angle"));
  if (out.empty()) throw ValidationError("no angles given");
  return out;
}

std::vector<double> parse_sweep(const std::string& spec) {
  std::vector<std::string> parts;
  std::stringstream ss(spec);
  std::string item;
  while (std::getline(ss, item, ':')) parts.push_back(trim(item));
  if (parts.size() != 3) throw ValidationError("sweep must look like start:stop:step, got '" + spec + "'");
  double a = parse_double(parts[0], "sweep start"), b = parse_double(parts[1], "sweep stop"),
         h = parse_double(parts[2], "sweep step");
  if (h <= 0.0) throw ValidationError("sweep step must be positive");
  if (b < a) throw ValidationError("sweep stop is below its start");
  const double count = std::floor((b - a) / h + 1e-9) + 1;
  if (count > 1e6) throw ValidationError("sweep has more than a million points");
  std::vector<double> out;
  for (long k = 0; k < static_cast<long>(count); ++k) out.push_back(a + k * h);
  return out;
}

void epr_csv(const std::vector<double>& angles, long long samples, std::uint64_t seed, std::ostream& out) {
  if (samples < 1) throw ValidationError("need at least one sample");
  out << "u,exact,mc_estimate,std_error,n\n";
  CounterRng root(seed, 7);
  char buf[256];
  for (size_t i = 0; i < angles.size(); ++i) {
    const double u = angles[i];
    EprEstimate e = epr_correlation_mc(u, samples, root.substream(i)());
    std::snprintf(buf, sizeof buf, "%.12g,%.12g,%.12g,%.12g,%lld\n", u, epr_correlation_exact(u), e.estimate,
                  e.std_error, e.n);
    out << buf;
  }
}

int cmd_analyze(const std::string& path, std::ostream& out) {
  out << analyze_report(load(path)).dump(2) << "\n";
  return kOk;
}

int cmd_spectrum(const std::string& path, const std::string& parameter, const SpectrumOptions& opt, std::ostream& out) {
  json r = spectrum_report(load(path), parameter, opt);
  out << r.dump(2) << "\n";
  return r["spectrum_theorem"]["holds"].get<bool>() ? kOk : kHypothesis;
}

int cmd_operator(const std::string& path, const std::string& parameter, const std::string& q_spec,
                 const std::string& space, std::ostream& out) {
  json r = operator_report(load(path), parameter, q_spec, space);
  out << r.dump(2) << "\n";
  return r["within_tolerance"].get<bool>() ? kOk : kResidual;
}

int cmd_transition(const std::string& path, const std::string& param_a, const std::string& value_a,
                   const std::string& param_b, std::ostream& out) {
  out << transition_report(load(path), param_a, value_a, param_b).dump(2) << "\n";
  return kOk;
}

}  // namespace symqt::cli
