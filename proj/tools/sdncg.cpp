#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "sdncg/sdncg.hpp"

using namespace sdncg;
using nlohmann::json;

namespace {

// Usage problems detected after CLI11 parsing; exit status 2.
struct usage_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Options {
  std::string alpha;
  std::string input;
  std::string host;
  std::string output;
  std::uint64_t seed = 1;
  std::size_t budget = 0;
  std::string policy = "first";
  std::string pivot = "best";
  std::string format = "text";
  unsigned workers = 1;

  // gen
  std::string family;
  int n = 0, d = 0, k = 0, c = 0;
  std::vector<int> sizes;
  std::string base;

  // sweep / campaign
  std::vector<std::string> alphas;
  int n_min = 0, n_max = 0;
  std::size_t hosts = 0;
  std::size_t max_edges = 0;
  std::string suite;
  int limit = 10;
};

Alpha alpha_of(const Options& o) {
  if (o.alpha.empty()) throw usage_error("--alpha is required");
  return Alpha::parse(o.alpha);
}

std::size_t budget_of(const Options& o, std::size_t fallback) { return o.budget > 0 ? o.budget : fallback; }

HostGraph input_graph(const Options& o) {
  if (o.input.empty()) throw usage_error("--input is required");
  return read_graph_file(o.input);
}

// The state is the --input graph; it lives inside --host when one is
// given and is its own host otherwise.
GameState input_state(const Options& o) {
  auto g = input_graph(o);
  if (o.host.empty()) return GameState::whole(share(g));
  auto host = share(read_graph_file(o.host));
  if (g.node_count() != host->node_count()) throw structural_error("state and host have different node counts");
  return GameState::from_edges(host, g.edges());
}

HostGraph state_graph(const GameState& s) { return HostGraph(s.node_count(), s.edges()); }

void emit_graph(std::ostream& out, const HostGraph& g, const std::string& format) {
  if (format == "json") out << graph_to_json(g).dump() << '\n';
  else write_graph_text(out, g);
}

json moves_json(const std::vector<Move>& moves) {
  json out = json::array();
  for (const auto& m : moves) out.push_back(to_string(m));
  return out;
}

Policy parse_policy(const std::string& s) {
  if (s == "first") return Policy::FirstImproving;
  if (s == "best") return Policy::BestImproving;
  return Policy::SeededRandom;
}

void cmd_gen(const Options& o, std::ostream& out) {
  auto family = constructions::parse_family(o.family);
  if (!family) throw usage_error("unknown family '" + o.family + "'");
  constructions::ConstructionSpec spec;
  spec.family = *family;
  spec.n = o.n;
  spec.d = o.d;
  spec.k = o.k;
  spec.c = o.c;
  spec.sizes = o.sizes;
  if (!o.alpha.empty()) spec.alpha = Alpha::parse(o.alpha).value();
  if (!o.base.empty()) spec.base = read_graph_file(o.base);
  emit_graph(out, constructions::build(spec), o.format);
}

void cmd_sw(const Options& o, std::ostream& out) {
  auto state = input_state(o);
  auto alpha = alpha_of(o);
  auto sw = social_welfare(state, alpha);
  if (o.format == "json") {
    json per_node = json::array();
    for (Node v = 0; v < state.node_count(); ++v) per_node.push_back(to_string(utility(state, v, alpha)));
    out << json{{"alpha", to_string(alpha)}, {"social_welfare", to_string(sw)}, {"utilities", per_node}}.dump()
        << '\n';
  } else {
    out << to_string(sw) << '\n';
  }
}

void cmd_stable(const Options& o, std::ostream& out) {
  auto state = input_state(o);
  auto alpha = alpha_of(o);
  auto r = is_pairwise_stable(state, alpha, static_cast<std::size_t>(o.limit));
  if (o.format == "json") {
    out << json{{"alpha", to_string(alpha)},
                {"stable", r.stable},
                {"stable_against_removal", r.stable_against_removal},
                {"stable_against_addition", r.stable_against_addition},
                {"moves_examined", r.moves_examined},
                {"witnesses", moves_json(r.witnesses)},
                {"truncated", r.truncated}}
               .dump()
        << '\n';
    return;
  }
  out << (r.stable ? "stable" : "unstable") << '\n';
  for (const auto& m : r.witnesses) out << to_string(m) << '\n';
  if (r.truncated) out << "...\n";
}

void cmd_dynamics(const Options& o, std::ostream& out) {
  auto state = input_state(o);
  auto alpha = alpha_of(o);
  auto policy = parse_policy(o.policy);
  auto r = run_dynamics(state, alpha, policy, budget_of(o, 10000), o.seed);
  if (o.format == "json") {
    json steps = json::array();
    for (const auto& s : r.trajectory) steps.push_back(s.move ? to_string(*s.move) : "");
    json j{{"alpha", to_string(alpha)},      {"policy", o.policy},
           {"terminal", to_string(r.terminal)}, {"moves_applied", r.moves_applied},
           {"moves", steps},                   {"final", graph_to_json(state_graph(r.final_state))}};
    if (policy == Policy::SeededRandom) j["seed"] = o.seed;
    if (r.terminal == Terminal::Cycle) j["cycle_start"] = r.cycle_start;
    out << j.dump() << '\n';
    return;
  }
  if (policy == Policy::SeededRandom) out << "# seed " << o.seed << '\n';
  for (const auto& s : r.trajectory)
    if (s.move) out << to_string(*s.move) << '\n';
  out << "# " << to_string(r.terminal) << " after " << r.moves_applied << " moves";
  if (r.terminal == Terminal::Cycle) out << ", cycle starts at move " << r.cycle_start;
  out << '\n';
  write_graph_text(out, state_graph(r.final_state));
}

void cmd_smrcst(const Options& o, std::ostream& out) {
  auto host = share(input_graph(o));
  auto pivot = o.pivot == "first" ? Pivot::FirstSwap : Pivot::BestSwap;
  auto r = smrcst(host, pivot);
  std::optional<Alpha> alpha;
  if (!o.alpha.empty()) alpha = alpha_of(o);
  auto cert = smrcst_certificates(r, host, alpha, budget_of(o, std::size_t{1} << 20));
  auto tree = state_graph(r.tree.state());
  if (o.format == "json") {
    json j{{"routing_cost", r.routing_cost},
           {"initial_routing_cost", r.initial_routing_cost},
           {"seed_path_length", r.seed_path_length},
           {"iterations", r.iterations},
           {"iteration_bound", cert.iteration_bound},
           {"swaps_checked", cert.swaps_checked},
           {"tree", graph_to_json(tree)}};
    if (cert.ratio) j["ratio"] = to_string(*cert.ratio);
    if (cert.ratio_bound) j["ratio_bound"] = to_string(*cert.ratio_bound);
    out << j.dump() << '\n';
    return;
  }
  out << "# routing cost " << r.routing_cost << ", " << r.iterations << " swaps, seed path length "
      << r.seed_path_length << '\n';
  if (cert.ratio) out << "# SW(OPT)/SW(tree) " << to_string(*cert.ratio) << " <= " << to_string(*cert.ratio_bound) << '\n';
  write_graph_text(out, tree);
}

void cmd_mrcst(const Options& o, std::ostream& out) {
  auto host = share(input_graph(o));
  auto t = mrcst_exact(host, budget_of(o, 1'000'000));
  auto tree = state_graph(t.state());
  if (o.format == "json") {
    out << json{{"routing_cost", t.total()}, {"tree", graph_to_json(tree)}}.dump() << '\n';
    return;
  }
  out << "# routing cost " << t.total() << '\n';
  write_graph_text(out, tree);
}

void cmd_opt(const Options& o, std::ostream& out) {
  auto host = share(input_graph(o));
  auto alpha = alpha_of(o);
  auto r = optimum_exact(host, alpha, budget_of(o, std::size_t{1} << 20), o.workers);
  if (o.format == "json") {
    json states = json::array();
    for (const auto& s : r.best_states) states.push_back(detail::state_json(s));
    out << json{{"alpha", to_string(alpha)},
                {"social_welfare", to_string(r.welfare)},
                {"optimal_states", states},
                {"states_examined", r.states_examined}}
               .dump()
        << '\n';
    return;
  }
  out << to_string(r.welfare) << '\n';
  out << "# " << r.best_states.size() << " optimal states of " << r.states_examined << ", first:\n";
  write_graph_text(out, state_graph(r.best_states.front()));
}

void cmd_atlas(const Options& o, std::ostream& out) {
  auto host = share(input_graph(o));
  auto alpha = alpha_of(o);
  auto atlas = enumerate_stable_states(host, alpha, budget_of(o, std::size_t{1} << 20), o.workers);
  if (o.format == "json") {
    json states = json::array();
    for (const auto& e : atlas.stable_states)
      states.push_back({{"edges", detail::state_json(e.state)}, {"social_welfare", to_string(e.welfare)}});
    json j{{"alpha", to_string(alpha)}, {"stable_states", states}, {"states_examined", atlas.states_examined}};
    if (atlas.worst) j["worst"] = to_string(*atlas.worst);
    if (atlas.best) j["best"] = to_string(*atlas.best);
    out << j.dump() << '\n';
    return;
  }
  out << "# " << atlas.stable_states.size() << " stable states of " << atlas.states_examined << '\n';
  for (const auto& e : atlas.stable_states) {
    out << to_string(e.welfare);
    for (const auto& edge : e.state.edges()) out << ' ' << edge.u << '-' << edge.v;
    out << '\n';
  }
  if (atlas.stable_states.empty()) throw no_equilibrium("no pairwise stable state");
}

void cmd_poa(const Options& o, std::ostream& out) {
  auto host = share(input_graph(o));
  auto alpha = alpha_of(o);
  auto r = price_report(host, alpha, budget_of(o, std::size_t{1} << 20), o.workers);
  if (o.format == "json") {
    out << json{{"alpha", to_string(alpha)},
                {"optimum", to_string(r.optimum)},
                {"worst_stable", to_string(r.worst_stable)},
                {"best_stable", to_string(r.best_stable)},
                {"poa", to_string(r.poa)},
                {"pos", to_string(r.pos)},
                {"stable_count", r.stable_count},
                {"states_examined", r.states_examined}}
               .dump()
        << '\n';
    return;
  }
  out << to_string(r.poa) << '\n';
  out << "# PoS " << to_string(r.pos) << ", " << r.stable_count << " stable states\n";
}

void cmd_cycle(const Options& o, std::ostream& out) {
  auto alpha = alpha_of(o);
  HostPtr host;
  if (!o.input.empty()) host = share(input_graph(o));
  else if (o.n > 0) host = share(constructions::clique(o.n));
  else throw usage_error("--input or --n is required");
  auto r = find_improving_cycle(host, alpha, budget_of(o, 1'000'000), o.seed);
  if (o.format == "json") {
    json j{{"seed", o.seed}, {"alpha", to_string(alpha)}, {"steps", r.steps}, {"states_expanded", r.states_expanded}};
    if (r.cycle) {
      json states = json::array(), moves = json::array();
      for (std::size_t i = r.cycle->cycle_start; i < r.cycle->trajectory.size(); ++i) {
        const auto& step = r.cycle->trajectory[i];
        states.push_back(detail::state_json(GameState(host, step.key.edges)));
        if (step.move) moves.push_back(to_string(*step.move));
      }
      j["cycle"] = {{"states", states}, {"moves", moves}};
    } else {
      j["cycle"] = nullptr;
    }
    out << j.dump() << '\n';
  } else {
    out << "# seed " << o.seed << '\n';
    if (r.cycle) {
      const auto& traj = r.cycle->trajectory;
      out << "cycle of " << traj.size() - 1 - r.cycle->cycle_start << " moves\n";
      for (std::size_t i = r.cycle->cycle_start; i + 1 < traj.size(); ++i) {
        for (const auto& e : GameState(host, traj[i].key.edges).edges()) out << e.u << '-' << e.v << ' ';
        out << "| " << to_string(*traj[i].move) << '\n';
      }
    } else {
      out << "none\n";
    }
  }
  if (!r.cycle) throw no_equilibrium("no improving cycle within " + std::to_string(r.steps) + " steps");
}

void cmd_sweep(const Options& o, std::ostream& out) {
  std::vector<Alpha> alphas;
  for (const auto& a : o.alphas) alphas.push_back(Alpha::parse(a));
  if (!o.alpha.empty()) alphas.push_back(alpha_of(o));
  if (alphas.empty()) throw usage_error("--alpha or --alphas is required");
  std::vector<HostGraph> hosts;
  bool randomized = o.input.empty();
  if (randomized) {
    if (o.n_min <= 0 || o.n_max <= 0 || o.hosts == 0) throw usage_error("--n-min, --n-max and --hosts are required");
    hosts = random_host_corpus(o.n_min, o.n_max, o.hosts, o.seed,
                               o.max_edges > 0 ? o.max_edges : std::numeric_limits<std::size_t>::max());
  } else {
    hosts.push_back(input_graph(o));
  }
  std::vector<SweepRow> rows;
  for (const auto& h : hosts) {
    auto host = share(h);
    for (const auto& a : alphas) rows.push_back(sweep_row(host, a, budget_of(o, std::size_t{1} << 20), o.workers));
  }
  if (randomized) out << "# seed " << o.seed << '\n';
  write_sweep_csv(out, rows);
}

void cmd_campaign(const Options& o, std::ostream& out) {
  CampaignGrid grid;
  grid.n_min = o.n_min;
  grid.n_max = o.n_max;
  grid.hosts = o.hosts;
  grid.budget = budget_of(o, std::size_t{1} << 20);
  grid.max_edges = o.max_edges;
  auto report = theorem_campaign(o.suite, grid, o.seed, o.workers);
  out << report.dump(2) << '\n';
  if (!report["passed"].get<bool>()) throw certificate_failure("campaign '" + o.suite + "' found counterexamples");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Social distancing network creation game toolkit"};
  app.require_subcommand(1);
  Options o;

  auto common = [&](CLI::App* sub, bool needs_alpha) {
    auto* a = sub->add_option("--alpha", o.alpha, "edge benefit as an integer or p/q");
    if (needs_alpha) a->required();
    sub->add_option("--output", o.output, "write the result here instead of stdout");
    sub->add_option("--format", o.format, "output format")->check(CLI::IsMember({"text", "json", "csv"}));
  };
  auto with_input = [&](CLI::App* sub) { sub->add_option("--input", o.input, "graph file")->required(); };
  auto with_budget = [&](CLI::App* sub) {
    sub->add_option("--budget", o.budget, "enumeration or step budget")->check(CLI::PositiveNumber);
  };
  auto with_workers = [&](CLI::App* sub) {
    sub->add_option("--workers", o.workers, "worker threads")->check(CLI::Range(1u, 256u));
  };

  auto* gen = app.add_subcommand("gen", "emit a generated host graph");
  common(gen, false);
  std::vector<std::string> family_names;
  for (const auto& [f, name] : constructions::kFamilyNames) family_names.emplace_back(name);
  gen->add_option("--family", o.family)->required()->check(CLI::IsMember(family_names));
  gen->add_option("--n", o.n);
  gen->add_option("--d", o.d);
  gen->add_option("--k", o.k);
  gen->add_option("--c", o.c);
  gen->add_option("--sizes", o.sizes)->delimiter(',');
  gen->add_option("--base", o.base, "base graph file for clique-network");

  auto* sw = app.add_subcommand("sw", "social welfare of a state");
  common(sw, true);
  with_input(sw);
  sw->add_option("--host", o.host, "host graph file; defaults to the state itself");

  auto* stable = app.add_subcommand("stable", "pairwise stability check");
  common(stable, true);
  with_input(stable);
  stable->add_option("--host", o.host, "host graph file; defaults to the state itself");
  stable->add_option("--limit", o.limit, "witness moves to list")->check(CLI::NonNegativeNumber);

  auto* dyn = app.add_subcommand("dynamics", "improving-move dynamics from a start state");
  common(dyn, true);
  with_input(dyn);
  with_budget(dyn);
  dyn->add_option("--host", o.host, "host graph file; defaults to the state itself");
  dyn->add_option("--policy", o.policy)->check(CLI::IsMember({"first", "best", "random"}));
  dyn->add_option("--seed", o.seed);

  auto* sm = app.add_subcommand("smrcst", "swap-maximal routing cost spanning tree");
  common(sm, false);
  with_input(sm);
  with_budget(sm);
  sm->add_option("--pivot", o.pivot)->check(CLI::IsMember({"best", "first"}));

  auto* mr = app.add_subcommand("mrcst", "maximum routing cost spanning tree by enumeration");
  common(mr, false);
  with_input(mr);
  with_budget(mr);

  auto* opt = app.add_subcommand("opt", "social optimum by enumeration");
  common(opt, true);
  with_input(opt);
  with_budget(opt);
  with_workers(opt);

  auto* atlas = app.add_subcommand("atlas", "all pairwise stable states");
  common(atlas, true);
  with_input(atlas);
  with_budget(atlas);
  with_workers(atlas);

  auto* poa = app.add_subcommand("poa", "price of anarchy and stability");
  common(poa, true);
  with_input(poa);
  with_budget(poa);
  with_workers(poa);

  auto* cyc = app.add_subcommand("cycle", "search for an improving cycle");
  common(cyc, true);
  with_budget(cyc);
  cyc->add_option("--input", o.input, "host graph file");
  cyc->add_option("--n", o.n, "use the complete host on n nodes");
  cyc->add_option("--seed", o.seed);

  auto* sweep = app.add_subcommand("sweep", "CSV of optimum and prices over hosts and alphas");
  common(sweep, false);
  with_budget(sweep);
  with_workers(sweep);
  sweep->add_option("--input", o.input, "single host graph file; random corpus otherwise");
  sweep->add_option("--alphas", o.alphas)->delimiter(',');
  sweep->add_option("--n-min", o.n_min);
  sweep->add_option("--n-max", o.n_max);
  sweep->add_option("--hosts", o.hosts);
  sweep->add_option("--max-edges", o.max_edges);
  sweep->add_option("--seed", o.seed);

  auto* camp = app.add_subcommand("campaign", "run a verification suite");
  with_budget(camp);
  with_workers(camp);
  camp->add_option("--output", o.output);
  camp->add_option("--suite", o.suite)->required();
  camp->add_option("--n-min", o.n_min);
  camp->add_option("--n-max", o.n_max);
  camp->add_option("--hosts", o.hosts);
  camp->add_option("--max-edges", o.max_edges);
  camp->add_option("--seed", o.seed);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int status = app.exit(e);
    return status == 0 ? 0 : 2;
  }

  auto* sub = app.get_subcommands().front();
  const std::map<std::string, void (*)(const Options&, std::ostream&)> commands{
      {"gen", cmd_gen},       {"sw", cmd_sw},       {"stable", cmd_stable}, {"dynamics", cmd_dynamics},
      {"smrcst", cmd_smrcst}, {"mrcst", cmd_mrcst}, {"opt", cmd_opt},       {"atlas", cmd_atlas},
      {"poa", cmd_poa},       {"cycle", cmd_cycle}, {"sweep", cmd_sweep},   {"campaign", cmd_campaign}};

  // Output is buffered so a failing command leaves no partial file.
  std::ostringstream buffer;
  int status = 0;
  try {
    commands.at(sub->get_name())(o, buffer);
  } catch (const usage_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const parse_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const parameter_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const error& e) {
    std::cerr << "error: " << e.what() << '\n';
    status = 1;
  }
  if (o.output.empty()) {
    std::cout << buffer.str();
  } else if (status == 0) {
    std::ofstream file(o.output);
    file << buffer.str();
    if (!file) {
      std::cerr << "error: cannot write '" << o.output << "'\n";
      return 1;
    }
  }
  return status;
}
