#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <fstream>
#include <iostream>

#include <morse2d/json.hpp>
#include <morse2d/morse2d.hpp>

using namespace morse2d;
using nlohmann::json;

namespace {

enum Exit { kOk = 0, kUsage = 1, kInput = 2, kViolation = 3 };

struct Input {
  std::string path;
  std::string format;  // empty: by extension
};

OrientedComplex2 read_mesh(const Input& in) {
  MeshFormat f = MeshFormat::TRI;
  if (in.format == "off" || (in.format.empty() && in.path.size() > 4 && in.path.ends_with(".off"))) f = MeshFormat::OFF;
  std::ifstream file(in.path);
  if (!file) throw ParseError(in.path + ": cannot open file", 0);
  try {
    return parse_complex(file, f);
  } catch (const ParseError& e) {
    throw ParseError(in.path + ": " + e.what(), 0);
  }
}

void emit(const json& j, const std::string& out) {
  if (out.empty() || out == "-") {
    std::cout << j.dump(2) << "\n";
    return;
  }
  std::ofstream f(out);
  if (!f) throw Error("cannot write " + out);
  f << j.dump(2) << "\n";
}

json cell_counts(const OrientedComplex2& c) { return {c.num_cells(0), c.num_cells(1), c.num_cells(2)}; }

std::string event_kind(FlowEvent::Kind k) {
  switch (k) {
    case FlowEvent::Kind::Critical: return "critical";
    case FlowEvent::Kind::BoundaryPair: return "boundary";
    case FlowEvent::Kind::Expansion: return "expansion";
  }
  return "?";
}

json step_json(const CancellationStep& s) {
  return {{"step", s.step},        {"level", s.level},
          {"lower", s.lower},      {"upper", s.upper},
          {"rule", s.rule},        {"upsilon_before", s.upsilon_before},
          {"upsilon_after", s.upsilon_after}};
}

int cmd_homology(const Input& in, const std::string& coeff_spec, const std::string& trace_path,
                 const std::string& out) {
  const auto coeff = AbelianGroup::parse(coeff_spec);
  const auto c = read_mesh(in);
  const auto kind = validate_manifold(c);

  auto r = calc_homology(c, coeff);
  if (!trace_path.empty()) {
    MainFrameTrace trace;
    MainFrameHooks hooks;
    hooks.trace = &trace;
    main_frame(c, {}, hooks);
    std::ofstream t(trace_path);
    std::size_t k = 0;
    for (const auto& ev : trace.events) {
      json line = {{"kind", event_kind(ev.kind)}, {"level", ev.level}, {"face", ev.face}, {"coface", ev.coface}};
      if (ev.level == 2 && k < trace.frame_edges.size()) {
        line["frame_edges"] = trace.frame_edges[k];
        line["frame_vertices"] = trace.frame_vertices[k];
        ++k;
      }
      t << line.dump() << "\n";
    }
  }

  json groups = json::array();
  for (const auto& g : r.result.groups) groups.push_back(g.to_string());
  json rep = {{"command", "homology"},
              {"input", in.path},
              {"manifold", kind == ManifoldKind::Closed ? "closed" : "boundary"},
              {"cells", cell_counts(c)},
              {"euler", c.euler_characteristic()},
              {"coefficients", coeff.to_string()},
              {"critical", r.counts.c},
              {"betti", r.result.betti},
              {"homology", groups},
              {"integral_homology", to_json(r.integral)},
              {"morse_operator", to_json(r.op)},
              {"times_ms", {{"frame", r.times.frame_ms}, {"boundary", r.times.boundary_ms}, {"snf", r.times.snf_ms}}},
              {"operations", {{"frame", r.frame_ops.total()}, {"boundary", r.boundary_ops.total()}}}};
  emit(rep, out);
  return kOk;
}

MorseMatching generate(const std::string& generator, const OrientedComplex2& c, std::uint64_t seed) {
  return generator == "shuffle" ? random_matching(c, seed) : random_dgvf(c, seed);
}

int cmd_pseudo(const Input& in, std::size_t seeds, std::uint64_t seed0, const std::string& generator,
               const std::string& trace_path, const std::string& out) {
  const auto c = read_mesh(in);
  validate_manifold(c);
  const auto target = oracle_homology(c);
  const auto beta2 = homology_with_coefficients(target, AbelianGroup::cyclic(2)).betti;

  std::ofstream trace;
  if (!trace_path.empty()) trace.open(trace_path);
  json runs = json::array();
  std::size_t passed = 0;
  for (std::size_t i = 0; i < seeds; ++i) {
    const std::uint64_t seed = seed0 + i;
    const auto m0 = generate(generator, c, seed);
    const auto before = critical_cells(m0, c);
    KingFlowOptions opt;
    opt.seed = seed;
    json run = {{"seed", seed}, {"critical_before", before.c}, {"upsilon_before", before.total()}};
    bool ok = false;
    std::vector<CancellationStep> steps;
    opt.on_step = [&](const CancellationStep& s) { steps.push_back(s); };
    try {
      auto st = king_flow_state(c, m0, opt);
      const auto after = critical_cells(st.matching(), c);
      ok = after.c == beta2 && is_acyclic(st.matching(), c);
      run["critical_after"] = after.c;
      run["upsilon_after"] = after.total();
      run["cancellations"] = st.steps().size();
      run["fix_bdry_skipped"] = st.fix_bdry_skipped;
    } catch (const Error& e) {
      run["error"] = e.what();
    }
    run["pass"] = ok;
    if (trace.is_open() || !ok) {
      const std::string path =
          trace_path.empty() ? in.path + ".seed" + std::to_string(seed) + ".trace.jsonl" : trace_path;
      std::ofstream failing;
      std::ostream& t = trace.is_open() ? static_cast<std::ostream&>(trace) : (failing.open(path), failing);
      t << json{{"seed", seed}, {"input", in.path}, {"pairs", to_json(m0)}}.dump() << "\n";
      for (const auto& s : steps) t << step_json(s).dump() << "\n";
      if (!ok) run["trace"] = path;
    }
    passed += ok;
    runs.push_back(std::move(run));
  }
  json rep = {{"command", "pseudo"},
              {"input", in.path},
              {"cells", cell_counts(c)},
              {"generator", generator},
              {"target", beta2},
              {"seeds", seeds},
              {"passed", passed},
              {"runs", runs}};
  emit(rep, out);
  return passed == seeds ? kOk : kViolation;
}

int cmd_bench(const Input& in, int levels, const std::string& out) {
  auto c = read_mesh(in);
  validate_manifold(c);
  json rows = json::array();
  double prev_n = 0, prev_ops = 0;
  for (int level = 0; level <= levels; ++level) {
    const auto t0 = std::chrono::steady_clock::now();
    OpCounter frame_ops, bdry_ops;
    MainFrameHooks hooks;
    hooks.ops = &frame_ops;
    const auto m = main_frame(c, {}, hooks);
    calc_bdry_op(c, m, &bdry_ops);
    const double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    const double n = static_cast<double>(c.num_cells());
    const double ops = static_cast<double>(frame_ops.total() + bdry_ops.total());
    json row = {{"level", level},
                {"cells", c.num_cells()},
                {"upsilon", critical_cells(m, c).total()},
                {"ms", ms},
                {"frame_ops", frame_ops.total()},
                {"boundary_ops", bdry_ops.total()}};
    if (level > 0) {
      row["size_ratio"] = n / prev_n;
      row["op_ratio"] = ops / prev_ops;
    }
    rows.push_back(row);
    if (out.empty())
      std::cerr << "level " << level << "  N=" << c.num_cells() << "  ops=" << static_cast<std::size_t>(ops)
                << "  ops/N=" << ops / n << "  " << ms << " ms\n";
    prev_n = n;
    prev_ops = ops;
    if (level < levels) c = subdivide(c);
  }
  emit({{"command", "bench"}, {"input", in.path}, {"levels", rows}}, out);
  return kOk;
}

int cmd_dump(const Input& in, std::uint64_t seed, const std::string& generator, const std::string& dot,
             const std::string& out) {
  const auto c = read_mesh(in);
  validate_manifold(c);
  const auto m = generator == "frame" ? main_frame(c) : generate(generator, c, seed);
  const auto k = critical_cells(m, c);
  if (!dot.empty()) {
    std::ofstream f(dot);
    write_hasse_dot(f, m, c);
  }
  json crit = json::array();
  for (const auto& v : k.critical) crit.push_back(v);
  emit({{"command", "dgvf-dump"},
        {"input", in.path},
        {"cells", cell_counts(c)},
        {"source", generator},
        {"critical", k.c},
        {"critical_cells", crit},
        {"pairs", to_json(m)}},
       out);
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Homology of triangulated surfaces via discrete gradient fields"};
  app.require_subcommand(1);
  Input in;
  std::string out, trace, coeff = "Z", dot;
  std::uint64_t seed = 0;
  std::size_t seeds = 100;
  int levels = 4;
  std::string generator = "collapse", field = "frame";

  auto add_input = [&](CLI::App* s) {
    s->add_option("mesh", in.path, "mesh file (.tri or .off)")->required();
    s->add_option("--format", in.format, "input format")->check(CLI::IsMember({"off", "tri"}));
    s->add_option("--json", out, "write the report here instead of stdout");
  };

  auto* hom = app.add_subcommand("homology", "homology groups of a surface");
  add_input(hom);
  hom->add_option("--coefficients", coeff, "coefficient group, e.g. Z, Z_2, Z^2+Z_3");
  hom->add_option("--trace", trace, "write the expansion log as JSON lines");

  auto* pseudo = app.add_subcommand("pseudo", "reduce random gradient fields by cancellation");
  add_input(pseudo);
  pseudo->add_option("--seeds", seeds, "number of seeds");
  pseudo->add_option("--seed", seed, "first seed");
  pseudo->add_option("--trace", trace, "write cancellation steps as JSON lines");
  pseudo->add_option("--generator", generator, "random field construction")
      ->check(CLI::IsMember({"collapse", "shuffle"}));

  auto* bench = app.add_subcommand("bench", "operation counts over subdivision levels");
  add_input(bench);
  bench->add_option("--levels", levels, "subdivision levels")->check(CLI::Range(0, 6));

  auto* dump = app.add_subcommand("dgvf-dump", "print a gradient field");
  add_input(dump);
  dump->add_option("--field", field, "optimal field or a random one")
      ->check(CLI::IsMember({"frame", "collapse", "shuffle"}));
  dump->add_option("--seed", seed, "seed for random fields");
  dump->add_option("--dot", dot, "write the Hasse graph in DOT format");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kOk : kUsage;
  }

  try {
    if (*hom) return cmd_homology(in, coeff, trace, out);
    if (*pseudo) return cmd_pseudo(in, seeds, seed, generator, trace, out);
    if (*bench) return cmd_bench(in, levels, out);
    if (*dump) return cmd_dump(in, seed, field, dot, out);
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInput;
  } catch (const ManifoldError& e) {
    std::cerr << "error: " << in.path << ": " << e.what() << "\n";
    return kInput;
  } catch (const InternalError& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kViolation;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}
