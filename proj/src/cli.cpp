#include "owf/cli.hpp"

#include <fstream>
#include <iomanip>
#include <iostream>
#include <numeric>
#include <sstream>
#include <unordered_map>

#include "CLI11.hpp"
#include "owf/certificate.hpp"
#include "owf/embedder.hpp"
#include "owf/verifier.hpp"

namespace owf {

namespace {

constexpr const char* kGraphHelp = R"(Graph specs are '+'-separated clauses:
  cycles=3            infinitely many triangles
  cycles=3,5          cycle lengths 3, 5, 3, 5, ... in turn
  rays=2+cycles=4     two double rays plus infinitely many 4-cycles
  L=even-components   mark V(L) as the even-numbered components
                      (rays first, then cycles); also odd-components
Groups: z (integers), z2 (integer pairs), fpk (free-product kernel),
        z2xz-demo (has involutions; always refused)
Subgroups (z2 only): z-cross-0, 0-cross-z)";

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw UsageError("cannot write '" + path + "'");
  out << text;
}

std::string short_json(const Json& j) {
  auto s = j.dump();
  return s.size() > 160 ? s.substr(0, 157) + "..." : s;
}

Verdict check_fingerprint(const LoadedCertificate& cert) {
  Verdict v{"fingerprint"};
  auto expected = fingerprint(cert.config);
  if (expected != cert.fingerprint) {
    v.pass = false;
    v.witness = {{"recorded", cert.fingerprint}, {"expected", expected}};
  }
  return v;
}

Verdict check_replay(const LoadedCertificate& cert, const Json& recorded) {
  Verdict v{"replay"};
  auto rebuilt = certificate_json(cert.config, build(cert.config));
  for (const auto& [key, value] : rebuilt.items()) {
    if (!recorded.contains(key) || recorded.at(key) != value) {
      v.pass = false;
      v.witness = {{"reason", "replayed construction differs"}, {"field", key}};
      return v;
    }
  }
  return v;
}

std::vector<Verdict> run_checks(const LoadedCertificate& cert, const Json& recorded, std::size_t window) {
  const auto& c = cert.construction;
  std::vector<Verdict> verdicts;
  verdicts.push_back(check_fingerprint(cert));
  verdicts.push_back(check_partial_difference(*c.group, cert.state));
  verdicts.push_back(check_induced_iso(cert.state, *c.graph.graph));
  verdicts.push_back(check_window_factorization(*c.group, cert.state, prefix_window(*c.group, window)));
  if (cert.config.mode == Mode::star1) {
    verdicts.push_back(check_subsystem(cert.state, *c.subgroup, *c.graph.mark));
  }
  verdicts.push_back(check_replay(cert, recorded));
  return verdicts;
}

Json verdicts_json(const std::vector<Verdict>& verdicts) {
  Json out = Json::array();
  for (const auto& v : verdicts) {
    out.push_back({{"check", v.check}, {"pass", v.pass}, {"witness", v.witness}, {"stats", v.stats}});
  }
  return out;
}

void print_table(std::ostream& out, const std::vector<Verdict>& verdicts) {
  out << std::left << std::setw(22) << "check" << std::setw(6) << "result" << "detail\n";
  for (const auto& v : verdicts) {
    out << std::setw(22) << v.check << std::setw(6) << (v.pass ? "pass" : "FAIL")
        << short_json(v.pass ? v.stats : v.witness) << "\n";
  }
}

std::size_t largest_component(const EmbeddingState& state) {
  std::unordered_map<Element, Vertex, ElementHash> preimage;
  std::unordered_map<Vertex, Vertex> parent;
  for (const auto& [v, x] : state.sigma) {
    preimage.emplace(x, v);
    parent.emplace(v, v);
  }
  auto find = [&parent](Vertex v) {
    while (parent[v] != v) v = parent[v] = parent[parent[v]];
    return v;
  };
  for (const auto& [a, b] : state.gamma_edges) {
    auto ra = find(preimage.at(a));
    auto rb = find(preimage.at(b));
    if (ra != rb) parent[ra] = rb;
  }
  std::unordered_map<Vertex, std::size_t> sizes;
  std::size_t best = 0;
  for (const auto& [v, x] : state.sigma) best = std::max(best, ++sizes[find(v)]);
  return best;
}

void print_summary(std::ostream& out, const RunConfig& config, const EmbeddingState& state) {
  const auto& c = state.cursors;
  const auto& r = state.rejected;
  out << "config      group=" << config.group << " graph=" << describe(parse_graph_spec(config.graph))
      << " mode=" << to_string(config.mode);
  if (config.subgroup) out << " subgroup=" << *config.subgroup;
  out << "\n"
      << "steps       " << c.steps << "\n"
      << "covered     vertices=" << c.vertex << " elements=" << c.element << " differences=" << c.difference
      << "\n"
      << "embedded    vertices=" << state.sigma.size() << " edges=" << state.gamma_edges.size()
      << " delta=" << state.delta_order.size() << " (+/- pairs)\n"
      << "rejected    used=" << r.used << " coset=" << r.coset << " difference=" << r.difference
      << " spread=" << r.spread << "\n";
}

int cmd_build(const RunConfig& config, const std::string& out_path, std::size_t window, std::ostream& out) {
  auto session = build(config);
  auto text = certificate_text(config, session);
  if (out_path.empty() || out_path == "-") {
    out << text;
    return 0;
  }
  write_file(out_path, text);
  print_summary(out, config, session.state());
  out << "certificate " << out_path << " " << fingerprint(config) << "\n";
  if (window > 0) {
    auto cert = parse_certificate(text);
    auto verdicts = run_checks(cert, Json::parse(text), window);
    print_table(out, verdicts);
    for (const auto& v : verdicts)
      if (!v.pass) return 1;
  }
  return 0;
}

int cmd_verify(const std::string& path, std::size_t window, bool as_json, const std::string& report,
               std::ostream& out) {
  auto text = read_file(path);
  auto cert = parse_certificate(text);
  auto verdicts = run_checks(cert, Json::parse(text), window);
  auto j = verdicts_json(verdicts);
  if (!report.empty()) write_file(report, j.dump(2) + "\n");
  if (as_json) {
    out << j.dump(2) << "\n";
  } else {
    print_table(out, verdicts);
  }
  for (const auto& v : verdicts)
    if (!v.pass) return 1;
  return 0;
}

int cmd_inspect(const std::string& path, std::size_t window, std::ostream& out) {
  auto cert = parse_certificate(read_file(path));
  const auto& group = *cert.construction.group;
  print_summary(out, cert.config, cert.state);

  auto w = prefix_window(group, window);
  auto coverage = check_window_factorization(group, cert.state, w).stats;
  std::size_t missing = 0;
  for (const auto& x : w) {
    if (x != group.zero() && !cert.state.delta.contains(x)) ++missing;
  }
  out << "pending     window=" << window << " pairs=" << coverage["pairs"].get<std::size_t>()
      << " pending=" << coverage["pending"].get<std::size_t>() << " fraction=" << std::fixed
      << std::setprecision(6) << coverage["pending_fraction"].get<double>() << "\n"
      << "uncovered   nonzero window elements not yet differences=" << missing << "\n"
      << "components  largest embedded component=" << largest_component(cert.state) << " vertices\n"
      << "fingerprint " << cert.fingerprint << "\n";
  return 0;
}

int cmd_demo(const std::string& which, std::ostream& out) {
  if (which == "involution") {
    RunConfig config;
    config.group = "z2xz-demo";
    try {
      open_session(config);
    } catch (const Refusal& e) {
      out << "refused: " << e.what() << "\n";
      if (e.witness()) out << "witness: " << to_string(*e.witness()) << "\n";
      return 0;
    }
    out << "unexpected: session opened over a group with involutions\n";
    return 1;
  }
  if (which == "pathology") {
    auto g = make_group("fpk");
    const Element y1 = KernelElement{{}, 0};
    const Element y2 = KernelElement{{}, 2};
    std::vector<Element> s{y1, y2};
    std::size_t bad = 0;
    out << "S = {" << to_string(y1) << ", " << to_string(y2) << "}, y1 + y2 = " << to_string(g->add(y1, y2))
        << "\n";
    for (std::size_t n = 0; n < 500; ++n) {
      auto x = g->enumerate(n);
      if (!vs_membership(*g, s, x)) {
        ++bad;
        out << "  x = " << to_string(x) << " is outside V_S\n";
      }
    }
    out << bad << " of the first 500 elements lie outside V_S\n";
    return 0;
  }
  throw UsageError("unknown demo '" + which + "' (expected involution or pathology)");
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Greedy construction and verification of regular difference-graph embeddings"};
  app.footer(kGraphHelp);
  app.require_subcommand(1);

  RunConfig config;
  std::string mode = "plain";
  std::string subgroup;
  std::string out_path;
  std::size_t window = 0;
  auto* build_cmd = app.add_subcommand("build", "run the construction and write a certificate");
  build_cmd->add_option("--group", config.group, "z, z2, fpk or z2xz-demo")->capture_default_str();
  build_cmd->add_option("--graph", config.graph, "graph spec, see below")->capture_default_str();
  build_cmd->add_option("--mode", mode, "plain, star or star1")->capture_default_str();
  build_cmd->add_option("--subgroup", subgroup, "normal subgroup for star1, e.g. z-cross-0");
  build_cmd->add_option("--steps", config.steps, "number of scheduled tasks")->capture_default_str();
  build_cmd->add_option("--budget", config.budget, "initial candidate cap per task in star mode")
      ->capture_default_str();
  build_cmd->add_option("--window", window, "verify inline over this enumeration prefix (0 = skip)");
  build_cmd->add_option("--out", out_path, "certificate path ('-' or empty: stdout)");

  std::string cert_path;
  std::size_t verify_window = 100;
  bool as_json = false;
  std::string report;
  auto* verify_cmd = app.add_subcommand("verify", "check a certificate; nonzero exit on failure");
  verify_cmd->add_option("certificate", cert_path)->required();
  verify_cmd->add_option("--window", verify_window, "enumeration prefix for the exact-cover check")
      ->capture_default_str();
  verify_cmd->add_flag("--json", as_json, "print verdicts as JSON instead of a table");
  verify_cmd->add_option("--report", report, "also write the JSON verdicts to this path");

  std::size_t inspect_window = 100;
  auto* inspect_cmd = app.add_subcommand("inspect", "summarize a certificate");
  inspect_cmd->add_option("certificate", cert_path)->required();
  inspect_cmd->add_option("--window", inspect_window, "enumeration prefix for pending statistics")
      ->capture_default_str();

  std::string demo = "involution";
  auto* demo_cmd = app.add_subcommand("demo", "negative demonstrations: involution, pathology");
  demo_cmd->add_option("which", demo, "involution or pathology")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? 0 : 2;
  }

  try {
    if (*build_cmd) {
      config.mode = parse_mode(mode);
      if (!subgroup.empty()) config.subgroup = subgroup;
      return cmd_build(config, out_path, window, out);
    }
    if (*verify_cmd) return cmd_verify(cert_path, verify_window, as_json, report, out);
    if (*inspect_cmd) return cmd_inspect(cert_path, inspect_window, out);
    if (*demo_cmd) return cmd_demo(demo, out);
  } catch (const Refusal& e) {
    err << "refused: " << e.what() << "\n";
    if (e.witness()) err << "witness: " << to_string(*e.witness()) << "\n";
    return 3;
  } catch (const Json::parse_error& e) {
    err << "parse error: " << e.what() << "\n";
    return 2;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}

}  // namespace owf
