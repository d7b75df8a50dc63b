#include "owf/certificate.hpp"

#include <cstdio>

namespace owf {

namespace {

const Json& field(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key))
    throw UsageError(std::string("certificate is missing field '") + key + "'");
  return j.at(key);
}

std::size_t natural(const Json& j, const char* key) {
  const auto& v = field(j, key);
  if (!v.is_number_unsigned()) throw UsageError(std::string("field '") + key + "' must be a natural");
  return v.get<std::size_t>();
}

}  // namespace

Construction resolve(const RunConfig& config) {
  Construction c;
  c.group = make_group(config.group);
  auto graph_config = parse_graph_spec(config.graph);
  c.graph = build_graph(graph_config);
  if (config.subgroup) c.subgroup = make_subgroup(*config.subgroup, c.group);
  return c;
}

Embedder open_session(const RunConfig& config) {
  auto c = resolve(config);
  SessionOptions options;
  options.budget = config.budget;
  return Embedder(c.group, c.graph.graph, config.mode, options, c.subgroup, c.graph.mark);
}

Json config_json(const RunConfig& config) {
  Json j;
  j["group"] = config.group;
  j["graph"] = describe(parse_graph_spec(config.graph));
  j["mode"] = std::string(to_string(config.mode));
  if (config.subgroup) j["subgroup"] = *config.subgroup;
  j["budget"] = config.budget;
  j["seedless"] = true;
  return j;
}

RunConfig config_from_json(const Json& j) {
  RunConfig config;
  const auto& group = field(j, "group");
  const auto& graph = field(j, "graph");
  const auto& mode = field(j, "mode");
  if (!group.is_string() || !graph.is_string() || !mode.is_string())
    throw UsageError("config fields group, graph and mode must be strings");
  config.group = group.get<std::string>();
  config.graph = graph.get<std::string>();
  config.mode = parse_mode(mode.get<std::string>());
  if (j.contains("subgroup")) {
    if (!j["subgroup"].is_string()) throw UsageError("config field subgroup must be a string");
    config.subgroup = j["subgroup"].get<std::string>();
  }
  if (j.contains("budget")) config.budget = natural(j, "budget");
  return config;
}

std::string fingerprint(const RunConfig& config) {
  auto text = config_json(config).dump() + "|order:" + config.group + "/v1";
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return std::string("fnv1a64:") + buf;
}

Json certificate_json(const RunConfig& config, const Embedder& session) {
  const auto& group = session.group();
  const auto& state = session.state();
  Json j;
  j["config"] = config_json(config);
  j["steps"] = state.cursors.steps;

  Json sigma = Json::array();
  for (const auto& [v, x] : state.sigma) sigma.push_back(Json::array({v, group.to_json(x)}));
  j["sigma"] = std::move(sigma);

  Json edges = Json::array();
  for (const auto& [a, b] : state.gamma_edges) edges.push_back(Json::array({group.to_json(a), group.to_json(b)}));
  j["edges"] = std::move(edges);

  Json delta = Json::array();
  for (const auto& d : state.delta_order) delta.push_back(group.to_json(d));
  j["delta"] = std::move(delta);

  j["cursors"] = {{"vertex", state.cursors.vertex},
                  {"element", state.cursors.element},
                  {"difference", state.cursors.difference},
                  {"steps", state.cursors.steps}};
  j["rejected"] = {{"used", state.rejected.used},
                   {"coset", state.rejected.coset},
                   {"difference", state.rejected.difference},
                   {"spread", state.rejected.spread}};
  j["fingerprint"] = fingerprint(config);
  return j;
}

std::string certificate_text(const RunConfig& config, const Embedder& session) {
  return certificate_json(config, session).dump(2) + "\n";
}

Embedder build(const RunConfig& config) {
  auto session = open_session(config);
  session.run(config.steps);
  return session;
}

LoadedCertificate parse_certificate(const std::string& text) {
  auto j = Json::parse(text);
  LoadedCertificate out;
  out.config = config_from_json(field(j, "config"));
  out.config.steps = natural(j, "steps");
  out.construction = resolve(out.config);
  const auto& group = *out.construction.group;

  for (const auto& entry : field(j, "sigma")) {
    if (!entry.is_array() || entry.size() != 2 || !entry[0].is_number_unsigned())
      throw UsageError("sigma entries must be [vertex, element], got " + entry.dump());
    auto v = entry[0].get<Vertex>();
    auto x = group.from_json(entry[1]);
    if (!out.state.sigma.emplace(v, x).second) throw UsageError("vertex " + std::to_string(v) + " mapped twice");
    out.state.sigma_inv.emplace(x, v);
  }
  for (const auto& entry : field(j, "edges")) {
    if (!entry.is_array() || entry.size() != 2)
      throw UsageError("edges must be [element, element], got " + entry.dump());
    out.state.gamma_edges.emplace_back(group.from_json(entry[0]), group.from_json(entry[1]));
  }
  for (const auto& entry : field(j, "delta")) {
    auto d = group.from_json(entry);
    out.state.delta.insert(d);
    out.state.delta.insert(group.neg(d));
    out.state.delta_order.push_back(std::move(d));
  }
  const auto& cursors = field(j, "cursors");
  out.state.cursors.vertex = natural(cursors, "vertex");
  out.state.cursors.element = natural(cursors, "element");
  out.state.cursors.difference = natural(cursors, "difference");
  out.state.cursors.steps = natural(cursors, "steps");
  if (j.contains("rejected")) {
    const auto& r = j["rejected"];
    out.state.rejected.used = natural(r, "used");
    out.state.rejected.coset = natural(r, "coset");
    out.state.rejected.difference = natural(r, "difference");
    out.state.rejected.spread = natural(r, "spread");
  }
  const auto& fp = field(j, "fingerprint");
  if (!fp.is_string()) throw UsageError("fingerprint must be a string");
  out.fingerprint = fp.get<std::string>();
  return out;
}

}  // namespace owf
