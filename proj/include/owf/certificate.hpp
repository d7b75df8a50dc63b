#ifndef OWF_CERTIFICATE_HPP
#define OWF_CERTIFICATE_HPP

#include <memory>
#include <optional>
#include <string>

#include "owf/embedder.hpp"
#include "owf/graph.hpp"
#include "owf/group.hpp"

namespace owf {

struct RunConfig {
  std::string group = "z";
  std::string graph = "cycles=3";
  Mode mode = Mode::plain;
  std::optional<std::string> subgroup;
  std::size_t steps = 0;
  std::size_t budget = SessionOptions{}.budget;
};

/// Everything a configuration resolves to.
struct Construction {
  GroupPtr group;
  BuiltGraph graph;
  SubgroupPtr subgroup;
};

Construction resolve(const RunConfig& config);

/// new_session for a config; throws Refusal / UsageError like Embedder.
Embedder open_session(const RunConfig& config);

/// {group, graph, mode, subgroup?, budget, seedless} with normalized values.
Json config_json(const RunConfig& config);
RunConfig config_from_json(const Json& j);

/// FNV-1a 64 over the config JSON and the group's enumeration order tag.
std::string fingerprint(const RunConfig& config);

/// Serializes a session: config, steps, sigma (by vertex), edges and Δ (in
/// insertion order), cursors, fingerprint. Field order is fixed.
Json certificate_json(const RunConfig& config, const Embedder& session);
/// certificate_json(...).dump(2) plus a trailing newline.
std::string certificate_text(const RunConfig& config, const Embedder& session);

/// Builds a fresh session from `config` and runs `config.steps` steps.
Embedder build(const RunConfig& config);

struct LoadedCertificate {
  RunConfig config;
  Construction construction;
  EmbeddingState state;
  std::string fingerprint;
};

/// Parses certificate text. Throws Json::parse_error (with byte position) on
/// malformed JSON and UsageError on schema or encoding problems.
LoadedCertificate parse_certificate(const std::string& text);

}  // namespace owf

#endif  // OWF_CERTIFICATE_HPP
