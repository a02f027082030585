#include "finfield/json_io.hpp"

#include <cmath>
#include <cstdio>

#include <json.hpp>

namespace finfield::io {

namespace {

using nlohmann::json;

constexpr const char* kFormat = "finfield/1";
constexpr const char* kOrder = "last-site-fastest";

// ---- writing ----------------------------------------------------------

void put_number(std::string& out, double v) {
  if (!std::isfinite(v)) throw FormatError("cannot serialize a non-finite number");
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  out += buf;
}

void put_string(std::string& out, std::string_view s) {
  out += '"';
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      default:
        if (static_cast<unsigned char>(c) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof buf, "\\u%04x", c);
          out += buf;
        } else {
          out += c;
        }
    }
  }
  out += '"';
}

void put_doubles(std::string& out, std::span<const double> xs) {
  out += '[';
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) out += ", ";
    put_number(out, xs[i]);
  }
  out += ']';
}

template <typename T>
void put_ints(std::string& out, const std::vector<T>& xs) {
  out += '[';
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) out += ", ";
    out += std::to_string(xs[i]);
  }
  out += ']';
}

void put_names(std::string& out, const std::vector<std::string>& names) {
  out += '[';
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (i) out += ", ";
    put_string(out, names[i]);
  }
  out += ']';
}

void put_space(std::string& out, const ConfigSpace& sp) {
  out += "{\"sites\": ";
  put_names(out, sp.site_names());
  out += ", \"cardinalities\": ";
  put_ints(out, sp.cardinalities());
  out += '}';
}

std::string open_document(std::string_view kind, const ConfigSpace& sp) {
  std::string out = "{\n  \"format\": \"";
  out += kFormat;
  out += "\",\n  \"kind\": \"";
  out += kind;
  out += "\",\n  \"order\": \"";
  out += kOrder;
  out += "\",\n  \"space\": ";
  put_space(out, sp);
  return out;
}

// [z][x] rows of one site table
void put_site_rows(std::string& out, std::span<const double> table, std::size_t c) {
  out += '[';
  const std::size_t rows = table.size() / c;
  for (std::size_t z = 0; z < rows; ++z) {
    if (z) out += ", ";
    put_doubles(out, table.subspan(z * c, c));
  }
  out += ']';
}

// ---- parsing ----------------------------------------------------------

json parse_text(std::string_view text) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw FormatError(std::string("invalid JSON: ") + e.what());
  }
}

const json& expect(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key))
    throw FormatError(std::string("missing field \"") + key + "\"");
  return j.at(key);
}

json parse_document(std::string_view text, std::string_view kind) {
  json j = parse_text(text);
  if (expect(j, "format") != kFormat) throw FormatError("unsupported format marker");
  if (expect(j, "kind") != kind)
    throw FormatError("expected a \"" + std::string(kind) + "\" document, found \"" +
                      expect(j, "kind").get<std::string>() + "\"");
  if (expect(j, "order") != kOrder)
    throw FormatError("unsupported enumeration order");
  return j;
}

double number_of(const json& j) {
  if (!j.is_number()) throw FormatError("expected a number");
  return j.get<double>();
}

std::vector<double> doubles_of(const json& j, std::size_t expected) {
  if (!j.is_array() || j.size() != expected)
    throw FormatError("expected an array of " + std::to_string(expected) + " numbers");
  std::vector<double> out;
  out.reserve(expected);
  for (const auto& e : j) out.push_back(number_of(e));
  return out;
}

ConfigSpace space_of(const json& j) {
  const json& s = expect(j, "space");
  const json& sites = expect(s, "sites");
  const json& cards = expect(s, "cardinalities");
  if (!sites.is_array() || !cards.is_array() || sites.size() != cards.size())
    throw FormatError("space needs aligned \"sites\" and \"cardinalities\" arrays");
  std::vector<std::string> names;
  std::vector<int> cardinalities;
  for (const auto& e : sites) {
    if (!e.is_string()) throw FormatError("site names must be strings");
    names.push_back(e.get<std::string>());
  }
  for (const auto& e : cards) {
    if (!e.is_number_integer()) throw FormatError("cardinalities must be integers");
    cardinalities.push_back(e.get<int>());
  }
  try {
    return ConfigSpace(std::move(names), std::move(cardinalities));
  } catch (const Error& e) {
    throw FormatError(std::string("invalid space: ") + e.what());
  }
}

std::vector<int> states_of(const json& j, std::size_t expected) {
  if (!j.is_array() || j.size() != expected)
    throw FormatError("expected an array of " + std::to_string(expected) + " states");
  std::vector<int> out;
  for (const auto& e : j) {
    if (!e.is_number_integer()) throw FormatError("states must be integers");
    out.push_back(e.get<int>());
  }
  return out;
}

}  // namespace

// ---- public writers ---------------------------------------------------

std::string to_json(const RandomField& field) {
  std::string out = open_document("field", field.space());
  out += ",\n  \"probs\": ";
  put_doubles(out, field.probs());
  out += "\n}\n";
  return out;
}

std::string to_json(const OnePointSystem& system) {
  const ConfigSpace& sp = system.space();
  std::string out = open_document("system", sp);
  out += ",\n  \"tables\": [\n";
  for (std::size_t t = 0; t < sp.site_count(); ++t) {
    out += "    ";
    put_site_rows(out, system.tables()[t], static_cast<std::size_t>(sp.cardinality(t)));
    out += t + 1 < sp.site_count() ? ",\n" : "\n";
  }
  out += "  ]\n}\n";
  return out;
}

std::string to_json(const TransitionEnergyField& delta) {
  const ConfigSpace& sp = delta.space();
  std::string out = open_document("delta", sp);
  out += ",\n  \"deltas\": [\n";
  for (std::size_t t = 0; t < sp.site_count(); ++t) {
    const auto c = static_cast<std::size_t>(sp.cardinality(t));
    const auto& table = delta.tables()[t];
    out += "    [";
    const std::size_t zc = table.size() / (c * c);
    for (std::size_t z = 0; z < zc; ++z) {
      if (z) out += ", ";
      put_site_rows(out, std::span<const double>(table).subspan(z * c * c, c * c), c);
    }
    out += ']';
    out += t + 1 < sp.site_count() ? ",\n" : "\n";
  }
  out += "  ]\n}\n";
  return out;
}

std::string to_json(const OnePointHamiltonian& hamiltonian) {
  const ConfigSpace& sp = hamiltonian.space();
  std::string out = open_document("hamiltonian", sp);
  out += ",\n  \"values\": [\n";
  for (std::size_t t = 0; t < sp.site_count(); ++t) {
    out += "    ";
    put_site_rows(out, hamiltonian.tables()[t], static_cast<std::size_t>(sp.cardinality(t)));
    out += t + 1 < sp.site_count() ? ",\n" : "\n";
  }
  out += "  ]\n}\n";
  return out;
}

std::string to_json(const Potential& potential) {
  const ConfigSpace& sp = potential.space();
  std::string out = open_document("potential", sp);
  if (potential.vacuum()) {
    out += ",\n  \"theta\": ";
    put_ints(out, *potential.vacuum());
  }
  out += ",\n  \"terms\": [\n";
  std::size_t i = 0;
  for (const auto& [v, table] : potential.terms()) {
    out += "    {\"sites\": [";
    const auto sites = mask_sites(v);
    for (std::size_t pos = 0; pos < sites.size(); ++pos) {
      if (pos) out += ", ";
      put_string(out, sp.site_name(sites[pos]));
    }
    out += "], \"table\": ";
    put_doubles(out, table);
    out += '}';
    out += ++i < potential.terms().size() ? ",\n" : "\n";
  }
  if (potential.terms().empty()) out += "\n";
  out += "  ]\n}\n";
  return out;
}

std::string to_json(const NeighborhoodSystem& adjacency, const ConfigSpace& space) {
  std::string out = open_document("adjacency", space);
  out += ",\n  \"neighbors\": [\n";
  for (std::size_t t = 0; t < space.site_count(); ++t) {
    out += "    [";
    const auto sites = mask_sites(adjacency.neighbors(t));
    for (std::size_t pos = 0; pos < sites.size(); ++pos) {
      if (pos) out += ", ";
      put_string(out, space.site_name(sites[pos]));
    }
    out += ']';
    out += t + 1 < space.site_count() ? ",\n" : "\n";
  }
  out += "  ]\n}\n";
  return out;
}

std::string to_json(const ConfigSpace& space, const Configuration& config) {
  std::string out = open_document("config", space);
  out += ",\n  \"domain\": [";
  const auto sites = mask_sites(config.domain());
  for (std::size_t pos = 0; pos < sites.size(); ++pos) {
    if (pos) out += ", ";
    put_string(out, space.site_name(sites[pos]));
  }
  out += "],\n  \"values\": ";
  put_ints(out, config.values());
  out += "\n}\n";
  return out;
}

std::string to_json(const ConfigSpace& space, const SampleResult& samples) {
  std::string out = open_document("samples", space);
  out += ",\n  \"rng\": \"";
  out += samples.rng;
  out += "\",\n  \"seed\": " + std::to_string(samples.seed);
  out += ",\n  \"sweeps\": " + std::to_string(samples.sweeps);
  out += ",\n  \"burn_in\": " + std::to_string(samples.burn_in);
  out += ",\n  \"joint\": ";
  put_doubles(out, samples.joint);
  out += ",\n  \"marginals\": [\n";
  for (std::size_t t = 0; t < samples.marginals.size(); ++t) {
    out += "    ";
    put_doubles(out, samples.marginals[t]);
    out += t + 1 < samples.marginals.size() ? ",\n" : "\n";
  }
  out += "  ]\n}\n";
  return out;
}

std::string report_json(const ConfigSpace& space, std::string_view check,
                        const ConsistencyReport& report) {
  std::string out = open_document("report", space);
  out += ",\n  \"check\": \"";
  out += check;
  out += "\",\n  \"consistent\": ";
  out += report.consistent ? "true" : "false";
  out += ",\n  \"max_violation\": ";
  put_number(out, report.max_violation);
  out += ",\n  \"tol\": ";
  put_number(out, report.tol);
  if (report.witness) {
    const auto& w = *report.witness;
    const SiteMask zdomain = space.complement(site_bit(w.t) | site_bit(w.s));
    out += ",\n  \"witness\": {\"t\": ";
    put_string(out, space.site_name(w.t));
    out += ", \"s\": ";
    put_string(out, space.site_name(w.s));
    out += ", \"x\": " + std::to_string(w.x) + ", \"u\": " + std::to_string(w.u);
    out += ", \"y\": " + std::to_string(w.y) + ", \"v\": " + std::to_string(w.v);
    out += ", \"z\": ";
    put_string(out, render_config(space, zdomain, w.z));
    out += '}';
  }
  out += "\n}\n";
  return out;
}

std::string report_json(const ConfigSpace& space, std::string_view check,
                        const MarkovReport& report) {
  std::string out = open_document("report", space);
  out += ",\n  \"check\": \"";
  out += check;
  out += "\",\n  \"markov\": ";
  out += report.markov ? "true" : "false";
  out += ",\n  \"max_violation\": ";
  put_number(out, report.max_violation);
  out += ",\n  \"tol\": ";
  put_number(out, report.tol);
  if (report.witness) {
    const auto& w = *report.witness;
    const SiteMask bmask = space.complement(site_bit(w.t));
    out += ",\n  \"witness\": {\"t\": ";
    put_string(out, space.site_name(w.t));
    out += ", \"x\": " + std::to_string(w.x);
    if (w.u >= 0) out += ", \"u\": " + std::to_string(w.u);
    out += ", \"boundary\": ";
    put_string(out, render_config(space, bmask, w.boundary));
    out += ", \"reference\": ";
    put_string(out, render_config(space, bmask, w.reference));
    out += '}';
  }
  out += "\n}\n";
  return out;
}

// ---- public parsers ---------------------------------------------------

std::string document_kind(std::string_view text) {
  const json j = parse_text(text);
  const json& kind = expect(j, "kind");
  if (!kind.is_string()) throw FormatError("\"kind\" must be a string");
  return kind.get<std::string>();
}

RandomField field_from_json(std::string_view text) {
  const json j = parse_document(text, "field");
  ConfigSpace sp = space_of(j);
  auto probs = doubles_of(expect(j, "probs"), sp.total_configs());
  try {
    return RandomField(std::move(sp), std::move(probs));
  } catch (const DomainError& e) {
    throw FormatError(std::string("invalid field: ") + e.what());
  }
}

OnePointSystem system_from_json(std::string_view text) {
  const json j = parse_document(text, "system");
  ConfigSpace sp = space_of(j);
  const json& tables = expect(j, "tables");
  if (!tables.is_array() || tables.size() != sp.site_count())
    throw FormatError("expected one table per site");
  std::vector<std::vector<double>> parsed(sp.site_count());
  for (std::size_t t = 0; t < sp.site_count(); ++t) {
    const auto c = static_cast<std::size_t>(sp.cardinality(t));
    const std::uint64_t zc = sp.total_configs() / c;
    const json& rows = tables.at(t);
    if (!rows.is_array() || rows.size() != zc)
      throw FormatError("expected " + std::to_string(zc) + " boundary rows at site " +
                        sp.site_name(t));
    parsed[t].reserve(zc * c);
    for (const auto& row : rows)
      for (double v : doubles_of(row, c)) parsed[t].push_back(v);
  }
  try {
    return OnePointSystem(std::move(sp), std::move(parsed));
  } catch (const DomainError& e) {
    throw FormatError(std::string("invalid system: ") + e.what());
  }
}

TransitionEnergyField delta_from_json(std::string_view text) {
  const json j = parse_document(text, "delta");
  ConfigSpace sp = space_of(j);
  const json& deltas = expect(j, "deltas");
  if (!deltas.is_array() || deltas.size() != sp.site_count())
    throw FormatError("expected one transition table per site");
  std::vector<std::vector<double>> parsed(sp.site_count());
  for (std::size_t t = 0; t < sp.site_count(); ++t) {
    const auto c = static_cast<std::size_t>(sp.cardinality(t));
    const std::uint64_t zc = sp.total_configs() / c;
    const json& rows = deltas.at(t);
    if (!rows.is_array() || rows.size() != zc)
      throw FormatError("expected " + std::to_string(zc) + " boundary blocks at site " +
                        sp.site_name(t));
    parsed[t].reserve(zc * c * c);
    for (const auto& block : rows) {
      if (!block.is_array() || block.size() != c)
        throw FormatError("expected a " + std::to_string(c) + "-row transition block");
      for (const auto& row : block)
        for (double v : doubles_of(row, c)) parsed[t].push_back(v);
    }
  }
  try {
    return TransitionEnergyField(std::move(sp), std::move(parsed));
  } catch (const DomainError& e) {
    throw FormatError(std::string("invalid transition energy field: ") + e.what());
  }
}

OnePointHamiltonian hamiltonian_from_json(std::string_view text) {
  const json j = parse_document(text, "hamiltonian");
  ConfigSpace sp = space_of(j);
  const json& values = expect(j, "values");
  if (!values.is_array() || values.size() != sp.site_count())
    throw FormatError("expected one energy table per site");
  std::vector<std::vector<double>> parsed(sp.site_count());
  for (std::size_t t = 0; t < sp.site_count(); ++t) {
    const auto c = static_cast<std::size_t>(sp.cardinality(t));
    const std::uint64_t zc = sp.total_configs() / c;
    const json& rows = values.at(t);
    if (!rows.is_array() || rows.size() != zc)
      throw FormatError("expected " + std::to_string(zc) + " boundary rows at site " +
                        sp.site_name(t));
    parsed[t].reserve(zc * c);
    for (const auto& row : rows)
      for (double v : doubles_of(row, c)) parsed[t].push_back(v);
  }
  try {
    return OnePointHamiltonian(std::move(sp), std::move(parsed));
  } catch (const DomainError& e) {
    throw FormatError(std::string("invalid hamiltonian: ") + e.what());
  }
}

Potential potential_from_json(std::string_view text) {
  const json j = parse_document(text, "potential");
  ConfigSpace sp = space_of(j);
  Potential phi(sp);
  const json& terms = expect(j, "terms");
  if (!terms.is_array()) throw FormatError("\"terms\" must be an array");
  for (const auto& term : terms) {
    const json& sites = expect(term, "sites");
    if (!sites.is_array() || sites.empty())
      throw FormatError("each term needs a nonempty \"sites\" array");
    SiteMask v = 0;
    std::size_t last = 0;
    bool first = true;
    for (const auto& name : sites) {
      if (!name.is_string()) throw FormatError("term sites must be strings");
      const auto idx = sp.find_site(name.get<std::string>());
      if (!idx) throw FormatError("unknown site in term: " + name.get<std::string>());
      if (!first && *idx <= last)
        throw FormatError("term sites must be listed in the space's site order");
      v |= site_bit(*idx);
      last = *idx;
      first = false;
    }
    try {
      phi.set_term(v, doubles_of(expect(term, "table"), sp.config_count(v)));
    } catch (const DomainError& e) {
      throw FormatError(std::string("invalid potential term: ") + e.what());
    }
  }
  if (j.contains("theta")) {
    try {
      phi.mark_vacuum(states_of(j.at("theta"), sp.site_count()));
    } catch (const DomainError& e) {
      throw FormatError(std::string("invalid vacuum marker: ") + e.what());
    }
  }
  return phi;
}

NeighborhoodSystem adjacency_from_json(std::string_view text, const ConfigSpace& space) {
  const json j = parse_document(text, "adjacency");
  const ConfigSpace sp = space_of(j);
  if (sp != space)
    throw FormatError("adjacency document was written for a different configuration space");
  const json& lists = expect(j, "neighbors");
  if (!lists.is_array() || lists.size() != sp.site_count())
    throw FormatError("expected one neighbor list per site");
  std::vector<SiteMask> masks(sp.site_count(), 0);
  for (std::size_t t = 0; t < sp.site_count(); ++t) {
    if (!lists.at(t).is_array()) throw FormatError("neighbor lists must be arrays");
    for (const auto& name : lists.at(t)) {
      if (!name.is_string()) throw FormatError("neighbor names must be strings");
      const auto idx = sp.find_site(name.get<std::string>());
      if (!idx) throw FormatError("unknown site in adjacency: " + name.get<std::string>());
      masks[t] |= site_bit(*idx);
    }
  }
  try {
    return NeighborhoodSystem(space, std::move(masks));
  } catch (const DomainError& e) {
    throw FormatError(std::string("invalid adjacency: ") + e.what());
  }
}

ConfigDocument config_from_json(std::string_view text) {
  const json j = parse_document(text, "config");
  ConfigSpace sp = space_of(j);
  const json& domain = expect(j, "domain");
  if (!domain.is_array()) throw FormatError("\"domain\" must be an array of site names");
  SiteMask mask = 0;
  std::size_t last = 0;
  bool first = true;
  for (const auto& name : domain) {
    if (!name.is_string()) throw FormatError("domain sites must be strings");
    const auto idx = sp.find_site(name.get<std::string>());
    if (!idx) throw FormatError("unknown site in config domain: " + name.get<std::string>());
    if (!first && *idx <= last)
      throw FormatError("domain sites must be listed in the space's site order");
    mask |= site_bit(*idx);
    last = *idx;
    first = false;
  }
  const auto values = states_of(expect(j, "values"), mask_size(mask));
  try {
    Configuration config(sp, mask, values);
    return ConfigDocument{std::move(sp), std::move(config)};
  } catch (const DomainError& e) {
    throw FormatError(std::string("invalid configuration: ") + e.what());
  }
}

}  // namespace finfield::io
