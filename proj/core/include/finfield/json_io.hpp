#pragma once

#include <string>
#include <string_view>

#include "finfield/energy.hpp"
#include "finfield/field.hpp"
#include "finfield/markov.hpp"
#include "finfield/models.hpp"
#include "finfield/onepoint.hpp"
#include "finfield/potential.hpp"

namespace finfield::io {

// Interchange documents, format "finfield/1". Every document embeds the
// configuration space and declares the enumeration order ("last-site-fastest")
// so tables are unambiguous across implementations. Numbers carry 17
// significant digits; serialize -> parse -> serialize is byte-stable.

std::string to_json(const RandomField& field);
std::string to_json(const OnePointSystem& system);
std::string to_json(const TransitionEnergyField& delta);
std::string to_json(const OnePointHamiltonian& hamiltonian);
std::string to_json(const Potential& potential);
std::string to_json(const NeighborhoodSystem& adjacency, const ConfigSpace& space);
std::string to_json(const ConfigSpace& space, const Configuration& config);
std::string to_json(const ConfigSpace& space, const SampleResult& samples);

std::string report_json(const ConfigSpace& space, std::string_view check,
                        const ConsistencyReport& report);
std::string report_json(const ConfigSpace& space, std::string_view check,
                        const MarkovReport& report);

RandomField field_from_json(std::string_view text);
OnePointSystem system_from_json(std::string_view text);
TransitionEnergyField delta_from_json(std::string_view text);
OnePointHamiltonian hamiltonian_from_json(std::string_view text);
Potential potential_from_json(std::string_view text);
NeighborhoodSystem adjacency_from_json(std::string_view text, const ConfigSpace& space);

struct ConfigDocument {
  ConfigSpace space;
  Configuration config;
};
ConfigDocument config_from_json(std::string_view text);

// The "kind" field of a parsed document; FormatError when absent.
std::string document_kind(std::string_view text);

}  // namespace finfield::io
