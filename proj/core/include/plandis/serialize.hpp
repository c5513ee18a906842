#ifndef PLANDIS_SERIALIZE_HPP
#define PLANDIS_SERIALIZE_HPP

#include <string>

#include <json.hpp>

#include "plandis/criticality.hpp"
#include "plandis/landis.hpp"
#include "plandis/solvers.hpp"

namespace plandis {

// All report serialization uses ordered_json with insertion order fixed in
// code, so identical inputs produce byte-identical artifacts.
using Json = nlohmann::ordered_json;

Json to_json(const Classification& cls);
Json to_json(const ProbeResult& probe);
Json to_json(const NullSequenceResult& ns);
Json to_json(const TrendReport& trend);
Json to_json(const ComparisonReport& rep);
Json to_json(const ConditionReport& cond);
Json to_json(const LandisReport& rep);
Json to_json(const ExhaustionResult& ex);
Json to_json(const SolveStats& stats);
Json to_json(const SubcriticalityReport& rep);

// CSV with columns radius, sup, min, ratio; absent values stay empty.
std::string trace_csv(const std::vector<int>& radii, const std::vector<double>& sup,
                      const std::vector<double>& min, const std::vector<double>& ratio);

std::string format_double(double v);  // shortest round-trip form

void write_text(const std::string& path, const std::string& text);

}  // namespace plandis

#endif  // PLANDIS_SERIALIZE_HPP
