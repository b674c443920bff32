#pragma once

// Serialization of results to CSV strings and JSON documents.

#include <filesystem>
#include <string>

#include "json.hpp"
#include "mls/census.hpp"
#include "mls/manhattan.hpp"
#include "mls/spectral.hpp"

namespace mls {

using Json = nlohmann::ordered_json;

/// Creates parent directories and replaces the file.
void write_file(const std::filesystem::path& path, const std::string& content);

std::string counts_csv(const CountingSequence& counts);
std::string curve_csv(const CurveSamples& curve);
std::string census_csv(const ElementCensus& census);

Json to_json(const GrowthEstimate& g);
Json to_json(const CurveSamples& c);
Json to_json(const BetaReport& r);
Json to_json(const DilationReport& d);
Json to_json(const BoundCheck& b);
Json to_json(const SandwichEstimate& s);
Json to_json(const BochiResult& b);
Json to_json(const BoundReport& r);
Json to_json(const IntersectionNumber& t);
Json to_json(const ConjugateCountCheck& c);
Json to_json(const DominationProfile& p);

/// Two-space indented dump with a trailing newline.
std::string dump(const Json& j);

}  // namespace mls
