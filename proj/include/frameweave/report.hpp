#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "frameweave/frame_core.hpp"
#include "frameweave/gabor.hpp"
#include "frameweave/packets.hpp"
#include "frameweave/transform.hpp"
#include "frameweave/weaving.hpp"

namespace frameweave {

using Json = nlohmann::json;

/// Sorted keys, two-space indent, floats as %.17g, NaN/inf as null, trailing
/// newline. Equal values always serialize to equal bytes.
std::string dump_json(const Json& j);

Json to_json(const GridInfo& g);
Json to_json(const BoundsCertificate& c);
Json to_json(const WeaveCertificate& c);
Json to_json(const PatternBounds& p);
Json to_json(const SamplingReport& r, bool with_patterns);
Json to_json(const EnumerationReport& r);
Json to_json(const DensityGate& g);
Json to_json(const CoverReport& r);
Json to_json(const FusionBounds& b);
Json to_json(const CounterexampleGrowth& g);
Json to_json(const ErasureReport& r);
Json to_json(const IndexRange& r);
Json to_json(const Interval& i);

/// "x,value" rows at 17 significant digits.
std::string curve_csv(const std::vector<double>& xs, const std::vector<double>& values,
                      const std::string& x_name = "x");
std::string witness_csv(const std::vector<WitnessRow>& rows);

/// Writes `content` to `path`, throwing std::runtime_error naming the path.
void write_text_file(const std::string& path, const std::string& content);

}  // namespace frameweave
