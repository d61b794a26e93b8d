#pragma once

#include <cstdint>
#include <string>

#include <json.hpp>

#include "entropic/certificate.hpp"
#include "entropic/dist.hpp"
#include "entropic/entropy.hpp"
#include "entropic/gf2.hpp"
#include "entropic/pipeline.hpp"
#include "entropic/sets.hpp"

namespace entropic {

// JSON formats. Group elements and basis rows are hex strings ("0x1f"); the
// readers accept them with or without the prefix and validate everything
// (RREF bases, element ranges, normalization), raising ValidationError.

using Json = nlohmann::ordered_json;

std::string to_hex(Bits x);
Bits parse_hex(const std::string& text);

Json to_json(const Subspace& v);
Subspace subspace_from_json(const Json& j);

/// Dense {"n", "mass"} when at least a quarter of the table is supported,
/// sparse {"n", "support": {hex: mass}} otherwise.
Json to_json(const Dist& p);
Dist dist_from_json(const Json& j);

Json to_json(const ElementSet& a);
ElementSet set_from_json(const Json& j);

Json to_json(const DoublingStats& s);
Json to_json(const FibringReport& r);
Json to_json(const Inequality& q);
Inequality inequality_from_json(const Json& j);

Json to_json(const SubspaceCertificate& c);
SubspaceCertificate certificate_from_json(const Json& j);

Json to_json(const TraceStep& s);
Json to_json(const PipelineTrace& t);
Json to_json(const EndgameTranscript& t);

/// FNV-1a over the exact bit patterns of every input mass, as 16 hex digits.
std::string inputs_digest(const std::vector<Dist>& inputs);

/// Bundle emitted by solve_B: digest, seed, mode, trace and final certificate.
Json solve_bundle(const SolveResult& r, const PipelineOptions& options);
/// Bundle emitted by analyze_set: the set, its doubling stats and the certificate.
Json analyze_bundle(const ElementSet& a, const AnalyzeResult& r, const PipelineOptions& options);

/// Accepts a bare certificate or any bundle with a "certificate" member.
SubspaceCertificate certificate_from_document(const Json& j);

Json read_json_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

}  // namespace entropic
