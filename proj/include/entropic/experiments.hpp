#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "entropic/pipeline.hpp"
#include "entropic/sets.hpp"

namespace entropic {

// Example families of sets with moderate doubling. Every generator is a pure
// function of its parameters and seed.

/// All vectors of Hamming weight <= r.
ElementSet hamming_ball(int n, int r);

/// A uniformly random N-subset of the coordinate subspace spanned by e_0..e_{dim_v-1}.
ElementSet random_subset_of_subspace(int n, int dim_v, std::size_t count, std::uint64_t seed);

/// V + Lambda with V the coordinate subspace on the low dim_v bits and Lambda a
/// random set of `cosets` representatives in the complementary coordinates,
/// always containing 0.
ElementSet union_of_cosets(int n, int dim_v, std::size_t cosets, std::uint64_t seed);

/// The coordinate subspace spanned by e_0..e_{dim_v-1}.
Subspace coordinate_subspace(int n, int dim_v);

enum class Family { HammingBall, RandomSubset, UnionOfCosets };

const char* to_string(Family f);
Family family_from_string(const std::string& s);

enum class OutputFormat { Json, Csv };

const char* to_string(OutputFormat f);
OutputFormat output_format_from_string(const std::string& s);

struct ExperimentConfig {
    std::string command;
    int n = 4;
    Family family = Family::HammingBall;
    int radius = 1;
    int dim_v = 2;
    std::size_t count = 4;  // subset size, or number of cosets
    double eta = 0.3;
    double epsilon = 0.1;
    std::uint64_t seed = 0;
    RunMode mode = RunMode::Practical;
    std::string out;  // empty means stdout
    OutputFormat format = OutputFormat::Json;

    /// Throws ValidationError on any out-of-range parameter.
    void validate() const;
    /// Family parameters as a compact "key=value;..." string.
    std::string family_params() const;
};

/// Builds the configured family.
ElementSet generate(const ExperimentConfig& config);

/// One line of the fixed-column CSV table.
struct ExperimentRow {
    std::string family;
    int n = 0;
    std::string params;
    std::size_t size = 0;
    std::size_t sumset_size = 0;
    double eta = 0.0;
    std::optional<int> dim_v;
    std::optional<double> achieved_epsilon;
    std::uint64_t seed = 0;
};

inline constexpr const char* kCsvHeader = "family,n,params,|A|,|A+A|,eta,dimV,achieved_epsilon,seed";

std::string to_csv(const ExperimentRow& row);

/// Row for a set analysed with analyze_set; achieved epsilon is the smallest eps
/// for which the certificate's coset bound would still hold.
ExperimentRow experiment_row(const ExperimentConfig& config, const ElementSet& a,
                             const std::optional<AnalyzeResult>& analysis);

}  // namespace entropic
