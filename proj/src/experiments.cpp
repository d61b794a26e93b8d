#include "entropic/experiments.hpp"

#include <bit>
#include <sstream>

#include "entropic/errors.hpp"
#include "entropic/random.hpp"
#include "entropic/tolerance.hpp"

namespace entropic {

namespace {

void check_set_dim(int n) {
    if (n < 1 || n > caps::kMaxElementDim) {
        throw ValidationError("n must lie in [1, " + std::to_string(caps::kMaxElementDim) + "]");
    }
}

void check_dim_v(int n, int dim_v) {
    if (dim_v < 0 || dim_v > n) throw ValidationError("dim V must lie in [0, n]");
}

// `count` distinct values from [0, 2^bits), in the order a seeded shuffle leaves them.
std::vector<Bits> distinct_draws(int bits, std::size_t count, Rng& rng) {
    std::vector<Bits> pool(std::size_t{1} << bits);
    for (Bits x = 0; x < pool.size(); ++x) pool[x] = x;
    rng.shuffle(pool);
    pool.resize(count);
    return pool;
}

std::string format_double(double x) {
    std::ostringstream os;
    os.precision(12);
    os << x;
    return os.str();
}

}  // namespace

ElementSet hamming_ball(int n, int r) {
    check_set_dim(n);
    if (r < 0 || r > n) throw ValidationError("radius must lie in [0, n]");
    std::vector<Bits> out;
    for (Bits x = 0; x < (Bits{1} << n); ++x) {
        if (std::popcount(x) <= r) out.push_back(x);
    }
    return ElementSet::from(n, std::move(out));
}

Subspace coordinate_subspace(int n, int dim_v) {
    check_dim_v(n, dim_v);
    std::vector<Bits> gens;
    for (int i = 0; i < dim_v; ++i) gens.push_back(Bits{1} << i);
    return span_bits(gens, n);
}

ElementSet random_subset_of_subspace(int n, int dim_v, std::size_t count, std::uint64_t seed) {
    check_set_dim(n);
    check_dim_v(n, dim_v);
    if (count < 1 || count > (std::size_t{1} << dim_v)) {
        throw ValidationError("subset size must lie in [1, 2^dim V]");
    }
    Rng rng(seed);
    return ElementSet::from(n, distinct_draws(dim_v, count, rng));
}

ElementSet union_of_cosets(int n, int dim_v, std::size_t cosets, std::uint64_t seed) {
    check_set_dim(n);
    check_dim_v(n, dim_v);
    const int free_bits = n - dim_v;
    if (cosets < 1 || cosets > (std::size_t{1} << free_bits)) {
        throw CapacityError("coset count must lie in [1, 2^(n - dim V)]");
    }
    Rng rng(seed);
    // Lambda = {0} plus cosets - 1 distinct nonzero representatives.
    std::vector<Bits> reps{0};
    for (Bits r : distinct_draws(free_bits, std::size_t{1} << free_bits, rng)) {
        if (reps.size() == cosets) break;
        if (r != 0) reps.push_back(r);
    }
    std::vector<Bits> out;
    out.reserve(cosets << dim_v);
    for (Bits r : reps) {
        for (Bits v = 0; v < (Bits{1} << dim_v); ++v) out.push_back((r << dim_v) | v);
    }
    return ElementSet::from(n, std::move(out));
}

const char* to_string(Family f) {
    switch (f) {
        case Family::HammingBall: return "hamming_ball";
        case Family::RandomSubset: return "random_subset";
        case Family::UnionOfCosets: return "union_of_cosets";
    }
    return "?";
}

Family family_from_string(const std::string& s) {
    if (s == "hamming_ball" || s == "ball") return Family::HammingBall;
    if (s == "random_subset" || s == "subset") return Family::RandomSubset;
    if (s == "union_of_cosets" || s == "cosets") return Family::UnionOfCosets;
    throw ValidationError("unknown family '" + s + "'");
}

const char* to_string(OutputFormat f) { return f == OutputFormat::Json ? "json" : "csv"; }

OutputFormat output_format_from_string(const std::string& s) {
    if (s == "json") return OutputFormat::Json;
    if (s == "csv") return OutputFormat::Csv;
    throw ValidationError("unknown output format '" + s + "'");
}

void ExperimentConfig::validate() const {
    check_set_dim(n);
    if (!(eta > 0 && eta <= 0.5)) throw ValidationError("eta must lie in (0, 1/2]");
    if (!(epsilon > 0 && epsilon <= 1)) throw ValidationError("epsilon must lie in (0, 1]");
    switch (family) {
        case Family::HammingBall:
            if (radius < 0 || radius > n) throw ValidationError("radius must lie in [0, n]");
            break;
        case Family::RandomSubset:
            check_dim_v(n, dim_v);
            if (count < 1 || count > (std::size_t{1} << dim_v)) {
                throw ValidationError("subset size must lie in [1, 2^dim V]");
            }
            break;
        case Family::UnionOfCosets:
            check_dim_v(n, dim_v);
            if (count < 1 || count > (std::size_t{1} << (n - dim_v))) {
                throw ValidationError("coset count must lie in [1, 2^(n - dim V)]");
            }
            break;
    }
}

std::string ExperimentConfig::family_params() const {
    switch (family) {
        case Family::HammingBall: return "r=" + std::to_string(radius);
        case Family::RandomSubset: return "dimV=" + std::to_string(dim_v) + ";N=" + std::to_string(count);
        case Family::UnionOfCosets: return "dimV=" + std::to_string(dim_v) + ";cosets=" + std::to_string(count);
    }
    return "";
}

ElementSet generate(const ExperimentConfig& config) {
    config.validate();
    switch (config.family) {
        case Family::HammingBall: return hamming_ball(config.n, config.radius);
        case Family::RandomSubset: return random_subset_of_subspace(config.n, config.dim_v, config.count, config.seed);
        case Family::UnionOfCosets: return union_of_cosets(config.n, config.dim_v, config.count, config.seed);
    }
    throw ValidationError("unknown family");
}

std::string to_csv(const ExperimentRow& row) {
    std::ostringstream os;
    os << row.family << ',' << row.n << ',' << row.params << ',' << row.size << ',' << row.sumset_size << ','
       << format_double(row.eta) << ',' << (row.dim_v ? std::to_string(*row.dim_v) : "") << ','
       << (row.achieved_epsilon ? format_double(*row.achieved_epsilon) : "") << ',' << row.seed;
    return os.str();
}

ExperimentRow experiment_row(const ExperimentConfig& config, const ElementSet& a,
                             const std::optional<AnalyzeResult>& analysis) {
    ExperimentRow row;
    row.family = to_string(config.family);
    row.n = a.n;
    row.params = config.family_params();
    row.seed = config.seed;
    const DoublingStats stats = analysis ? analysis->stats : doubling_stats(a);
    row.size = stats.size;
    row.sumset_size = stats.sumset_size;
    row.eta = stats.eta;
    if (analysis) {
        const auto& cert = analysis->certificate;
        row.dim_v = cert.v.dim();
        const double log_a = cert.measured.at("log_size");
        row.achieved_epsilon = log_a > 0 ? stats.eta - cert.measured.at("expected_log_intersection") / log_a : 0.0;
    }
    return row;
}

}  // namespace entropic
