#include "entropic/dist.hpp"

#include <bit>
#include <cmath>
#include <numeric>
#include <string>

#include "entropic/errors.hpp"
#include "entropic/tolerance.hpp"

namespace entropic {

namespace {

void require_same_n(int a, int b) {
    if (a != b) {
        throw DimensionMismatch("distributions live on F_2^" + std::to_string(a) + " and F_2^" +
                                std::to_string(b));
    }
}

// Kills floating-point dust and renormalizes; used after transform arithmetic.
std::vector<double> clean(std::vector<double> mass) {
    double total = 0.0;
    for (double& m : mass) {
        if (m < tol::kMassClamp) m = 0.0;
        total += m;
    }
    if (std::abs(total - 1.0) <= tol::kNormalization && total > 0.0) {
        for (double& m : mass) m /= total;
    }
    return mass;
}

}  // namespace

void check_dense_dim(int n) {
    if (n < 0 || n > caps::max_dense_dim()) {
        throw CapacityError("dense distributions are limited to n <= " +
                            std::to_string(caps::max_dense_dim()) + " (got " + std::to_string(n) +
                            "); set ENTROPIC_DOUBLING_MAX_N to change the cap");
    }
}

Dist::Dist(int n, std::vector<double> mass) : n_(n), mass_(std::move(mass)) {
    check_dense_dim(n);
    if (mass_.size() != (std::size_t{1} << n)) {
        throw ValidationError("mass table has " + std::to_string(mass_.size()) +
                              " entries, expected 2^" + std::to_string(n));
    }
    double total = 0.0;
    for (double m : mass_) {
        if (!(m >= 0.0) || !std::isfinite(m)) throw ValidationError("negative or non-finite mass");
        total += m;
    }
    if (std::abs(total - 1.0) > tol::kNormalization) {
        throw ValidationError("masses sum to " + std::to_string(total) + ", not 1");
    }
}

Dist Dist::point_mass(int n, Bits x) {
    check_dense_dim(n);
    check_element(x, n);
    std::vector<double> m(std::size_t{1} << n, 0.0);
    m[x] = 1.0;
    return Dist(n, std::move(m));
}

Dist Dist::uniform_full(int n) {
    check_dense_dim(n);
    const std::size_t size = std::size_t{1} << n;
    return Dist(n, std::vector<double>(size, 1.0 / static_cast<double>(size)));
}

std::vector<Bits> Dist::support() const {
    std::vector<Bits> s;
    for (Bits x = 0; x < mass_.size(); ++x) {
        if (mass_[x] > 0.0) s.push_back(x);
    }
    return s;
}

Dist Dist::translate(Bits by) const {
    check_element(by, n_);
    std::vector<double> m(mass_.size());
    for (Bits x = 0; x < mass_.size(); ++x) m[x ^ by] = mass_[x];
    return Dist(n_, std::move(m));
}

Dist uniform_on(std::span<const Bits> set, int n) {
    check_dense_dim(n);
    std::vector<double> m(std::size_t{1} << n, 0.0);
    std::size_t distinct = 0;
    for (Bits a : set) {
        check_element(a, n);
        if (m[a] == 0.0) {
            m[a] = 1.0;
            ++distinct;
        }
    }
    if (distinct == 0) throw EmptySupportError("uniform_on: empty set");
    for (double& x : m) x /= static_cast<double>(distinct);
    return Dist(n, std::move(m));
}

void wht(std::span<double> table) {
    const std::size_t len = table.size();
    if (len == 0 || !std::has_single_bit(len)) {
        throw ValidationError("Walsh-Hadamard transform needs a power-of-two length");
    }
    for (std::size_t h = 1; h < len; h <<= 1) {
        for (std::size_t i = 0; i < len; i += h << 1) {
            for (std::size_t j = i; j < i + h; ++j) {
                const double a = table[j];
                const double b = table[j + h];
                table[j] = a + b;
                table[j + h] = a - b;
            }
        }
    }
}

Dist xor_convolve(const Dist& p, const Dist& q) {
    require_same_n(p.n(), q.n());
    std::vector<double> a(p.masses().begin(), p.masses().end());
    std::vector<double> b(q.masses().begin(), q.masses().end());
    wht(a);
    wht(b);
    for (std::size_t i = 0; i < a.size(); ++i) a[i] *= b[i];
    wht(a);
    const double scale = 1.0 / static_cast<double>(a.size());
    for (double& x : a) x *= scale;
    return Dist(p.n(), clean(std::move(a)));
}

Dist xor_convolve_naive(const Dist& p, const Dist& q) {
    require_same_n(p.n(), q.n());
    std::vector<double> out(p.size(), 0.0);
    for (Bits x = 0; x < p.size(); ++x) {
        if (p[x] == 0.0) continue;
        for (Bits y = 0; y < q.size(); ++y) out[x ^ y] += p[x] * q[y];
    }
    return Dist(p.n(), clean(std::move(out)));
}

Dist pushforward_quotient(const Dist& p, const Subspace& v) {
    require_same_n(p.n(), v.n());
    if (v.dim() == 0) return p;
    std::vector<double> out(p.size(), 0.0);
    for (Bits x = 0; x < p.size(); ++x) {
        if (p[x] != 0.0) out[v.reduce(x)] += p[x];
    }
    return Dist(p.n(), std::move(out));
}

double sum_probability(const Dist& p, const Dist& q, Bits u) {
    require_same_n(p.n(), q.n());
    check_element(u, p.n());
    double total = 0.0;
    for (Bits x = 0; x < p.size(); ++x) total += p[x] * q[x ^ u];
    return total;
}

Dist condition_on_sum(const Dist& p, const Dist& q, Bits u) {
    require_same_n(p.n(), q.n());
    check_element(u, p.n());
    std::vector<double> m(p.size(), 0.0);
    double total = 0.0;
    for (Bits x = 0; x < p.size(); ++x) {
        m[x] = p[x] * q[x ^ u];
        total += m[x];
    }
    if (total <= tol::kMassClamp) {
        throw ConditioningError("conditioning on X+Y = " + to_binary(u, p.n()) +
                                ", an event of probability zero");
    }
    for (double& x : m) x /= total;
    return Dist(p.n(), std::move(m));
}

Dist condition_on_coset(const Dist& p, const Subspace& v, Bits t) {
    require_same_n(p.n(), v.n());
    std::vector<double> m(p.size(), 0.0);
    double total = 0.0;
    for (Bits x = 0; x < p.size(); ++x) {
        if (p[x] != 0.0 && v.reduce(x) == t) {
            m[x] = p[x];
            total += p[x];
        }
    }
    if (total <= 0.0) {
        throw ConditioningError("coset " + to_binary(t, p.n()) + " has probability zero");
    }
    for (double& x : m) x /= total;
    return Dist(p.n(), std::move(m));
}

Dist mixture(std::span<const double> weights, std::span<const Dist> parts) {
    if (weights.size() != parts.size() || parts.empty()) {
        throw ValidationError("mixture: weight/part count mismatch");
    }
    const int n = parts.front().n();
    std::vector<double> m(parts.front().size(), 0.0);
    for (std::size_t i = 0; i < parts.size(); ++i) {
        require_same_n(n, parts[i].n());
        for (Bits x = 0; x < m.size(); ++x) m[x] += weights[i] * parts[i][x];
    }
    return Dist(n, clean(std::move(m)));
}

JointDist::JointDist(std::vector<int> block_dims, std::vector<double> mass)
    : dims_(std::move(block_dims)), mass_(std::move(mass)) {
    if (dims_.empty() || dims_.size() > static_cast<std::size_t>(caps::kMaxJointBlocks)) {
        throw CapacityError("a joint distribution has between 1 and 4 blocks");
    }
    int bits = 0;
    for (int d : dims_) {
        if (d < 0) throw ValidationError("negative block dimension");
        offsets_.push_back(bits);
        bits += d;
    }
    if (bits > caps::max_joint_bits()) {
        throw CapacityError("joint table of " + std::to_string(bits) + " bits exceeds cap of " +
                            std::to_string(caps::max_joint_bits()));
    }
    if (mass_.size() != (std::size_t{1} << bits)) {
        throw ValidationError("joint mass table has the wrong length");
    }
    double total = 0.0;
    for (double m : mass_) {
        if (!(m >= 0.0)) throw ValidationError("negative joint mass");
        total += m;
    }
    if (std::abs(total - 1.0) > tol::kNormalization) {
        throw ValidationError("joint masses sum to " + std::to_string(total));
    }
}

int JointDist::total_bits() const noexcept {
    return std::accumulate(dims_.begin(), dims_.end(), 0);
}

Bits JointDist::block_value(std::uint64_t index, std::size_t b) const noexcept {
    return static_cast<Bits>((index >> offsets_[b]) & ((std::uint64_t{1} << dims_[b]) - 1));
}

JointDist JointDist::marginal(const std::vector<std::size_t>& keep) const {
    std::vector<int> out_dims;
    for (std::size_t b : keep) {
        if (b >= dims_.size()) throw ValidationError("block index out of range");
        out_dims.push_back(dims_[b]);
    }
    int out_bits = std::accumulate(out_dims.begin(), out_dims.end(), 0);
    std::vector<double> out(std::size_t{1} << out_bits, 0.0);
    for (std::uint64_t i = 0; i < mass_.size(); ++i) {
        if (mass_[i] == 0.0) continue;
        std::uint64_t key = 0;
        int shift = 0;
        for (std::size_t k = 0; k < keep.size(); ++k) {
            key |= static_cast<std::uint64_t>(block_value(i, keep[k])) << shift;
            shift += out_dims[k];
        }
        out[key] += mass_[i];
    }
    return JointDist(std::move(out_dims), std::move(out));
}

Dist JointDist::block(std::size_t index) const {
    auto m = marginal({index});
    return Dist(dims_[index], std::vector<double>(m.masses().begin(), m.masses().end()));
}

JointDist product(std::span<const Dist> factors) {
    if (factors.empty() || factors.size() > static_cast<std::size_t>(caps::kMaxJointBlocks)) {
        throw CapacityError("product takes between 1 and 4 factors");
    }
    std::vector<int> dims;
    int bits = 0;
    for (const auto& f : factors) {
        dims.push_back(f.n());
        bits += f.n();
    }
    if (bits > caps::max_joint_bits()) {
        throw CapacityError("product table of " + std::to_string(bits) + " bits exceeds cap");
    }
    std::vector<double> mass{1.0};
    int shift = 0;
    for (const auto& f : factors) {
        std::vector<double> next(mass.size() << f.n(), 0.0);
        for (Bits x = 0; x < f.size(); ++x) {
            if (f[x] == 0.0) continue;
            for (std::size_t i = 0; i < mass.size(); ++i) {
                next[i | (static_cast<std::size_t>(x) << shift)] = mass[i] * f[x];
            }
        }
        mass = std::move(next);
        shift += f.n();
    }
    return JointDist(std::move(dims), std::move(mass));
}

JointDist map_joint(const JointDist& joint, const LinearMapSpec& spec) {
    if (spec.empty() || spec.size() > static_cast<std::size_t>(caps::kMaxJointBlocks)) {
        throw ValidationError("linear map must have between 1 and 4 output blocks");
    }
    std::vector<int> out_dims;
    for (const auto& inputs : spec) {
        if (inputs.empty()) throw ValidationError("output block with no inputs");
        const std::size_t first = inputs.front();
        if (first >= joint.blocks()) throw ValidationError("input block out of range");
        for (std::size_t b : inputs) {
            if (b >= joint.blocks()) throw ValidationError("input block out of range");
            if (joint.block_dims()[b] != joint.block_dims()[first]) {
                throw ValidationError("XOR of blocks with different widths");
            }
        }
        out_dims.push_back(joint.block_dims()[first]);
    }
    const int out_bits = std::accumulate(out_dims.begin(), out_dims.end(), 0);
    if (out_bits > caps::max_joint_bits()) throw CapacityError("mapped joint exceeds cap");
    std::vector<double> out(std::size_t{1} << out_bits, 0.0);
    const auto mass = joint.masses();
    for (std::uint64_t i = 0; i < mass.size(); ++i) {
        if (mass[i] == 0.0) continue;
        std::uint64_t key = 0;
        int shift = 0;
        for (std::size_t k = 0; k < spec.size(); ++k) {
            Bits v = 0;
            for (std::size_t b : spec[k]) v ^= joint.block_value(i, b);
            key |= static_cast<std::uint64_t>(v) << shift;
            shift += out_dims[k];
        }
        out[key] += mass[i];
    }
    return JointDist(std::move(out_dims), std::move(out));
}

}  // namespace entropic
