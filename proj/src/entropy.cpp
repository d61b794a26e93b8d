#include "entropic/entropy.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <numeric>
#include <utility>

#include "entropic/errors.hpp"
#include "entropic/tolerance.hpp"

namespace entropic {

namespace {

void require_same_n(int a, int b) {
    if (a != b) throw DimensionMismatch("ambient dimensions differ");
}

double plogp(double m) { return m > tol::kMassClamp ? -m * std::log2(m) : 0.0; }

BlockSet merged(const BlockSet& a, const BlockSet& b) {
    BlockSet out = a;
    for (std::size_t x : b) {
        if (std::find(out.begin(), out.end(), x) == out.end()) out.push_back(x);
    }
    return out;
}

// Entropy of the key marginal `mask` of a sparse joint given as (key, mass) pairs.
double sparse_entropy(const std::vector<std::pair<std::uint64_t, double>>& entries,
                      std::uint64_t mask) {
    std::vector<std::pair<std::uint64_t, double>> v;
    v.reserve(entries.size());
    for (const auto& [k, m] : entries) v.emplace_back(k & mask, m);
    std::sort(v.begin(), v.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    double h = 0.0;
    std::size_t i = 0;
    while (i < v.size()) {
        double acc = 0.0;
        const std::uint64_t key = v[i].first;
        while (i < v.size() && v[i].first == key) acc += v[i++].second;
        h += plogp(acc);
    }
    return h;
}

// Fibers of a distribution over cosets of V, each written in V's basis coordinates
// and already Walsh-Hadamard transformed.
struct LocalFibers {
    std::vector<double> weights;
    std::vector<double> entropies;
    std::vector<std::vector<double>> spectra;
};

LocalFibers local_fibers(const Dist& p, const Subspace& v) {
    const std::size_t local = std::size_t{1} << v.dim();
    std::map<Bits, std::vector<double>> by_coset;
    for (Bits x = 0; x < p.size(); ++x) {
        if (p[x] == 0.0) continue;
        const Bits t = v.reduce(x);
        auto& tab = by_coset[t];
        if (tab.empty()) tab.assign(local, 0.0);
        tab[v.coordinates(x ^ t)] += p[x];
    }
    LocalFibers out;
    for (auto& [t, tab] : by_coset) {
        const double w = std::accumulate(tab.begin(), tab.end(), 0.0);
        for (double& m : tab) m /= w;
        out.weights.push_back(w);
        out.entropies.push_back(shannon_entropy(tab));
        wht(tab);
        out.spectra.push_back(std::move(tab));
    }
    return out;
}

// H of the convolution of two fibers given by their spectra.
double convolved_entropy(const std::vector<double>& a, const std::vector<double>& b,
                         std::vector<double>& scratch) {
    scratch.resize(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) scratch[i] = a[i] * b[i];
    wht(scratch);
    const double scale = 1.0 / static_cast<double>(a.size());
    double h = 0.0;
    for (double m : scratch) h += plogp(m * scale);
    return h;
}

}  // namespace

double shannon_entropy(std::span<const double> masses) {
    double h = 0.0;
    for (double m : masses) h += plogp(m);
    return h;
}

double shannon_entropy(const Dist& p) { return shannon_entropy(p.masses()); }

double joint_entropy(const JointDist& j, const BlockSet& blocks) {
    if (blocks.empty()) return 0.0;
    return shannon_entropy(j.marginal(blocks).masses());
}

double conditional_entropy(const JointDist& j, const BlockSet& target, const BlockSet& given) {
    return joint_entropy(j, merged(target, given)) - joint_entropy(j, given);
}

double mutual_information(const JointDist& j, const BlockSet& a, const BlockSet& b) {
    return joint_entropy(j, a) + joint_entropy(j, b) - joint_entropy(j, merged(a, b));
}

double conditional_mutual_information(const JointDist& j, const BlockSet& a, const BlockSet& b,
                                      const BlockSet& s) {
    return joint_entropy(j, merged(a, s)) + joint_entropy(j, merged(b, s)) -
           joint_entropy(j, merged(merged(a, b), s)) - joint_entropy(j, s);
}

double ruzsa_distance(const Dist& p, const Dist& q) {
    require_same_n(p.n(), q.n());
    return shannon_entropy(xor_convolve(p, q)) - 0.5 * shannon_entropy(p) -
           0.5 * shannon_entropy(q);
}

double doubling_mass(const Dist& p, const Dist& q) {
    require_same_n(p.n(), q.n());
    return shannon_entropy(p) + shannon_entropy(q) - shannon_entropy(xor_convolve(p, q));
}

double quotient_entropy(const Dist& p, const Subspace& v) {
    require_same_n(p.n(), v.n());
    return shannon_entropy(pushforward_quotient(p, v));
}

double quotient_entropy_via_sum(const Dist& p, const Subspace& v) {
    require_same_n(p.n(), v.n());
    return shannon_entropy(xor_convolve(p, uniform_on(v.elements(), v.n()))) -
           static_cast<double>(v.dim());
}

Dist FiberFamily::base() const { return mixture(weights, fibers); }

double FiberFamily::conditional_entropy() const {
    double h = 0.0;
    for (std::size_t i = 0; i < fibers.size(); ++i) h += weights[i] * shannon_entropy(fibers[i]);
    return h;
}

FiberFamily FiberFamily::truncated(std::size_t cap) const {
    if (cap == 0 || cap >= fibers.size()) return *this;
    std::vector<std::size_t> order(fibers.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return weights[a] > weights[b]; });
    order.resize(cap);
    std::sort(order.begin(), order.end());
    FiberFamily out;
    double total = 0.0;
    for (std::size_t i : order) total += weights[i];
    for (std::size_t i : order) {
        out.labels.push_back(labels[i]);
        out.weights.push_back(weights[i] / total);
        out.fibers.push_back(fibers[i]);
    }
    return out;
}

FiberFamily fibers_of_sum(const Dist& p, const Dist& q) {
    require_same_n(p.n(), q.n());
    const Dist sum = xor_convolve(p, q);
    FiberFamily fam;
    for (Bits u : sum.support()) {
        fam.labels.push_back(u);
        fam.weights.push_back(sum[u]);
        fam.fibers.push_back(condition_on_sum(p, q, u));
    }
    return fam;
}

FiberFamily fibers_of_quotient(const Dist& p, const Subspace& v) {
    require_same_n(p.n(), v.n());
    const Dist pushed = pushforward_quotient(p, v);
    FiberFamily fam;
    for (Bits t : pushed.support()) {
        fam.labels.push_back(t);
        fam.weights.push_back(pushed[t]);
        fam.fibers.push_back(condition_on_coset(p, v, t));
    }
    return fam;
}

double conditional_doubling_mass(const FiberFamily& fx, const FiberFamily& fy) {
    if (fx.weights.size() != fx.fibers.size() || fy.weights.size() != fy.fibers.size()) {
        throw ValidationError("fiber family: weight/fiber length mismatch");
    }
    if (fx.fibers.empty() || fy.fibers.empty()) throw ValidationError("empty fiber family");
    const int n = fx.fibers.front().n();
    auto spectra = [n](const FiberFamily& f, std::vector<std::vector<double>>& spec,
                       std::vector<double>& ent) {
        for (const auto& d : f.fibers) {
            require_same_n(n, d.n());
            ent.push_back(shannon_entropy(d));
            std::vector<double> s(d.masses().begin(), d.masses().end());
            wht(s);
            spec.push_back(std::move(s));
        }
    };
    std::vector<std::vector<double>> sx, sy;
    std::vector<double> hx, hy;
    spectra(fx, sx, hx);
    spectra(fy, sy, hy);
    std::vector<double> scratch;
    double total = 0.0;
    for (std::size_t i = 0; i < sx.size(); ++i) {
        for (std::size_t j = 0; j < sy.size(); ++j) {
            const double s = hx[i] + hy[j] - convolved_entropy(sx[i], sy[j], scratch);
            total += fx.weights[i] * fy.weights[j] * s;
        }
    }
    return total;
}

double fiber_interaction(const Dist& p, const Dist& q, const Subspace& v) {
    require_same_n(p.n(), q.n());
    require_same_n(p.n(), v.n());
    if (v.dim() == 0) return 0.0;
    const LocalFibers a = local_fibers(p, v);
    const LocalFibers b = local_fibers(q, v);
    std::vector<double> scratch;
    double total = 0.0;
    for (std::size_t i = 0; i < a.weights.size(); ++i) {
        for (std::size_t j = 0; j < b.weights.size(); ++j) {
            const double s = a.entropies[i] + b.entropies[j] -
                             convolved_entropy(a.spectra[i], b.spectra[j], scratch);
            total += a.weights[i] * b.weights[j] * s;
        }
    }
    return total;
}

double nested_fiber_interaction(const Dist& p, const Dist& q, const Subspace& w, const Subspace& v) {
    if (!v.contains(w)) throw ValidationError("nested_fiber_interaction: W is not contained in V");
    return fiber_interaction(pushforward_quotient(p, w), pushforward_quotient(q, w), v);
}

FibringReport fibring_decompose(const Dist& p, const Dist& q, const Subspace& v) {
    require_same_n(p.n(), q.n());
    require_same_n(p.n(), v.n());
    FibringReport r;
    r.s_total = doubling_mass(p, q);
    r.s_quotient = doubling_mass(pushforward_quotient(p, v), pushforward_quotient(q, v));
    r.s_fiber = fiber_interaction(p, q, v);

    // Blocks: A = X+Y, B = (pi X, pi Y), S = pi(X+Y).
    const int n = p.n();
    std::vector<std::pair<std::uint64_t, double>> joint;
    const auto sp = p.support();
    const auto sq = q.support();
    joint.reserve(sp.size() * sq.size());
    for (Bits x : sp) {
        const std::uint64_t px = v.reduce(x);
        for (Bits y : sq) {
            const std::uint64_t key = static_cast<std::uint64_t>(x ^ y) | (px << n) |
                                      (static_cast<std::uint64_t>(v.reduce(y)) << (2 * n)) |
                                      (static_cast<std::uint64_t>(v.reduce(x ^ y)) << (3 * n));
            joint.emplace_back(key, p[x] * q[y]);
        }
    }
    const std::uint64_t block = (std::uint64_t{1} << n) - 1;
    const std::uint64_t a = block;
    const std::uint64_t b = (block << n) | (block << (2 * n));
    const std::uint64_t s = block << (3 * n);
    r.residual_mi = sparse_entropy(joint, a | s) + sparse_entropy(joint, b | s) -
                    sparse_entropy(joint, a | b | s) - sparse_entropy(joint, s);
    return r;
}

}  // namespace entropic
