#include "entropic/gf2.hpp"

#include <algorithm>
#include <bit>
#include <mutex>
#include <sstream>

#include "entropic/errors.hpp"
#include "entropic/tolerance.hpp"

namespace entropic {

namespace {

int pivot_of(Bits row) { return std::bit_width(row) - 1; }

void check_dim(int n) {
    if (n < 0 || n > caps::kMaxElementDim) {
        throw CapacityError("ambient dimension " + std::to_string(n) + " outside [0, " +
                            std::to_string(caps::kMaxElementDim) + "]");
    }
}

void require_same_n(int a, int b) {
    if (a != b) {
        throw DimensionMismatch("ambient dimensions differ: " + std::to_string(a) + " vs " +
                                std::to_string(b));
    }
}

// Inserts x into a canonical basis held in `rows` (decreasing pivots).
void insert_row(std::vector<Bits>& rows, Bits x) {
    for (Bits r : rows) {
        if (x & (Bits{1} << pivot_of(r))) x ^= r;
    }
    if (x == 0) return;
    const Bits p = Bits{1} << pivot_of(x);
    for (Bits& r : rows) {
        if (r & p) r ^= x;
    }
    auto pos = std::find_if(rows.begin(), rows.end(), [&](Bits r) { return r < x; });
    rows.insert(pos, x);
}

}  // namespace

void check_element(Bits x, int n) {
    check_dim(n);
    if (n < 32 && (x >> n) != 0) {
        throw ValidationError("element 0x" + [&] {
            std::ostringstream os;
            os << std::hex << x;
            return os.str();
        }() + " does not fit in F_2^" + std::to_string(n));
    }
}

GroupElement::GroupElement(Bits bits, int n) : bits_(bits), n_(n) { check_element(bits, n); }

GroupElement GroupElement::operator+(const GroupElement& other) const {
    require_same_n(n_, other.n_);
    return GroupElement(bits_ ^ other.bits_, n_);
}

GroupElement parse_binary(const std::string& text) {
    Bits bits = 0;
    for (char c : text) {
        if (c != '0' && c != '1') throw ValidationError("not a binary numeral: " + text);
        bits = (bits << 1) | static_cast<Bits>(c - '0');
    }
    return GroupElement(bits, static_cast<int>(text.size()));
}

std::string to_binary(Bits bits, int n) {
    std::string s(static_cast<std::size_t>(n), '0');
    for (int i = 0; i < n; ++i) {
        if (bits & (Bits{1} << i)) s[static_cast<std::size_t>(n - 1 - i)] = '1';
    }
    return s;
}

Subspace::Subspace(int n) : n_(n) { check_dim(n); }

Subspace Subspace::from_rref(int n, std::vector<Bits> basis) {
    check_dim(n);
    Subspace v(n);
    for (Bits b : basis) {
        check_element(b, n);
        if (b == 0) throw ValidationError("zero row in basis");
    }
    for (std::size_t i = 0; i + 1 < basis.size(); ++i) {
        if (pivot_of(basis[i]) <= pivot_of(basis[i + 1])) {
            throw ValidationError("basis pivots are not strictly decreasing");
        }
    }
    Bits pivots = 0;
    for (Bits b : basis) pivots |= Bits{1} << pivot_of(b);
    for (Bits b : basis) {
        if ((b & pivots) != (Bits{1} << pivot_of(b))) {
            throw ValidationError("basis is not reduced: a pivot column is set in another row");
        }
    }
    v.basis_ = std::move(basis);
    v.pivots_ = pivots;
    return v;
}

Subspace Subspace::full(int n) {
    std::vector<Bits> rows;
    for (int i = n - 1; i >= 0; --i) rows.push_back(Bits{1} << i);
    return from_rref(n, std::move(rows));
}

bool Subspace::contains(const Subspace& other) const {
    require_same_n(n_, other.n_);
    return std::all_of(other.basis_.begin(), other.basis_.end(),
                       [&](Bits b) { return contains(b); });
}

Bits Subspace::reduce(Bits x) const noexcept {
    for (Bits r : basis_) {
        if (x & (Bits{1} << pivot_of(r))) x ^= r;
    }
    return x;
}

Bits Subspace::coordinates(Bits x) const noexcept {
    Bits c = 0;
    for (std::size_t i = 0; i < basis_.size(); ++i) {
        if (x & (Bits{1} << pivot_of(basis_[i]))) c |= Bits{1} << i;
    }
    return c;
}

Bits Subspace::combine(Bits coords) const noexcept {
    Bits x = 0;
    for (std::size_t i = 0; i < basis_.size(); ++i) {
        if (coords & (Bits{1} << i)) x ^= basis_[i];
    }
    return x;
}

std::vector<Bits> Subspace::elements() const {
    std::vector<Bits> out(std::size_t{1} << basis_.size());
    for (Bits c = 0; c < out.size(); ++c) out[c] = combine(c);
    return out;
}

Subspace Subspace::complement() const {
    std::vector<Bits> rows;
    for (int i = n_ - 1; i >= 0; --i) {
        if (!(pivots_ & (Bits{1} << i))) rows.push_back(Bits{1} << i);
    }
    return from_rref(n_, std::move(rows));
}

std::string Subspace::to_string() const {
    std::string s = "span{";
    for (std::size_t i = 0; i < basis_.size(); ++i) {
        if (i) s += ",";
        s += to_binary(basis_[i], n_);
    }
    return s + "}";
}

std::strong_ordering Subspace::operator<=>(const Subspace& other) const {
    if (auto c = n_ <=> other.n_; c != 0) return c;
    if (auto c = basis_.size() <=> other.basis_.size(); c != 0) return c;
    return std::lexicographical_compare_three_way(basis_.begin(), basis_.end(),
                                                  other.basis_.begin(), other.basis_.end());
}

GroupElement QuotientMap::project(const GroupElement& x) const {
    require_same_n(x.n(), v_.n());
    return GroupElement(v_.reduce(x.bits()), x.n());
}

Subspace span_bits(std::span<const Bits> vectors, int n) {
    check_dim(n);
    std::vector<Bits> rows;
    for (Bits x : vectors) {
        check_element(x, n);
        insert_row(rows, x);
    }
    Subspace v(n);
    Bits pivots = 0;
    for (Bits r : rows) pivots |= Bits{1} << pivot_of(r);
    v.basis_ = std::move(rows);
    v.pivots_ = pivots;
    return v;
}

Subspace span(std::span<const GroupElement> vectors, int n) {
    std::vector<Bits> raw;
    raw.reserve(vectors.size());
    for (const auto& g : vectors) {
        require_same_n(g.n(), n);
        raw.push_back(g.bits());
    }
    return span_bits(raw, n);
}

Subspace subspace_sum(const Subspace& a, const Subspace& b) {
    require_same_n(a.n(), b.n());
    std::vector<Bits> all = a.basis();
    all.insert(all.end(), b.basis().begin(), b.basis().end());
    return span_bits(all, a.n());
}

Subspace subspace_intersect(const Subspace& a, const Subspace& b) {
    require_same_n(a.n(), b.n());
    // Kernel of c -> reduce_b(sum c_i a_i); reduce_b is linear, so eliminate
    // the images while tracking which combination of a-rows produced them.
    const auto& rows = a.basis();
    struct Tracked {
        Bits image;
        Bits combo;
    };
    std::vector<Tracked> pivots;
    std::vector<Bits> kernel;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        Tracked t{b.reduce(rows[i]), Bits{1} << i};
        for (const auto& p : pivots) {
            if (t.image & (Bits{1} << pivot_of(p.image))) {
                t.image ^= p.image;
                t.combo ^= p.combo;
            }
        }
        if (t.image == 0) {
            kernel.push_back(a.combine(t.combo));
        } else {
            pivots.push_back(t);
        }
    }
    return span_bits(kernel, a.n());
}

Subspace lift_through_quotient(const Subspace& v, const Subspace& vq) {
    require_same_n(v.n(), vq.n());
    return subspace_sum(v, subspace_intersect(vq, v.complement()));
}

std::uint64_t gaussian_binomial(int n, int k) {
    if (k < 0 || k > n) return 0;
    std::uint64_t num = 1;
    std::uint64_t den = 1;
    for (int i = 0; i < k; ++i) {
        num *= (std::uint64_t{1} << (n - i)) - 1;
        den *= (std::uint64_t{1} << (i + 1)) - 1;
    }
    return num / den;
}

std::span<const Subspace> enumerate_subspaces(int n, int max_dim) {
    if (n < 0 || n > caps::kMaxEnumerationDim) {
        throw CapacityError("exhaustive subspace enumeration is limited to n <= " +
                            std::to_string(caps::kMaxEnumerationDim));
    }
    if (max_dim < 0) max_dim = 0;
    if (max_dim > n) max_dim = n;

    static std::mutex mu;
    static std::vector<std::vector<Subspace>> cache(caps::kMaxEnumerationDim + 1);
    std::lock_guard lock(mu);
    auto& all = cache[static_cast<std::size_t>(n)];
    if (all.empty()) {
        // Walk pivot sets; free entries sit at non-pivot positions below each pivot.
        for (int k = 0; k <= n; ++k) {
            std::vector<Subspace> level;
            for (Bits pivots = 0; pivots < (Bits{1} << n); ++pivots) {
                if (std::popcount(pivots) != k) continue;
                std::vector<int> piv;
                for (int i = n - 1; i >= 0; --i) {
                    if (pivots & (Bits{1} << i)) piv.push_back(i);
                }
                std::vector<Bits> free_masks;
                int total_free = 0;
                for (int p : piv) {
                    Bits m = ((Bits{1} << p) - 1) & ~pivots;
                    free_masks.push_back(m);
                    total_free += std::popcount(m);
                }
                for (std::uint64_t choice = 0; choice < (std::uint64_t{1} << total_free); ++choice) {
                    std::vector<Bits> rows;
                    int used = 0;
                    for (std::size_t r = 0; r < piv.size(); ++r) {
                        Bits row = Bits{1} << piv[r];
                        for (int bit = 0; bit < n; ++bit) {
                            if (free_masks[r] & (Bits{1} << bit)) {
                                if (choice & (std::uint64_t{1} << used)) row |= Bits{1} << bit;
                                ++used;
                            }
                        }
                        rows.push_back(row);
                    }
                    level.push_back(Subspace::from_rref(n, std::move(rows)));
                }
            }
            std::sort(level.begin(), level.end());
            all.insert(all.end(), level.begin(), level.end());
        }
    }
    std::size_t count = 0;
    for (int k = 0; k <= max_dim; ++k) count += gaussian_binomial(n, k);
    return std::span<const Subspace>(all.data(), count);
}

std::map<Bits, std::vector<Bits>> coset_decompose(std::span<const Bits> set, const Subspace& v) {
    std::map<Bits, std::vector<Bits>> parts;
    for (Bits a : set) {
        check_element(a, v.n());
        parts[v.reduce(a)].push_back(a);
    }
    return parts;
}

}  // namespace entropic
