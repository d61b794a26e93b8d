#include "entropic/sets.hpp"

#include <algorithm>
#include <cmath>

#include "entropic/errors.hpp"
#include "entropic/tolerance.hpp"

namespace entropic {

ElementSet ElementSet::from(int n, std::vector<Bits> elements) {
    if (n < 0 || n > caps::kMaxElementDim) throw CapacityError("set dimension out of range");
    for (Bits x : elements) check_element(x, n);
    std::sort(elements.begin(), elements.end());
    elements.erase(std::unique(elements.begin(), elements.end()), elements.end());
    return ElementSet{n, std::move(elements)};
}

ElementSet sumset(const ElementSet& a) {
    if (a.elements.empty()) throw EmptySupportError("sumset of the empty set");
    std::vector<bool> seen(std::size_t{1} << a.n, false);
    for (std::size_t i = 0; i < a.size(); ++i) {
        for (std::size_t j = i; j < a.size(); ++j) seen[a.elements[i] ^ a.elements[j]] = true;
    }
    ElementSet out{a.n, {}};
    for (Bits x = 0; x < seen.size(); ++x) {
        if (seen[x]) out.elements.push_back(x);
    }
    return out;
}

DoublingStats doubling_stats(const ElementSet& a) {
    DoublingStats s;
    s.size = a.size();
    s.sumset_size = sumset(a).size();
    if (s.size > 1) {
        s.eta = 2.0 - std::log2(static_cast<double>(s.sumset_size)) /
                          std::log2(static_cast<double>(s.size));
    }
    return s;
}

}  // namespace entropic
