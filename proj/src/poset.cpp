#include "crested/poset.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

namespace crested {

std::vector<int> sorted_members(IndexSet s) {
    std::vector<int> out;
    for (int i = 0; i < 32; ++i)
        if (set_contains(s, i)) out.push_back(i);
    return out;
}

std::string format_set(IndexSet s) {
    std::ostringstream os;
    os << '{';
    bool first = true;
    for (int i : sorted_members(s)) {
        if (!first) os << ',';
        os << (i + 1);
        first = false;
    }
    os << '}';
    return os.str();
}

namespace {

// size first, then lexicographic on the sorted member lists
bool antichain_order(IndexSet a, IndexSet b) {
    const int sa = set_size(a), sb = set_size(b);
    if (sa != sb) return sa < sb;
    return sorted_members(a) < sorted_members(b);
}

}  // namespace

Poset Poset::from_covers(int n, const std::vector<std::pair<int, int>>& covers) {
    if (n < 1 || n > 31) throw IndexError("poset size must be in 1..31");
    Poset p;
    p.n_ = n;
    p.up_.assign(n, 0);
    p.down_.assign(n, 0);
    std::vector<IndexSet> above(n, 0);  // direct relations, lower -> upper
    for (auto [lo, hi] : covers) {
        if (lo < 0 || lo >= n || hi < 0 || hi >= n)
            throw IndexError("cover pair references an element outside 1..n");
        if (lo == hi) throw CycleError("cover pair relates an element to itself");
        above[lo] = set_with(above[lo], hi);
    }
    // reflexive-transitive closure (Warshall over bitmasks)
    for (int i = 0; i < n; ++i) p.up_[i] = set_with(above[i], i);
    for (int k = 0; k < n; ++k)
        for (int i = 0; i < n; ++i)
            if (set_contains(p.up_[i], k)) p.up_[i] |= p.up_[k];
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (i != j && set_contains(p.up_[i], j) && set_contains(p.up_[j], i))
                throw CycleError("relation closure violates antisymmetry");
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (set_contains(p.up_[j], i)) p.down_[i] = set_with(p.down_[i], j);
    // canonical covers: i < j with nothing strictly between
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            if (i == j || !set_contains(p.up_[i], j)) continue;
            bool direct = true;
            for (int k = 0; k < n && direct; ++k)
                if (k != i && k != j && set_contains(p.up_[i], k) && set_contains(p.up_[k], j))
                    direct = false;
            if (direct) p.covers_.emplace_back(i, j);
        }
    }
    std::sort(p.covers_.begin(), p.covers_.end());
    return p;
}

Poset Poset::chain(int n) {
    // 0 > 1 > ... > n-1: element k+1 lies below element k
    std::vector<std::pair<int, int>> covers;
    for (int i = 0; i + 1 < n; ++i) covers.emplace_back(i + 1, i);
    return from_covers(n, covers);
}

Poset Poset::antichain(int n) { return from_covers(n, {}); }

bool Poset::leq(int i, int j) const {
    if (i < 0 || i >= n_ || j < 0 || j >= n_) throw IndexError("element outside 1..n");
    return set_contains(up_[i], j);
}

IndexSet Poset::ancestral(int i) const {
    if (i < 0 || i >= n_) throw IndexError("element outside 1..n");
    return up_[i] & ~(IndexSet{1} << i);
}

IndexSet Poset::hereditary(int i) const {
    if (i < 0 || i >= n_) throw IndexError("element outside 1..n");
    return down_[i] & ~(IndexSet{1} << i);
}

IndexSet Poset::ancestral_closed(int i) const {
    if (i < 0 || i >= n_) throw IndexError("element outside 1..n");
    return up_[i];
}

IndexSet Poset::hereditary_closed(int i) const {
    if (i < 0 || i >= n_) throw IndexError("element outside 1..n");
    return down_[i];
}

IndexSet Poset::ancestral(IndexSet j) const {
    IndexSet out = 0;
    for (int i : sorted_members(j)) out |= ancestral(i);
    return out;
}

IndexSet Poset::hereditary(IndexSet j) const {
    IndexSet out = 0;
    for (int i : sorted_members(j)) out |= hereditary(i);
    return out;
}

IndexSet Poset::ancestral_closed(IndexSet j) const {
    IndexSet out = 0;
    for (int i : sorted_members(j)) out |= ancestral_closed(i);
    return out;
}

IndexSet Poset::hereditary_closed(IndexSet j) const {
    IndexSet out = 0;
    for (int i : sorted_members(j)) out |= hereditary_closed(i);
    return out;
}

bool Poset::is_antichain(IndexSet s) const {
    const auto members = sorted_members(s);
    for (std::size_t a = 0; a < members.size(); ++a)
        for (std::size_t b = a + 1; b < members.size(); ++b)
            if (comparable(members[a], members[b])) return false;
    return true;
}

bool Poset::is_ancestral(IndexSet s) const {
    for (int i : sorted_members(s))
        if ((ancestral(i) & ~s) != 0) return false;
    return true;
}

std::vector<IndexSet> Poset::antichains() const {
    if (n_ > 16) throw SizeLimitError("exhaustive antichain enumeration limited to n <= 16");
    std::vector<IndexSet> out;
    const IndexSet all = full_set(n_);
    for (IndexSet s = 0; s <= all; ++s) {
        if (is_antichain(s)) out.push_back(s);
        if (s == all) break;
    }
    std::sort(out.begin(), out.end(), antichain_order);
    return out;
}

IndexSet Poset::maximal_elements() const {
    IndexSet out = 0;
    for (int i = 0; i < n_; ++i)
        if (ancestral(i) == 0) out = set_with(out, i);
    return out;
}

IndexSet Poset::ancestral_of_antichain(IndexSet s) const {
    return full_set(n_) & ~hereditary_closed(s);
}

IndexSet Poset::antichain_of_ancestral(IndexSet a) const {
    if (!is_ancestral(a)) throw NotAncestralError("set is not ancestral: " + format_set(a));
    const IndexSet down = full_set(n_) & ~a;  // H[S], hereditary
    IndexSet s = 0;
    for (int i : sorted_members(down))
        if ((ancestral(i) & down) == 0) s = set_with(s, i);  // maximal inside the down-set
    return s;
}

AncestralPoset Poset::ancestral_poset() const {
    AncestralPoset ap;
    ap.nodes.push_back(full_set(n_));
    ap.origin.push_back(-1);
    for (int i = 0; i < n_; ++i) {
        const IndexSet a = ancestral_of_antichain(IndexSet{1} << i);
        for (std::size_t k = 0; k < ap.nodes.size(); ++k) {
            if (ap.nodes[k] == a)
                throw InvalidSpecError("distinct elements produced the same ancestral set");
        }
        ap.nodes.push_back(a);
        ap.origin.push_back(i);
    }
    const int m = ap.size();
    for (int a = 0; a < m; ++a) {
        for (int b = 0; b < m; ++b) {
            if (!ap.less(a, b)) continue;
            bool direct = true;
            for (int c = 0; c < m && direct; ++c)
                if (ap.less(a, c) && ap.less(c, b)) direct = false;
            if (direct) ap.covers.emplace_back(a, b);
        }
    }
    std::sort(ap.covers.begin(), ap.covers.end());
    return ap;
}

bool AncestralPoset::less(int a, int b) const {
    return nodes[a] != nodes[b] && (nodes[a] & nodes[b]) == nodes[b];
}

std::vector<int> AncestralPoset::covers_above(int node) const {
    std::vector<int> out;
    for (auto [lo, hi] : covers)
        if (lo == node) out.push_back(hi);
    return out;
}

std::vector<int> AncestralPoset::covers_below(int node) const {
    std::vector<int> out;
    for (auto [lo, hi] : covers)
        if (hi == node) out.push_back(lo);
    return out;
}

std::vector<std::vector<int>> AncestralPoset::maximal_chains() const {
    std::vector<std::vector<int>> out;
    std::vector<int> path{0};
    auto dfs = [&](auto&& self, int node) -> void {
        const auto ups = covers_above(node);
        if (ups.empty()) {
            out.push_back(path);
            return;
        }
        for (int up : ups) {
            path.push_back(up);
            self(self, up);
            path.pop_back();
        }
    };
    dfs(dfs, 0);
    return out;
}

std::vector<std::vector<int>> Poset::automorphisms() const {
    if (n_ > 10) throw SizeLimitError("automorphism search limited to n <= 10");
    std::vector<std::vector<int>> out;
    std::vector<int> perm(n_);
    std::iota(perm.begin(), perm.end(), 0);
    do {
        bool ok = true;
        for (int i = 0; i < n_ && ok; ++i)
            for (int j = 0; j < n_ && ok; ++j)
                if (leq(i, j) != leq(perm[i], perm[j])) ok = false;
        if (ok) out.push_back(perm);
    } while (std::next_permutation(perm.begin(), perm.end()));
    return out;
}

}  // namespace crested
