#pragma once

#include "sroot/lattice.hpp"
#include "sroot/numeric.hpp"
#include "sroot/relations.hpp"

#include <json.hpp>

#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <vector>

namespace sroot {

// Image vector [s(1), ..., s(n)], 1-based.
using Perm = std::vector<int>;

inline Perm identity_perm(int n) {
    Perm p(n);
    for (int i = 0; i < n; ++i) p[i] = i + 1;
    return p;
}

// (a b)(i) = a(b(i))
inline Perm compose(const Perm& a, const Perm& b) {
    Perm r(b.size());
    for (std::size_t i = 0; i < b.size(); ++i) r[i] = a[b[i] - 1];
    return r;
}

inline Perm inverse(const Perm& a) {
    Perm r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[a[i] - 1] = static_cast<int>(i) + 1;
    return r;
}

inline bool is_perm(const Perm& a) {
    std::vector<char> seen(a.size(), 0);
    for (int v : a) {
        if (v < 1 || v > static_cast<int>(a.size()) || seen[v - 1]) return false;
        seen[v - 1] = 1;
    }
    return true;
}

// Cycles such as {{1,3,6}} or {{2,5},{4,6}}: each cycle maps c[k] to c[k+1].
inline Perm from_cycles(int n, const std::vector<std::vector<int>>& cycles) {
    Perm p = identity_perm(n);
    for (const auto& c : cycles)
        for (std::size_t k = 0; k < c.size(); ++k) p[c[k] - 1] = c[(k + 1) % c.size()];
    return p;
}

inline std::string perm_string(const Perm& p) {
    std::string s = "[";
    for (std::size_t i = 0; i < p.size(); ++i) s += (i ? "," : "") + std::to_string(p[i]);
    return s + "]";
}

// s(x)_i = x_{s^-1(i)} on the first n coordinates; any further coordinates are fixed.
inline IntVec act(const Perm& s, const IntVec& x) {
    IntVec y = x;
    for (std::size_t i = 0; i < s.size(); ++i) y[s[i] - 1] = x[i];
    return y;
}

struct PermSet {
    int n = 0;
    std::vector<Perm> elements;  // sorted, unique

    std::size_t size() const { return elements.size(); }
    bool contains(const Perm& p) const { return std::binary_search(elements.begin(), elements.end(), p); }

    void normalize() {
        std::sort(elements.begin(), elements.end());
        elements.erase(std::unique(elements.begin(), elements.end()), elements.end());
    }

    bool is_group() const {
        if (!contains(identity_perm(n))) return false;
        for (const auto& a : elements) {
            if (!contains(inverse(a))) return false;
            for (const auto& b : elements)
                if (!contains(compose(a, b))) return false;
        }
        return true;
    }

    bool subset_of(const PermSet& o) const {
        for (const auto& a : elements)
            if (!o.contains(a)) return false;
        return true;
    }

    nlohmann::json to_json() const { return elements; }

    static PermSet from_json(const nlohmann::json& j) {
        PermSet s;
        for (const auto& e : j) {
            Perm p = e.get<Perm>();
            if (s.n == 0) s.n = static_cast<int>(p.size());
            if (static_cast<int>(p.size()) != s.n || !is_perm(p)) throw Error("ParseError", "bad permutation in set");
            s.elements.push_back(p);
        }
        s.normalize();
        return s;
    }
};

struct GroupSearchOptions {
    int max_degree = 10;
};

namespace detail {

// Permutations s with s(row) in the lattice of rows for every row.
// rows have `width` >= n columns; columns past n are fixed by the action.
inline PermSet lattice_stabilizer(int n, const IntMat& rows, const GroupSearchOptions& opt) {
    if (n > opt.max_degree)
        throw Error("DegreeTooLarge", "degree " + std::to_string(n) + " exceeds search cap " + std::to_string(opt.max_degree));
    PermSet out;
    out.n = n;
    if (rows.empty()) {
        throw Error("RankDeficient", "relation basis is empty");
    }
    const std::size_t width = rows[0].size();
    IntMat H = lattice::hnf(rows);
    IntMat K = lattice::integer_kernel(rows, width);  // s(row) in span_Q iff orthogonal to K

    // Row j is complete once its last support index has an image.
    std::vector<int> last_support(rows.size(), -1);
    for (std::size_t j = 0; j < rows.size(); ++j)
        for (int i = 0; i < n; ++i)
            if (rows[j][i] != 0) last_support[j] = i;

    // partial[j][k] = sum over assigned i of row_j[i] * K_k[s(i)] plus the fixed tail
    std::vector<IntVec> partial(rows.size(), IntVec(K.size(), 0));
    for (std::size_t j = 0; j < rows.size(); ++j)
        for (std::size_t k = 0; k < K.size(); ++k)
            for (std::size_t c = n; c < width; ++c) partial[j][k] += rows[j][c] * K[k][c];

    Perm s(n, 0);
    std::vector<char> used(n + 1, 0);

    auto rec = [&](auto&& self, int i) -> void {
        if (i == n) {
            for (const auto& r : rows)
                if (!lattice::in_lattice(H, act(s, r))) return;
            out.elements.push_back(s);
            return;
        }
        for (int v = 1; v <= n; ++v) {
            if (used[v]) continue;
            s[i] = v;
            used[v] = 1;
            bool ok = true;
            for (std::size_t j = 0; j < rows.size(); ++j) {
                if (rows[j][i] == 0) continue;
                for (std::size_t k = 0; k < K.size(); ++k) partial[j][k] += rows[j][i] * K[k][v - 1];
            }
            for (std::size_t j = 0; j < rows.size() && ok; ++j) {
                if (last_support[j] != i) continue;
                for (std::size_t k = 0; k < K.size(); ++k)
                    if (partial[j][k] != 0) {
                        ok = false;
                        break;
                    }
            }
            if (ok) self(self, i + 1);
            for (std::size_t j = 0; j < rows.size(); ++j) {
                if (rows[j][i] == 0) continue;
                for (std::size_t k = 0; k < K.size(); ++k) partial[j][k] -= rows[j][i] * K[k][v - 1];
            }
            used[v] = 0;
        }
    };
    rec(rec, 0);
    out.normalize();
    return out;
}

}  // namespace detail

// Permutations preserving the relation lattice (constant coordinate fixed).
inline PermSet compute_ghat(const RelationBasis& basis, const GroupSearchOptions& opt = {}) {
    return detail::lattice_stabilizer(basis.n, basis.rows, opt);
}

// Same on the left n-column block.
inline PermSet compute_g(const RelationBasis& basis, const GroupSearchOptions& opt = {}) {
    return detail::lattice_stabilizer(basis.n, basis.left_block(), opt);
}

struct CosetDecomposition {
    PermSet group;
    std::vector<Perm> representatives;  // sorted
};

// Lex-least element of s * group.
inline Perm coset_rep(const Perm& s, const PermSet& group) {
    Perm best;
    for (const auto& g : group.elements) {
        Perm c = compose(s, g);
        if (best.empty() || c < best) best = c;
    }
    return best;
}

inline CosetDecomposition coset_reps(const std::vector<Perm>& ambient, const PermSet& group) {
    std::set<Perm> amb(ambient.begin(), ambient.end());
    std::set<Perm> reps;
    for (const auto& s : amb) {
        for (const auto& g : group.elements)
            if (!amb.count(compose(s, g)))
                throw Error("NotClosed", "ambient set is not a union of cosets: " + perm_string(s) + " * " + perm_string(g));
        reps.insert(coset_rep(s, group));
    }
    return {group, std::vector<Perm>(reps.begin(), reps.end())};
}

// A with nu(M) = A M for the rows of the basis; nu must lie in G-hat.
inline IntMat transform_matrix(const Perm& nu, const RelationBasis& basis) {
    IntMat moved;
    for (const auto& r : basis.rows) moved.push_back(act(nu, r));
    auto sol = lattice::solve_left(basis.rows, moved);
    if (!sol) throw Error("NotInGhat", perm_string(nu) + " does not preserve the relation lattice");
    IntMat A;
    for (const auto& row : *sol) {
        IntVec a;
        for (const auto& q : row) {
            if (denom(q) != 1) throw Error("NotInGhat", perm_string(nu) + " maps the lattice to a superlattice");
            a.push_back(numer(q));
        }
        A.push_back(a);
    }
    return A;
}

// k at sigma -> k at sigma * nu.
inline IntVec transform_k(const Perm& nu, const RelationBasis& basis, const IntVec& k) {
    IntMat A = transform_matrix(nu, basis);
    IntVec out(A.size(), 0);
    for (std::size_t j = 0; j < A.size(); ++j)
        for (std::size_t l = 0; l < k.size(); ++l) out[j] += A[j][l] * k[l];
    return out;
}

}  // namespace sroot
