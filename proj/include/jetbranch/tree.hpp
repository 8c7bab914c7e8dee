// The component tree T_{C,0}: vertices are irreducible components of the jet
// fibers C_m^0, edges the truncation projections. Built from the classifier,
// exported to JSON/DOT, and inverted back to the semigroup from shape plus the
// single multiplicity datum.
#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "jetbranch/classifier.hpp"
#include "jetbranch/numeric.hpp"
#include "jetbranch/semigroup.hpp"

namespace jetbranch {

struct TreeVertex {
    Level m = 0;
    ComponentLabel label;
    long codim = 0;
};

struct ComponentTree {
    Level m_max = 0;
    std::vector<TreeVertex> vertices;           // id = index
    std::vector<std::pair<int, int>> edges;     // (child at m+1, parent at m)
};

// Depth at which a tree is guaranteed invertible: two type-I attach points
// plus, for every j, one fully visible finite branch of type j.
inline Level recommended_tree_depth(const SemigroupInvariants& inv) {
    Int need = 2 * inv.beta_bar[0] * inv.beta_bar[1] + inv.e[1];
    if (inv.genus() >= 2) {
        Int v2 = (inv.n[1] + 1) * inv.beta_bar[2];
        if (v2 > need) need = v2;
    }
    if (inv.beta_bar.back() > need) need = inv.beta_bar.back();
    return to_ll(need);
}

// Vertices per level follow classify_components; edges connect equal labels
// across consecutive levels, newborn branches attach to the boundary vertex
// one level down.
inline ComponentTree build_tree(const SemigroupInvariants& inv, Level m_max) {
    if (m_max < 1) throw Error(Error::Kind::validation, "build_tree: m_max must be >= 1");
    ComponentTree t;
    t.m_max = m_max;
    std::map<ComponentLabel, int> prev_ids;  // label -> vertex id at level m-1
    int prev_boundary = -1;
    for (Level m = 1; m <= m_max; ++m) {
        FiberSummary fs = classify_components(inv, m);
        std::map<ComponentLabel, int> ids;
        int boundary_id = -1;
        for (const auto& d : fs.components) {
            int id = static_cast<int>(t.vertices.size());
            t.vertices.push_back(TreeVertex{m, d.label, to_ll(d.codim)});
            ids[d.label] = id;
            if (d.label.kind == ComponentKind::boundary) boundary_id = id;
            if (m == 1) continue;
            int parent;
            if (d.label.kind == ComponentKind::boundary) {
                parent = prev_boundary;
            } else if (auto it = prev_ids.find(d.label); it != prev_ids.end()) {
                parent = it->second;
            } else {
                parent = prev_boundary;  // birth level: attach to B_{m-1}
            }
            t.edges.emplace_back(id, parent);
        }
        prev_ids = std::move(ids);
        prev_boundary = boundary_id;
    }
    return t;
}

// ---- serialization ----------------------------------------------------------

inline nlohmann::json tree_to_json(const ComponentTree& t) {
    nlohmann::json j;
    j["m_max"] = t.m_max;
    j["vertices"] = nlohmann::json::array();
    for (size_t id = 0; id < t.vertices.size(); ++id) {
        const TreeVertex& v = t.vertices[id];
        nlohmann::json vj;
        vj["id"] = static_cast<long>(id);
        vj["m"] = v.m;
        vj["kind"] = std::string(1, kind_letter(v.label.kind));
        if (v.label.kind != ComponentKind::boundary) vj["kappa"] = v.label.kappa;
        if (v.label.kind == ComponentKind::type_v) vj["j"] = v.label.j;
        if (v.label.kind == ComponentKind::boundary) vj["q"] = v.label.q;
        vj["codim"] = v.codim;
        j["vertices"].push_back(std::move(vj));
    }
    j["edges"] = nlohmann::json::array();
    auto edges = t.edges;
    std::sort(edges.begin(), edges.end());
    for (const auto& [c, p] : edges) j["edges"].push_back(nlohmann::json::array({c, p}));
    return j;
}

inline std::string tree_to_dot(const ComponentTree& t) {
    std::ostringstream os;
    os << "digraph component_tree {\n  rankdir=BT;\n";
    for (size_t id = 0; id < t.vertices.size(); ++id) {
        const TreeVertex& v = t.vertices[id];
        os << "  v" << id << " [label=\"" << v.label.str() << " m=" << v.m
           << " codim=" << v.codim << "\"];\n";
    }
    auto edges = t.edges;
    std::sort(edges.begin(), edges.end());
    for (const auto& [c, p] : edges) os << "  v" << c << " -> v" << p << ";\n";
    os << "}\n";
    return os.str();
}

inline std::string export_tree(const ComponentTree& t, const std::string& format) {
    if (format == "json") return tree_to_json(t).dump() + "\n";
    if (format == "dot") return tree_to_dot(t);
    throw Error(Error::Kind::validation, "export_tree: unknown format \"" + format + "\"");
}

inline ComponentTree tree_from_json(const nlohmann::json& j) {
    auto bad = [](const std::string& msg) { return Error(Error::Kind::malformed, "tree JSON: " + msg); };
    if (!j.is_object() || !j.contains("m_max") || !j.contains("vertices") || !j.contains("edges"))
        throw bad("expected an object with m_max, vertices, edges");
    ComponentTree t;
    t.m_max = j.at("m_max").get<long>();
    const auto& vs = j.at("vertices");
    if (!vs.is_array() || vs.empty()) throw bad("vertices must be a non-empty array");
    std::map<long, int> by_id;
    for (const auto& vj : vs) {
        TreeVertex v;
        long id = vj.at("id").get<long>();
        v.m = vj.at("m").get<long>();
        std::string kind = vj.at("kind").get<std::string>();
        if (kind == "B") {
            v.label.kind = ComponentKind::boundary;
            v.label.q = vj.value("q", 0LL);
        } else if (kind == "I") {
            v.label.kind = ComponentKind::type_i;
            v.label.kappa = vj.value("kappa", 0LL);
        } else if (kind == "V") {
            v.label.kind = ComponentKind::type_v;
            v.label.kappa = vj.value("kappa", 0LL);
            v.label.j = vj.value("j", 0);
        } else {
            throw bad("vertex kind must be one of B, I, V");
        }
        v.codim = vj.value("codim", 0LL);
        if (v.m < 1 || v.m > t.m_max) throw bad("vertex level out of range");
        if (by_id.count(id)) throw bad("duplicate vertex id");
        by_id[id] = static_cast<int>(t.vertices.size());
        t.vertices.push_back(std::move(v));
    }
    {
        std::set<std::pair<Level, ComponentLabel>> seen;
        for (const auto& v : t.vertices)
            if (!seen.emplace(v.m, v.label).second) throw bad("duplicate (level, label) vertex");
    }
    for (const auto& ej : j.at("edges")) {
        if (!ej.is_array() || ej.size() != 2) throw bad("edges must be [childId, parentId] pairs");
        long c = ej[0].get<long>(), p = ej[1].get<long>();
        if (!by_id.count(c) || !by_id.count(p)) throw bad("edge references unknown vertex id");
        int ci = by_id[c], pi = by_id[p];
        if (t.vertices[static_cast<size_t>(ci)].m != t.vertices[static_cast<size_t>(pi)].m + 1)
            throw bad("edge must connect a level-(m+1) child to a level-m parent");
        t.edges.emplace_back(ci, pi);
    }
    return t;
}

// ---- inversion ----------------------------------------------------------------

namespace detail {

struct ObservedBranch {
    Level attach = 0;  // trunk level the branch hangs from
    Level leaf = 0;    // deepest level reached
    bool truncated = false;  // reaches m_max: finite/infinite undecidable
};

struct TreeShape {
    std::vector<ObservedBranch> branches;        // sorted by attach level
    std::vector<int> trunk;                      // vertex ids, level 1..m_max
};

inline TreeShape analyze_shape(const ComponentTree& t) {
    const int n = static_cast<int>(t.vertices.size());
    std::vector<std::vector<int>> children(static_cast<size_t>(n));
    std::vector<int> parent(static_cast<size_t>(n), -1);
    for (auto [c, p] : t.edges) {
        if (parent[static_cast<size_t>(c)] != -1)
            throw Error(Error::Kind::malformed, "tree: vertex has two parents");
        parent[static_cast<size_t>(c)] = p;
        children[static_cast<size_t>(p)].push_back(c);
    }
    int root = -1;
    for (int v = 0; v < n; ++v) {
        if (t.vertices[static_cast<size_t>(v)].m == 1) {
            if (root != -1) throw Error(Error::Kind::malformed, "tree: level 1 must have one vertex");
            root = v;
        } else if (parent[static_cast<size_t>(v)] == -1) {
            throw Error(Error::Kind::malformed, "tree: vertex above level 1 lacks a parent");
        }
    }
    if (root == -1) throw Error(Error::Kind::malformed, "tree: no level-1 vertex");

    // depth = deepest level in subtree; branchy = subtree contains a vertex
    // with >= 2 children. Computed iteratively (post-order).
    std::vector<Level> depth(static_cast<size_t>(n));
    std::vector<char> branchy(static_cast<size_t>(n), 0);
    {
        std::vector<std::pair<int, size_t>> stack{{root, 0}};
        while (!stack.empty()) {
            auto& [v, next] = stack.back();
            auto& kids = children[static_cast<size_t>(v)];
            if (next < kids.size()) {
                stack.emplace_back(kids[next++], 0);
                continue;
            }
            depth[static_cast<size_t>(v)] = t.vertices[static_cast<size_t>(v)].m;
            branchy[static_cast<size_t>(v)] = kids.size() >= 2;
            for (int c : kids) {
                depth[static_cast<size_t>(v)] =
                    std::max(depth[static_cast<size_t>(v)], depth[static_cast<size_t>(c)]);
                branchy[static_cast<size_t>(v)] |= branchy[static_cast<size_t>(c)];
            }
            stack.pop_back();
        }
    }

    TreeShape shape;
    int cur = root;
    shape.trunk.push_back(cur);
    while (!children[static_cast<size_t>(cur)].empty()) {
        auto& kids = children[static_cast<size_t>(cur)];
        // The trunk child is the one whose subtree still branches; ties go to
        // the deepest subtree (for the final stretch either choice is valid).
        int next = kids[0];
        for (int c : kids) {
            if (branchy[static_cast<size_t>(c)] && !branchy[static_cast<size_t>(next)]) next = c;
            else if (branchy[static_cast<size_t>(c)] == branchy[static_cast<size_t>(next)] &&
                     depth[static_cast<size_t>(c)] > depth[static_cast<size_t>(next)])
                next = c;
        }
        for (int c : kids) {
            if (c == next) continue;
            // Each non-trunk child must start a simple path.
            ObservedBranch b;
            b.attach = t.vertices[static_cast<size_t>(cur)].m;
            int w = c;
            while (true) {
                auto& wk = children[static_cast<size_t>(w)];
                if (wk.size() >= 2)
                    throw Error(Error::Kind::malformed, "tree: branch vertex has several children");
                if (wk.empty()) break;
                w = wk[0];
            }
            b.leaf = t.vertices[static_cast<size_t>(w)].m;
            b.truncated = b.leaf >= t.m_max;
            shape.branches.push_back(b);
        }
        shape.trunk.push_back(next);
        cur = next;
    }
    if (t.vertices[static_cast<size_t>(cur)].m != t.m_max)
        throw Error(Error::Kind::malformed, "tree: no path from the root reaches m_max");
    std::sort(shape.branches.begin(), shape.branches.end(),
              [](const ObservedBranch& a, const ObservedBranch& b) { return a.attach < b.attach; });
    return shape;
}

// Trunk codimensions reveal beta_bar_1 when present: codim(B_m) jumps by one
// exactly at multiples of beta0 and beta1 while m stays below lcm(beta0,beta1).
inline std::optional<Int> harvest_beta1(const ComponentTree& t, const TreeShape& shape, const Int& b0) {
    long prev = -1;
    for (int id : shape.trunk) {
        const TreeVertex& v = t.vertices[static_cast<size_t>(id)];
        if (v.codim <= 0) return std::nullopt;  // codims absent
        if (prev >= 0 && v.codim == prev + 1 && !divides(b0, Int(v.m))) return Int(v.m);
        prev = v.codim;
    }
    return std::nullopt;
}

}  // namespace detail

// Recover (beta_bar_0, ..., beta_bar_g) from the tree shape and the datum
// b0_datum = max{m : codim(B_m) = 2} = beta_bar_0 - 1. When b0_datum < 0 the
// datum is harvested from codim annotations.
inline std::vector<Int> invert_tree(const ComponentTree& t, long b0_datum = -1) {
    detail::TreeShape shape = detail::analyze_shape(t);

    if (b0_datum < 0) {
        Level best = -1;
        for (const TreeVertex& v : t.vertices)
            if (v.codim == 2) best = std::max(best, v.m);
        if (best < 0)
            throw Error(Error::Kind::validation,
                        "invert_tree: no codim-2 vertex to harvest the multiplicity datum from; "
                        "pass b0_datum explicitly");
        b0_datum = best;
    }
    Int b0 = Int(b0_datum) + 1;
    if (b0 < 2) throw Error(Error::Kind::validation, "invert_tree: datum implies beta_bar_0 < 2");

    if (shape.branches.size() < 2) {
        std::string hint = "insufficient attach points: at least two branch attachments are needed";
        if (auto b1 = detail::harvest_beta1(t, shape, b0)) {
            Int e1 = gcd(b0, *b1);
            Int need = 2 * exact_div(b0, e1) * (*b1) + e1;
            hint += "; for this trunk the minimal m_max is " + need.get_str();
        }
        throw Error(Error::Kind::depth, "invert_tree: " + hint);
    }

    // Uniform attach spacing = n_1 * beta_bar_1 (all branch kinds).
    Int delta = Int(shape.branches[1].attach - shape.branches[0].attach);
    for (size_t i = 1; i < shape.branches.size(); ++i)
        if (Int(shape.branches[i].attach - shape.branches[i - 1].attach) != delta)
            throw Error(Error::Kind::malformed,
                        "invert_tree: branch attach levels are not evenly spaced");
    if (delta <= 0) throw Error(Error::Kind::malformed, "invert_tree: repeated attach level");

    Int first = Int(shape.branches[0].attach) + 1;
    Int e1 = first % delta;
    if (e1 == 0)
        throw Error(Error::Kind::malformed, "invert_tree: first attach level inconsistent with spacing");
    if (!divides(b0, delta * e1))
        throw Error(Error::Kind::malformed,
                    "invert_tree: attach spacing is not a multiple of beta_bar_1");
    Int beta1 = exact_div(delta * e1, b0);
    if (gcd(b0, beta1) != e1 || beta1 <= b0)
        throw Error(Error::Kind::malformed, "invert_tree: recovered beta_bar_1 fails the gcd law");

    std::vector<Int> beta_bar{b0, beta1};
    std::vector<Int> e{b0, e1};
    std::vector<Int> n{exact_div(b0, e1)};

    struct Pending {
        Int k;      // contact index: attach+1-e1 = k*delta
        Int leaf;
    };
    std::vector<Pending> finite;
    for (const auto& br : shape.branches) {
        Int num = Int(br.attach) + 1 - e1;
        if (!divides(delta, num) || num <= 0)
            throw Error(Error::Kind::malformed, "invert_tree: attach level off the trunk lattice");
        if (!br.truncated) finite.push_back({exact_div(num, delta), Int(br.leaf)});
    }

    // Peel off one exponent per round: among unexplained finite branches the
    // minimum of (leaf+1)/kappa is beta_bar_j, attained by the type-j ones.
    while (!finite.empty()) {
        if (e.back() == 1)
            throw Error(Error::Kind::malformed,
                        "invert_tree: finite branches remain after the gcd chain reached 1");
        int j = static_cast<int>(beta_bar.size());  // next exponent index
        Int pj = 1;                                  // n_2 ... n_{j-1}
        for (int l = 2; l <= j - 1; ++l) pj *= n[static_cast<size_t>(l - 1)];
        Rat best;
        bool have = false;
        for (const auto& br : finite) {
            if (!divides(pj, br.k))
                throw Error(Error::Kind::malformed,
                            "invert_tree: finite branch contact index " + br.k.get_str() +
                                " is not divisible by n_2...n_" + std::to_string(j - 1));
            Rat r = ratio(br.leaf + 1, exact_div(br.k, pj));
            if (!have || r < best) {
                best = r;
                have = true;
            }
        }
        if (!is_integer(best))
            throw Error(Error::Kind::malformed, "invert_tree: candidate exponent is not an integer");
        Int bj = best.get_num();
        if (bj <= n.back() * beta_bar.back())
            throw Error(Error::Kind::malformed,
                        "invert_tree: recovered exponent violates n_i*beta_bar_i < beta_bar_{i+1}");
        Int ej = gcd(e.back(), bj);
        if (ej >= e.back())
            throw Error(Error::Kind::malformed,
                        "invert_tree: recovered exponent does not shrink the gcd chain");
        Int nj = exact_div(e.back(), ej);
        beta_bar.push_back(bj);
        e.push_back(ej);
        n.push_back(nj);

        std::vector<Pending> rest;
        size_t removed = 0;
        for (const auto& br : finite) {
            Int kappa = exact_div(br.k, pj);
            if (kappa % nj != 0 && kappa * bj == br.leaf + 1) {
                ++removed;
            } else {
                rest.push_back(br);
            }
        }
        if (removed == 0)
            throw Error(Error::Kind::internal, "invert_tree: exponent round removed no branch");
        finite = std::move(rest);
    }

    if (e.back() != 1) {
        Int need = n.back() * beta_bar.back() + 1;
        throw Error(Error::Kind::depth,
                    "invert_tree: gcd chain stuck at " + e.back().get_str() +
                        " with no finite branch left; increase m_max (at least beyond " +
                        need.get_str() + ")");
    }

    // Full consistency: rebuilding the tree from the recovered semigroup must
    // reproduce the observed shape exactly.
    SemigroupInvariants inv = derive_invariants(puiseux_from_semigroup(beta_bar));
    ComponentTree expected = build_tree(inv, t.m_max);
    detail::TreeShape eshape = detail::analyze_shape(expected);
    auto key = [](const detail::ObservedBranch& b) { return std::pair<Level, Level>(b.attach, b.leaf); };
    bool same = eshape.branches.size() == shape.branches.size();
    for (size_t i = 0; same && i < shape.branches.size(); ++i)
        same = key(eshape.branches[i]) == key(shape.branches[i]);
    if (!same || expected.vertices.size() != t.vertices.size())
        throw Error(Error::Kind::malformed,
                    "invert_tree: observed tree is not the component tree of the recovered semigroup " +
                        join(beta_bar));
    return beta_bar;
}

}  // namespace jetbranch
