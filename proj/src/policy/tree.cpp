#include "lcws/policy.hpp"

#include <algorithm>
#include <cstdio>
#include <functional>

#include "lcws/error.hpp"

namespace lcws {

namespace {

bool valid_attribute(std::string_view a) {
    if (a.empty()) return false;
    return std::all_of(a.begin(), a.end(), [](char c) {
        return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '_' || c == ':' ||
               c == '-';
    });
}

[[noreturn]] void bad_tree(const std::string& why) { throw Error(ErrorKind::argument, "invalid access tree: " + why); }

} // namespace

AccessTree::AccessTree(std::vector<AccessNode> nodes) : nodes_(std::move(nodes)) {
    if (nodes_.empty()) bad_tree("no nodes");
    for (std::size_t k = 0; k < nodes_.size(); ++k)
        if (nodes_[k].id != k + 1) bad_tree("node ids must be 1..N in order");
    const auto& r = nodes_.front();
    if (r.parent != 0 || r.index != 0 || r.level != 1) bad_tree("malformed root");
    if (r.leaf) bad_tree("root must be a gate");

    std::vector<int> seen(nodes_.size() + 1, 0);
    seen[r.id] = 1;
    for (const auto& n : nodes_) {
        if (n.leaf) {
            if (!n.children.empty() || n.threshold != 0) bad_tree("leaf with gate fields");
            if (!valid_attribute(n.attribute)) bad_tree("bad attribute '" + n.attribute + "'");
            continue;
        }
        if (n.children.empty()) bad_tree("gate without children");
        if (n.threshold < 1 || n.threshold > n.children.size()) bad_tree("threshold out of range");
        for (std::size_t k = 0; k < n.children.size(); ++k) {
            const auto cid = n.children[k];
            if (cid < 2 || cid > nodes_.size()) bad_tree("child id out of range");
            const auto& c = nodes_[cid - 1];
            if (c.parent != n.id || c.index != k + 1) bad_tree("parent/index mismatch");
            const bool inline_leaf = n.id == 1 && c.leaf && n.children.size() == 1 && n.threshold == 1;
            if (c.level != (inline_leaf ? n.level : n.level + 1)) bad_tree("level mismatch");
            if (seen[cid]++) bad_tree("node reachable twice");
        }
    }
    if (std::count(seen.begin() + 1, seen.end(), 1) != static_cast<long>(nodes_.size()))
        bad_tree("unreachable node");
    for (const auto& n : nodes_) depth_ = std::max(depth_, n.level);
}

const AccessNode& AccessTree::node(NodeId id) const {
    if (id < 1 || id > nodes_.size()) throw Error(ErrorKind::argument, "unknown node id " + std::to_string(id));
    return nodes_[id - 1];
}

std::size_t AccessTree::leaf_count() const {
    return static_cast<std::size_t>(std::count_if(nodes_.begin(), nodes_.end(), [](const auto& n) { return n.leaf; }));
}

bool satisfies(const AccessTree& tree, const AttributeSet& attrs) {
    std::function<bool(NodeId)> eval = [&](NodeId id) {
        const auto& n = tree.node(id);
        if (n.leaf) return attrs.count(n.attribute) > 0;
        std::uint32_t ok = 0;
        for (auto c : n.children) {
            if (eval(c) && ++ok >= n.threshold) return true;
        }
        return false;
    };
    return eval(tree.root().id);
}

LevelPartition partition_levels(const AccessTree& tree) {
    LevelPartition out;
    out.levels.resize(tree.depth());
    for (std::uint32_t i = 0; i < tree.depth(); ++i) {
        out.levels[i].level = i + 1;
        out.levels[i].descriptor.level = i + 1;
    }
    for (const auto& n : tree.nodes()) {
        auto& slice = out.levels[n.level - 1];
        (n.leaf ? slice.leaves : slice.gates).push_back(n.id);
        DescriptorNode d;
        d.id = n.id;
        d.parent = n.parent;
        d.index = n.index;
        d.leaf = n.leaf;
        d.threshold = n.threshold;
        d.child_count = static_cast<std::uint32_t>(n.children.size());
        d.attribute = n.attribute;
        slice.descriptor.nodes.push_back(std::move(d));
    }
    return out;
}

Scalar lagrange_coeff(std::uint32_t i, std::span<const std::uint32_t> indices, const Scalar& x) {
    if (std::find(indices.begin(), indices.end(), i) == indices.end())
        throw Error(ErrorKind::argument, "lagrange index not in set");
    const auto xi = Scalar::from_u64(i);
    if (xi.is_zero()) throw Error(ErrorKind::argument, "lagrange index is zero mod r");
    Scalar num = Scalar::from_u64(1), den = Scalar::from_u64(1);
    for (auto j : indices) {
        if (j == i) continue;
        const auto xj = Scalar::from_u64(j);
        if (xj == xi) throw Error(ErrorKind::argument, "lagrange indices not distinct");
        num = num * (x - xj);
        den = den * (xi - xj);
    }
    return num / den;
}

std::string synthetic_policy(std::uint32_t levels, std::uint32_t leaves) {
    if (levels == 0) throw Error(ErrorKind::argument, "synthetic policy needs at least one level");
    if (levels == 1) {
        if (leaves != 1) throw Error(ErrorKind::argument, "a one-level policy has exactly one leaf");
        return "attr000";
    }
    const std::uint32_t leaf_levels = levels - 1;
    if (leaves < leaf_levels) throw Error(ErrorKind::argument, "need at least one leaf per level below the root");
    // Up to two gate chains hang off the root; leaves of level l attach
    // round-robin to the gates of level l - 1.
    const std::uint32_t chains = (levels >= 3 && leaves / leaf_levels >= 2) ? 2 : 1;

    struct Gate {
        std::vector<std::string> leaves;
        int child_gate = -1;
    };
    // gates[l] holds the gates of level l + 1
    std::vector<std::vector<Gate>> gates(levels - 1);
    gates[0].resize(1);
    for (std::uint32_t l = 1; l + 1 < levels; ++l) gates[l].resize(chains);
    for (std::uint32_t l = 1; l + 2 < levels; ++l)
        for (std::uint32_t c = 0; c < chains; ++c) gates[l][c].child_gate = static_cast<int>(c);

    std::uint32_t next_attr = 0;
    for (std::uint32_t l = 0; l < leaf_levels; ++l) {
        const std::uint32_t count = leaves / leaf_levels + (l < leaves % leaf_levels ? 1 : 0);
        auto& parents = gates[l];
        for (std::uint32_t k = 0; k < count; ++k) {
            char name[16];
            std::snprintf(name, sizeof(name), "attr%03u", next_attr++);
            parents[k % parents.size()].leaves.emplace_back(name);
        }
    }

    std::function<std::string(std::uint32_t, std::uint32_t)> render = [&](std::uint32_t l, std::uint32_t c) {
        const auto& g = gates[l][c];
        std::vector<std::string> parts = g.leaves;
        if (l == 0 && levels >= 3) {
            for (std::uint32_t k = 0; k < chains; ++k) parts.push_back(render(1, k));
        } else if (g.child_gate >= 0) {
            parts.push_back(render(l + 1, static_cast<std::uint32_t>(g.child_gate)));
        }
        const auto n = static_cast<std::uint32_t>(parts.size());
        std::string s = "(" + std::to_string(n / 2 + 1) + " of (";
        for (std::uint32_t k = 0; k < n; ++k) s += (k ? ", " : "") + parts[k];
        return s + "))";
    };
    return render(0, 0);
}

} // namespace lcws
