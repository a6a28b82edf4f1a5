#include "support.hpp"

#include <algorithm>
#include <cstdio>
#include <functional>

namespace lcws::test {

Fixture::Fixture(std::uint64_t seed) {
    SeededRng rng(seed);
    auto [p, m] = setup(rng, &trace);
    pk = std::move(p);
    mk = std::move(m);
    ctx = encryption_context(mk);
    egg = pair(G0Element::generator(), G0Element::generator());
}

Bytes random_bytes(std::mt19937_64& gen, std::size_t n) {
    Bytes out(n);
    for (auto& b : out) b = static_cast<std::uint8_t>(gen());
    return out;
}

std::string random_policy(std::mt19937_64& gen, const PolicyShape& shape) {
    auto uniform = [&](std::uint32_t lo, std::uint32_t hi) {
        return std::uniform_int_distribution<std::uint32_t>(lo, hi)(gen);
    };
    std::uint32_t leaves_left = shape.max_leaves;
    const std::uint32_t depth = uniform(1, shape.max_depth);

    std::function<std::string(std::uint32_t)> node = [&](std::uint32_t level) -> std::string {
        const bool must_leaf = level >= depth || leaves_left <= 1;
        if (must_leaf || (level > 1 && uniform(0, 2) == 0)) {
            --leaves_left;
            char name[16];
            std::snprintf(name, sizeof(name), "att%u", uniform(0, shape.attribute_pool - 1));
            return name;
        }
        const std::uint32_t max_c = std::min(shape.max_children, leaves_left);
        const std::uint32_t c = uniform(std::min<std::uint32_t>(2, max_c), max_c);
        // Reserve one leaf per child so the budget cannot run dry mid-gate.
        leaves_left -= c;
        std::vector<std::string> parts;
        for (std::uint32_t k = 0; k < c; ++k) {
            ++leaves_left;
            parts.push_back(node(level + 1));
        }
        const std::uint32_t t = uniform(1, c);
        std::string out = "(" + std::to_string(t) + " of (";
        for (std::uint32_t k = 0; k < c; ++k) out += (k ? ", " : "") + parts[k];
        return out + "))";
    };
    return node(1);
}

std::vector<std::string> tree_attributes(const AccessTree& tree) {
    AttributeSet s;
    for (const auto& n : tree.nodes())
        if (n.leaf) s.insert(n.attribute);
    return {s.begin(), s.end()};
}

AttributeSet random_satisfying_set(std::mt19937_64& gen, const AccessTree& tree) {
    auto attrs = tree_attributes(tree);
    std::shuffle(attrs.begin(), attrs.end(), gen);
    AttributeSet set(attrs.begin(), attrs.end());
    for (const auto& a : attrs) {
        if (set.size() == 1) break;
        if (gen() % 3 == 0) continue; // keep some slack
        set.erase(a);
        if (!satisfies(tree, set)) set.insert(a);
    }
    return set;
}

AttributeSet random_failing_set(std::mt19937_64& gen, const AccessTree& tree) {
    auto attrs = tree_attributes(tree);
    std::shuffle(attrs.begin(), attrs.end(), gen);
    AttributeSet set(attrs.begin(), attrs.end());
    for (const auto& a : attrs) {
        if (!satisfies(tree, set)) break;
        set.erase(a);
    }
    set.insert("outsider" + std::to_string(gen() % 1000));
    return set;
}

TempDir::TempDir() {
    std::random_device rd;
    for (;;) {
        auto p = std::filesystem::temp_directory_path() / ("lcws-test-" + std::to_string(rd()));
        if (std::filesystem::create_directory(p)) {
            path_ = p;
            return;
        }
    }
}

TempDir::~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
}

} // namespace lcws::test
