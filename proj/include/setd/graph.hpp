#pragma once

// Typed edge sets over registry entities, plus the labeled sample unit.
// Graphs are immutable once built; adjacency lists are kept sorted so that
// encoders and the threat rule can intersect them directly.

#include <array>
#include <algorithm>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "setd/common.hpp"
#include "setd/registry.hpp"

namespace setd {

enum class Relation : int {
    performs = 0,        // attacker -> attack_method
    has_vulnerability,   // victim -> human_vulnerability
    exploits,            // attack_method -> human_vulnerability
    uses_medium,         // attack_method -> attack_medium
    exposed_via,         // victim -> attack_medium
    effected_by,         // human_vulnerability -> effect_mechanism
};

inline constexpr int kRelationCount = 6;

inline constexpr std::array<std::string_view, kRelationCount> kRelationNames = {
    "performs", "has_vulnerability", "exploits", "uses_medium", "exposed_via", "effected_by",
};

inline std::string_view relation_name(Relation r) { return kRelationNames[static_cast<int>(r)]; }

inline std::optional<Relation> relation_from_name(std::string_view name) {
    for (int i = 0; i < kRelationCount; ++i)
        if (kRelationNames[static_cast<std::size_t>(i)] == name) return static_cast<Relation>(i);
    return std::nullopt;
}

inline Kind subject_kind(Relation r) {
    switch (r) {
        case Relation::performs: return Kind::attacker;
        case Relation::has_vulnerability: return Kind::victim;
        case Relation::exploits: return Kind::attack_method;
        case Relation::uses_medium: return Kind::attack_method;
        case Relation::exposed_via: return Kind::victim;
        case Relation::effected_by: return Kind::human_vulnerability;
    }
    throw InternalError("bad relation");
}

inline Kind object_kind(Relation r) {
    switch (r) {
        case Relation::performs: return Kind::attack_method;
        case Relation::has_vulnerability: return Kind::human_vulnerability;
        case Relation::exploits: return Kind::human_vulnerability;
        case Relation::uses_medium: return Kind::attack_medium;
        case Relation::exposed_via: return Kind::attack_medium;
        case Relation::effected_by: return Kind::effect_mechanism;
    }
    throw InternalError("bad relation");
}

class RelationGraph {
public:
    RelationGraph() = default;

    // Adjacency is sized to the registry so empty subjects still resolve.
    explicit RelationGraph(const EntityRegistry& registry) {
        for (int r = 0; r < kRelationCount; ++r) {
            auto rel = static_cast<Relation>(r);
            adjacency_[static_cast<std::size_t>(r)].resize(
                static_cast<std::size_t>(registry.count(subject_kind(rel))));
        }
    }

    // Duplicate edges are rejected rather than deduplicated; silently merged
    // duplicates would hide data-preparation bugs upstream.
    void add_edge(Relation rel, int subject, int object) {
        auto& adj = adjacency_[static_cast<std::size_t>(rel)];
        if (subject < 0 || static_cast<std::size_t>(subject) >= adj.size())
            throw InternalError("edge subject index out of range");
        auto& objs = adj[static_cast<std::size_t>(subject)];
        auto it = std::lower_bound(objs.begin(), objs.end(), object);
        if (it != objs.end() && *it == object)
            throw DataError("duplicate edge in relation '" + std::string(relation_name(rel)) + "'");
        objs.insert(it, object);
        ++edge_counts_[static_cast<std::size_t>(rel)];
    }

    bool has_edge(Relation rel, int subject, int object) const {
        const auto& objs = objects_of(rel, subject);
        return std::binary_search(objs.begin(), objs.end(), object);
    }

    // Sorted object indices for one subject.
    const std::vector<int>& objects_of(Relation rel, int subject) const {
        const auto& adj = adjacency_[static_cast<std::size_t>(rel)];
        if (subject < 0 || static_cast<std::size_t>(subject) >= adj.size())
            throw InternalError("edge subject index out of range");
        return adj[static_cast<std::size_t>(subject)];
    }

    std::size_t edge_count(Relation rel) const {
        return edge_counts_[static_cast<std::size_t>(rel)];
    }

    std::vector<std::pair<int, int>> edges(Relation rel) const {
        std::vector<std::pair<int, int>> out;
        const auto& adj = adjacency_[static_cast<std::size_t>(rel)];
        for (int s = 0; s < static_cast<int>(adj.size()); ++s)
            for (int o : adj[static_cast<std::size_t>(s)]) out.emplace_back(s, o);
        return out;
    }

    bool operator==(const RelationGraph& other) const { return adjacency_ == other.adjacency_; }

private:
    std::array<std::vector<std::vector<int>>, kRelationCount> adjacency_;
    std::array<std::size_t, kRelationCount> edge_counts_{};
};

// One (attacker, victim) sample; indices resolve in the registry.
struct LabeledPair {
    int attacker = 0;
    int victim = 0;
    int label = 0; // 1 = posed a threat, 0 = did not

    bool operator==(const LabeledPair&) const = default;
};

} // namespace setd
