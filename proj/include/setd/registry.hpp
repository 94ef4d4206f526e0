#pragma once

// Typed entity catalogs. The registry fixes one-hot column positions:
// within each kind, indices are contiguous from 0 in lexicographic id order,
// so feature layouts are reproducible across runs and machines.

#include <array>
#include <algorithm>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "setd/common.hpp"

namespace setd {

enum class Kind : int {
    attacker = 0,
    victim,
    attack_method,
    human_vulnerability,
    attack_medium,
    effect_mechanism,
};

inline constexpr int kKindCount = 6;

inline constexpr std::array<std::string_view, kKindCount> kKindNames = {
    "attacker",        "victim",        "attack_method",
    "human_vulnerability", "attack_medium", "effect_mechanism",
};

inline std::string_view kind_name(Kind k) { return kKindNames[static_cast<int>(k)]; }

inline std::optional<Kind> kind_from_name(std::string_view name) {
    for (int i = 0; i < kKindCount; ++i)
        if (kKindNames[static_cast<std::size_t>(i)] == name) return static_cast<Kind>(i);
    return std::nullopt;
}

struct EntityRef {
    Kind kind;
    int index;
};

class EntityRegistry {
public:
    EntityRegistry() = default;

    // Builds from (id, kind) declarations. Repeated identical declarations are
    // tolerated; the same id under two kinds is rejected.
    static EntityRegistry build(const std::vector<std::pair<std::string, Kind>>& declarations) {
        EntityRegistry reg;
        std::unordered_map<std::string, Kind> seen;
        for (const auto& [id, kind] : declarations) {
            if (id.empty()) throw DataError("empty entity identifier");
            auto [it, inserted] = seen.emplace(id, kind);
            if (!inserted) {
                if (it->second != kind)
                    throw DataError("entity '" + id + "' declared as both '" +
                                    std::string(kind_name(it->second)) + "' and '" +
                                    std::string(kind_name(kind)) + "'");
                continue;
            }
            reg.ids_[static_cast<std::size_t>(kind)].push_back(id);
        }
        for (auto& list : reg.ids_) std::sort(list.begin(), list.end());
        for (int k = 0; k < kKindCount; ++k) {
            const auto& list = reg.ids_[static_cast<std::size_t>(k)];
            for (int i = 0; i < static_cast<int>(list.size()); ++i)
                reg.index_.emplace(list[static_cast<std::size_t>(i)],
                                   EntityRef{static_cast<Kind>(k), i});
        }
        return reg;
    }

    int count(Kind k) const { return static_cast<int>(ids_[static_cast<std::size_t>(k)].size()); }

    const std::vector<std::string>& ids(Kind k) const { return ids_[static_cast<std::size_t>(k)]; }

    const std::string& id_of(Kind k, int index) const {
        return ids_[static_cast<std::size_t>(k)].at(static_cast<std::size_t>(index));
    }

    std::optional<EntityRef> lookup(std::string_view id) const {
        auto it = index_.find(std::string(id));
        if (it == index_.end()) return std::nullopt;
        return it->second;
    }

    // Looks up an id that must exist with the given kind.
    int index_of(std::string_view id, Kind expected) const {
        auto ref = lookup(id);
        if (!ref) throw DataError("unknown entity '" + std::string(id) + "'");
        if (ref->kind != expected)
            throw DataError("entity '" + std::string(id) + "' is a '" +
                            std::string(kind_name(ref->kind)) + "', expected '" +
                            std::string(kind_name(expected)) + "'");
        return ref->index;
    }

    std::size_t total_entities() const {
        std::size_t n = 0;
        for (const auto& l : ids_) n += l.size();
        return n;
    }

    // Hash over the per-kind id orderings; identifies the one-hot column
    // assignment a layout was built against.
    std::uint64_t ordering_hash() const {
        std::uint64_t h = 0xcbf29ce484222325ull;
        for (int k = 0; k < kKindCount; ++k) {
            h = fnv1a64(kKindNames[static_cast<std::size_t>(k)], h);
            for (const auto& id : ids_[static_cast<std::size_t>(k)]) {
                h = fnv1a64(id, h);
                h = fnv1a64("\n", h);
            }
        }
        return h;
    }

private:
    std::array<std::vector<std::string>, kKindCount> ids_;
    std::unordered_map<std::string, EntityRef> index_;
};

} // namespace setd
