#pragma once

// Parsing and serialization of the triple / label TSV formats.
//
// Triple file: `subject<TAB>predicate<TAB>object`, UTF-8, LF endings,
// `#`-prefixed comment lines ignored. `is_a` declares an entity's kind; the
// other predicates are typed edges. Declarations and edges may interleave in
// any order: validation runs after the whole stream has been read.
//
// Label file: `attacker_id<TAB>victim_id<TAB>label`, label in {0,1}.

#include <cstddef>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "setd/common.hpp"
#include "setd/graph.hpp"
#include "setd/registry.hpp"

namespace setd {

struct World {
    EntityRegistry registry;
    RelationGraph graph;
};

namespace detail {

inline bool skippable_line(std::string_view line) {
    return line.empty() || line.front() == '#';
}

inline std::string_view strip_cr(std::string_view line) {
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    return line;
}

} // namespace detail

inline World parse_triples(std::string_view text) {
    std::vector<std::pair<std::string, Kind>> declarations;
    struct RawEdge {
        std::string subject;
        Relation relation;
        std::string object;
        std::size_t line_no;
    };
    std::vector<RawEdge> raw_edges;

    std::size_t line_no = 0;
    std::size_t start = 0;
    while (start <= text.size()) {
        std::size_t end = text.find('\n', start);
        if (end == std::string_view::npos) end = text.size();
        std::string_view line = detail::strip_cr(text.substr(start, end - start));
        ++line_no;
        start = end + 1;
        if (end == text.size() && line.empty()) break;
        if (detail::skippable_line(line)) continue;

        auto fields = split_fields(line, '\t');
        if (fields.size() != 3)
            throw DataError("triple line " + std::to_string(line_no) + ": expected 3 columns, got " +
                            std::to_string(fields.size()));
        std::string subject(fields[0]);
        std::string predicate(fields[1]);
        std::string object(fields[2]);
        if (subject.empty() || object.empty())
            throw DataError("triple line " + std::to_string(line_no) + ": empty subject or object");

        if (predicate == "is_a") {
            auto kind = kind_from_name(object);
            if (!kind)
                throw DataError("triple line " + std::to_string(line_no) + ": unknown kind '" +
                                object + "'");
            declarations.emplace_back(subject, *kind);
        } else {
            auto rel = relation_from_name(predicate);
            if (!rel)
                throw DataError("triple line " + std::to_string(line_no) + ": unknown predicate '" +
                                predicate + "'");
            raw_edges.push_back({std::move(subject), *rel, std::move(object), line_no});
        }
    }

    World world;
    world.registry = EntityRegistry::build(declarations);
    world.graph = RelationGraph(world.registry);
    for (const auto& e : raw_edges) {
        int s, o;
        try {
            s = world.registry.index_of(e.subject, subject_kind(e.relation));
            o = world.registry.index_of(e.object, object_kind(e.relation));
        } catch (const DataError& err) {
            throw DataError("triple line " + std::to_string(e.line_no) + ": " + err.what());
        }
        try {
            world.graph.add_edge(e.relation, s, o);
        } catch (const DataError& err) {
            throw DataError("triple line " + std::to_string(e.line_no) + ": " + err.what());
        }
    }
    return world;
}

inline std::vector<LabeledPair> parse_labels(std::string_view text, const EntityRegistry& registry) {
    std::vector<LabeledPair> pairs;
    std::set<std::pair<int, int>> seen;

    std::size_t line_no = 0;
    std::size_t start = 0;
    while (start <= text.size()) {
        std::size_t end = text.find('\n', start);
        if (end == std::string_view::npos) end = text.size();
        std::string_view line = detail::strip_cr(text.substr(start, end - start));
        ++line_no;
        start = end + 1;
        if (end == text.size() && line.empty()) break;
        if (detail::skippable_line(line)) continue;

        auto fields = split_fields(line, '\t');
        if (fields.size() != 3)
            throw DataError("label line " + std::to_string(line_no) + ": expected 3 columns, got " +
                            std::to_string(fields.size()));
        LabeledPair p;
        try {
            p.attacker = registry.index_of(fields[0], Kind::attacker);
            p.victim = registry.index_of(fields[1], Kind::victim);
        } catch (const DataError& err) {
            throw DataError("label line " + std::to_string(line_no) + ": " + err.what());
        }
        if (fields[2] == "0") p.label = 0;
        else if (fields[2] == "1") p.label = 1;
        else
            throw DataError("label line " + std::to_string(line_no) + ": label must be 0 or 1, got '" +
                            std::string(fields[2]) + "'");
        if (!seen.emplace(p.attacker, p.victim).second)
            throw DataError("label line " + std::to_string(line_no) + ": duplicate pair (" +
                            std::string(fields[0]) + ", " + std::string(fields[1]) + ")");
        pairs.push_back(p);
    }
    return pairs;
}

// Canonical triple serialization: is_a declarations per kind in index order,
// then edges per relation in (subject, object) index order.
inline std::string serialize_triples(const World& world) {
    std::ostringstream out;
    for (int k = 0; k < kKindCount; ++k) {
        auto kind = static_cast<Kind>(k);
        for (const auto& id : world.registry.ids(kind))
            out << id << '\t' << "is_a" << '\t' << kind_name(kind) << '\n';
    }
    for (int r = 0; r < kRelationCount; ++r) {
        auto rel = static_cast<Relation>(r);
        for (auto [s, o] : world.graph.edges(rel))
            out << world.registry.id_of(subject_kind(rel), s) << '\t' << relation_name(rel) << '\t'
                << world.registry.id_of(object_kind(rel), o) << '\n';
    }
    return out.str();
}

inline std::string serialize_labels(const std::vector<LabeledPair>& pairs,
                                    const EntityRegistry& registry) {
    std::ostringstream out;
    for (const auto& p : pairs)
        out << registry.id_of(Kind::attacker, p.attacker) << '\t'
            << registry.id_of(Kind::victim, p.victim) << '\t' << p.label << '\n';
    return out.str();
}

struct WorldSummary {
    std::array<std::size_t, kKindCount> entity_counts{};
    std::array<std::size_t, kRelationCount> edge_counts{};
    std::size_t labels_total = 0;
    std::size_t labels_positive = 0;
    std::size_t labels_negative = 0;
    std::string positive_share; // pos/total rendered to 3 decimals
};

inline WorldSummary summarize_world(const EntityRegistry& registry, const RelationGraph& graph,
                                    const std::vector<LabeledPair>& labels) {
    WorldSummary s;
    for (int k = 0; k < kKindCount; ++k)
        s.entity_counts[static_cast<std::size_t>(k)] =
            static_cast<std::size_t>(registry.count(static_cast<Kind>(k)));
    for (int r = 0; r < kRelationCount; ++r)
        s.edge_counts[static_cast<std::size_t>(r)] = graph.edge_count(static_cast<Relation>(r));
    s.labels_total = labels.size();
    for (const auto& p : labels)
        if (p.label == 1) ++s.labels_positive;
    s.labels_negative = s.labels_total - s.labels_positive;
    s.positive_share = format_share(s.labels_positive, s.labels_total);
    return s;
}

inline nlohmann::json summary_to_json(const WorldSummary& s) {
    nlohmann::json entities, edges;
    for (int k = 0; k < kKindCount; ++k)
        entities[std::string(kKindNames[static_cast<std::size_t>(k)])] =
            s.entity_counts[static_cast<std::size_t>(k)];
    for (int r = 0; r < kRelationCount; ++r)
        edges[std::string(kRelationNames[static_cast<std::size_t>(r)])] =
            s.edge_counts[static_cast<std::size_t>(r)];
    return nlohmann::json{
        {"entities", entities},
        {"edges", edges},
        {"labels", {{"total", s.labels_total},
                    {"positive", s.labels_positive},
                    {"negative", s.labels_negative},
                    {"positive_share", s.positive_share}}},
    };
}

} // namespace setd
