#pragma once

// One-hot feature extraction and fusion.
//
// Five feature vectors over a (attacker, victim) pair:
//   fv1  attacker's performed attack methods          (width = #methods)
//   fv2  victim's human vulnerabilities               (width = #vulnerabilities)
//   fv3  vulnerabilities exploitable by the attacker, union over the
//        attacker's methods                           (width = #vulnerabilities)
//   fv4  attack mediums the victim is exposed via     (width = #mediums)
//   fv5  effect mechanisms behind the victim's
//        vulnerabilities, union over those            (width = #mechanisms)
//
// Combinations: 1 = [fv1 fv2], 2 = [fv1 fv3 fv2], 3 = [fv1 fv3 fv2 fv4],
// 4 = [fv1 fv3 fv2 fv4 fv5].

#include <cstdint>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "setd/common.hpp"
#include "setd/graph.hpp"
#include "setd/ingest.hpp"
#include "setd/registry.hpp"

namespace setd {

struct FeatureSegment {
    std::string name;     // "fv1".."fv5"
    std::string relation; // relation path producing the bits
    Kind target_kind;     // kind whose registry order defines the columns
    int width = 0;
};

struct FeatureLayout {
    int combination = 0;
    std::vector<FeatureSegment> segments;
    int width = 0;
    std::uint64_t registry_hash = 0;
    std::vector<std::string> column_names; // "<segment>.<entity_id>"
};

inline FeatureLayout layout_for(int combination, const EntityRegistry& registry) {
    if (combination < 1 || combination > 4)
        throw DataError("unknown feature combination " + std::to_string(combination));

    FeatureLayout layout;
    layout.combination = combination;
    auto add = [&](const char* name, const char* relation, Kind kind) {
        layout.segments.push_back(
            {name, relation, kind, registry.count(kind)});
    };
    add("fv1", "performs", Kind::attack_method);
    if (combination >= 2) add("fv3", "performs.exploits", Kind::human_vulnerability);
    add("fv2", "has_vulnerability", Kind::human_vulnerability);
    if (combination >= 3) add("fv4", "exposed_via", Kind::attack_medium);
    if (combination >= 4) add("fv5", "has_vulnerability.effected_by", Kind::effect_mechanism);

    for (const auto& seg : layout.segments) {
        layout.width += seg.width;
        for (const auto& id : registry.ids(seg.target_kind))
            layout.column_names.push_back(seg.name + "." + id);
    }
    layout.registry_hash = registry.ordering_hash();
    return layout;
}

// Status bit j = 1 iff (subject, entity_j) is an edge of the relation.
inline std::vector<std::uint8_t> encode_onehot(int subject, Relation relation, Kind target,
                                               const RelationGraph& graph,
                                               const EntityRegistry& registry) {
    if (object_kind(relation) != target)
        throw DataError("relation '" + std::string(relation_name(relation)) +
                        "' does not target kind '" + std::string(kind_name(target)) + "'");
    if (subject < 0 || subject >= registry.count(subject_kind(relation)))
        throw DataError("unresolved subject index for relation '" +
                        std::string(relation_name(relation)) + "'");
    std::vector<std::uint8_t> bits(static_cast<std::size_t>(registry.count(target)), 0);
    for (int o : graph.objects_of(relation, subject)) bits[static_cast<std::size_t>(o)] = 1;
    return bits;
}

// fv3: union of exploit targets over the attacker's performed methods.
inline std::vector<std::uint8_t> encode_fv3(int attacker, const RelationGraph& graph,
                                            const EntityRegistry& registry) {
    if (attacker < 0 || attacker >= registry.count(Kind::attacker))
        throw DataError("unresolved attacker index");
    std::vector<std::uint8_t> bits(
        static_cast<std::size_t>(registry.count(Kind::human_vulnerability)), 0);
    for (int m : graph.objects_of(Relation::performs, attacker))
        for (int v : graph.objects_of(Relation::exploits, m)) bits[static_cast<std::size_t>(v)] = 1;
    return bits;
}

// fv5: union of effect mechanisms over the victim's vulnerabilities.
inline std::vector<std::uint8_t> encode_fv5(int victim, const RelationGraph& graph,
                                            const EntityRegistry& registry) {
    if (victim < 0 || victim >= registry.count(Kind::victim))
        throw DataError("unresolved victim index");
    std::vector<std::uint8_t> bits(
        static_cast<std::size_t>(registry.count(Kind::effect_mechanism)), 0);
    for (int v : graph.objects_of(Relation::has_vulnerability, victim))
        for (int e : graph.objects_of(Relation::effected_by, v)) bits[static_cast<std::size_t>(e)] = 1;
    return bits;
}

struct FeatureMatrix {
    FeatureLayout layout;
    std::vector<std::vector<std::uint8_t>> rows;
    std::vector<int> labels;
    std::vector<std::string> pair_ids;

    std::size_t size() const { return rows.size(); }
};

inline FeatureMatrix assemble_dataset(const std::vector<LabeledPair>& pairs, int combination,
                                      const RelationGraph& graph, const EntityRegistry& registry) {
    FeatureMatrix m;
    m.layout = layout_for(combination, registry);
    m.rows.reserve(pairs.size());
    m.labels.reserve(pairs.size());
    m.pair_ids.reserve(pairs.size());

    for (const auto& p : pairs) {
        std::vector<std::uint8_t> row;
        row.reserve(static_cast<std::size_t>(m.layout.width));
        for (const auto& seg : m.layout.segments) {
            std::vector<std::uint8_t> bits;
            if (seg.name == "fv1")
                bits = encode_onehot(p.attacker, Relation::performs, Kind::attack_method, graph,
                                     registry);
            else if (seg.name == "fv2")
                bits = encode_onehot(p.victim, Relation::has_vulnerability,
                                     Kind::human_vulnerability, graph, registry);
            else if (seg.name == "fv3")
                bits = encode_fv3(p.attacker, graph, registry);
            else if (seg.name == "fv4")
                bits = encode_onehot(p.victim, Relation::exposed_via, Kind::attack_medium, graph,
                                     registry);
            else if (seg.name == "fv5")
                bits = encode_fv5(p.victim, graph, registry);
            else
                throw InternalError("unknown segment " + seg.name);
            row.insert(row.end(), bits.begin(), bits.end());
        }
        if (static_cast<int>(row.size()) != m.layout.width)
            throw InternalError("assembled row width mismatch");
        m.rows.push_back(std::move(row));
        m.labels.push_back(p.label);
        m.pair_ids.push_back(registry.id_of(Kind::attacker, p.attacker) + ":" +
                             registry.id_of(Kind::victim, p.victim));
    }
    return m;
}

// Dataset CSV: header `pair_id,<segment.entity...>,label`; cells are 0/1.
inline std::string dataset_to_csv(const FeatureMatrix& m) {
    std::ostringstream out;
    out << "pair_id";
    for (const auto& col : m.layout.column_names) out << ',' << col;
    out << ",label\n";
    for (std::size_t i = 0; i < m.rows.size(); ++i) {
        out << m.pair_ids[i];
        for (std::uint8_t v : m.rows[i]) out << ',' << static_cast<int>(v);
        out << ',' << m.labels[i] << '\n';
    }
    return out.str();
}

// Sidecar JSON describing the layout a dataset was assembled against.
// `meta` lets callers attach run configuration and input hashes.
inline nlohmann::json layout_to_json(const FeatureLayout& layout,
                                     nlohmann::json meta = nlohmann::json::object()) {
    nlohmann::json segs = nlohmann::json::array();
    for (const auto& s : layout.segments)
        segs.push_back({{"name", s.name},
                        {"relation", s.relation},
                        {"kind", std::string(kind_name(s.target_kind))},
                        {"width", s.width}});
    return nlohmann::json{
        {"combination", layout.combination},
        {"width", layout.width},
        {"segments", segs},
        {"columns", layout.column_names},
        {"registry_hash", to_hex(layout.registry_hash)},
        {"meta", std::move(meta)},
    };
}

// Reads a dataset CSV plus its sidecar layout JSON back into a FeatureMatrix.
inline FeatureMatrix read_dataset_csv(const std::string& csv_text, const nlohmann::json& layout_json) {
    FeatureMatrix m;
    m.layout.combination = layout_json.at("combination").get<int>();
    m.layout.width = layout_json.at("width").get<int>();
    m.layout.column_names = layout_json.at("columns").get<std::vector<std::string>>();
    m.layout.registry_hash =
        std::stoull(layout_json.at("registry_hash").get<std::string>(), nullptr, 16);
    for (const auto& s : layout_json.at("segments")) {
        auto kind = kind_from_name(s.at("kind").get<std::string>());
        if (!kind) throw DataError("layout sidecar: unknown kind");
        m.layout.segments.push_back({s.at("name").get<std::string>(),
                                     s.at("relation").get<std::string>(), *kind,
                                     s.at("width").get<int>()});
    }
    if (static_cast<int>(m.layout.column_names.size()) != m.layout.width)
        throw DataError("layout sidecar: column list does not match width");

    std::istringstream in(csv_text);
    std::string line;
    if (!std::getline(in, line)) throw DataError("dataset CSV: missing header");
    auto header = split_fields(line, ',');
    if (header.size() != static_cast<std::size_t>(m.layout.width) + 2 ||
        header.front() != "pair_id" || header.back() != "label")
        throw DataError("dataset CSV: header does not match layout width " +
                        std::to_string(m.layout.width));
    for (int j = 0; j < m.layout.width; ++j)
        if (header[static_cast<std::size_t>(j) + 1] != m.layout.column_names[static_cast<std::size_t>(j)])
            throw DataError("dataset CSV: column '" +
                            std::string(header[static_cast<std::size_t>(j) + 1]) +
                            "' does not match layout column '" +
                            m.layout.column_names[static_cast<std::size_t>(j)] + "'");

    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        auto fields = split_fields(line, ',');
        if (fields.size() != header.size())
            throw DataError("dataset CSV line " + std::to_string(line_no) + ": expected " +
                            std::to_string(header.size()) + " columns");
        m.pair_ids.emplace_back(fields.front());
        std::vector<std::uint8_t> row(static_cast<std::size_t>(m.layout.width));
        for (int j = 0; j < m.layout.width; ++j) {
            auto f = fields[static_cast<std::size_t>(j) + 1];
            if (f == "0") row[static_cast<std::size_t>(j)] = 0;
            else if (f == "1") row[static_cast<std::size_t>(j)] = 1;
            else
                throw DataError("dataset CSV line " + std::to_string(line_no) +
                                ": cell must be 0 or 1");
        }
        auto lab = fields.back();
        if (lab == "0") m.labels.push_back(0);
        else if (lab == "1") m.labels.push_back(1);
        else throw DataError("dataset CSV line " + std::to_string(line_no) + ": label must be 0 or 1");
        m.rows.push_back(std::move(row));
    }
    return m;
}

} // namespace setd
