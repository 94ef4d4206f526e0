#pragma once

// Synthetic world generator: schema-faithful registry + graph shaped like the
// reference corpus (15/15/33/43/12/33 entities, 25/88/97/29 fixed edge
// counts), with labels planted by a fixed path rule so the learning task has
// recoverable structure.

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <string>
#include <vector>

#include <json.hpp>

#include "setd/ingest.hpp"
#include "setd/rng.hpp"

namespace setd {

struct WorldConfig {
    int attackers = 15;
    int victims = 15;
    int attack_methods = 33;
    int human_vulnerabilities = 43;
    int attack_mediums = 12;
    int effect_mechanisms = 33;

    int performs_edges = 25;
    int has_vulnerability_edges = 88;
    int exploits_edges = 97;
    int uses_medium_edges = 29;

    double exposure_density = 0.5; // fraction of victim x medium pairs exposed
    int mechanism_fanout = 2;      // effected_by edges per vulnerability
    double vuln_focus = 0.25;      // geometric skew toward low-index vulnerabilities

    double noise = 0.05;
    std::uint64_t seed = 42;
};

// threat(a,v) iff some performed method exploits a vulnerability the victim
// has AND travels over a medium the victim is exposed to.
struct ThreatRule {
    static constexpr std::string_view kForm =
        "threat(a,v) iff exists m,u,d: performs(a,m) and exploits(m,u) and "
        "has_vulnerability(v,u) and uses_medium(m,d) and exposed_via(v,d)";
};

inline bool rule_holds(const RelationGraph& graph, int attacker, int victim) {
    const auto& victim_vulns = graph.objects_of(Relation::has_vulnerability, victim);
    const auto& victim_mediums = graph.objects_of(Relation::exposed_via, victim);
    for (int m : graph.objects_of(Relation::performs, attacker)) {
        if (sorted_intersects(graph.objects_of(Relation::exploits, m), victim_vulns) &&
            sorted_intersects(graph.objects_of(Relation::uses_medium, m), victim_mediums))
            return true;
    }
    return false;
}

namespace detail {

inline std::string synth_id(const char* prefix, int index, int count) {
    int width = 2;
    for (int v = count - 1; v >= 100; v /= 10) ++width;
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%s%0*d", prefix, width, index);
    return buf;
}

// Geometric preference for low object indices; focus 0 is uniform.
inline std::vector<double> focus_weights(int count, double focus) {
    std::vector<double> w(static_cast<std::size_t>(count));
    double v = 1.0;
    for (int i = 0; i < count; ++i) {
        w[static_cast<std::size_t>(i)] = v;
        v *= (1.0 - focus);
    }
    return w;
}

inline std::size_t weighted_pick(Rng& rng, const std::vector<double>& weights) {
    double total = 0;
    for (double w : weights) total += w;
    if (total <= 0) throw InternalError("weighted_pick: no mass left");
    double r = rng.unit() * total;
    for (std::size_t i = 0; i < weights.size(); ++i) {
        if (weights[i] <= 0) continue;
        if (r < weights[i]) return i;
        r -= weights[i];
    }
    for (std::size_t i = weights.size(); i-- > 0;)
        if (weights[i] > 0) return i;
    throw InternalError("weighted_pick: fell off the end");
}

// Fills `relation` with exactly `target` edges: one mandatory edge per listed
// subject first (weighted object draw), then extras over the remaining
// (subject, object) pairs. Object weights skew both phases identically.
inline void fill_relation(RelationGraph& graph, Relation relation,
                          const std::vector<int>& covered_subjects, int all_subjects,
                          int objects, int target, const std::vector<double>& object_weights,
                          Rng& rng) {
    long long capacity = static_cast<long long>(all_subjects) * objects;
    if (target < static_cast<int>(covered_subjects.size()) || target > capacity)
        throw DataError(std::string("generate_world: infeasible edge target for ") +
                        std::string(relation_name(relation)));

    for (int s : covered_subjects) {
        std::size_t obj = weighted_pick(rng, object_weights);
        graph.add_edge(relation, s, static_cast<int>(obj));
    }

    int extras = target - static_cast<int>(covered_subjects.size());
    if (extras == 0) return;
    std::vector<std::pair<int, int>> open;
    std::vector<double> open_weight;
    for (int s = 0; s < all_subjects; ++s) {
        const auto& used = graph.objects_of(relation, s);
        for (int o = 0; o < objects; ++o) {
            if (std::binary_search(used.begin(), used.end(), o)) continue;
            open.emplace_back(s, o);
            open_weight.push_back(object_weights[static_cast<std::size_t>(o)]);
        }
    }
    for (int e = 0; e < extras; ++e) {
        std::size_t pick = weighted_pick(rng, open_weight);
        graph.add_edge(relation, open[pick].first, open[pick].second);
        open_weight[pick] = 0;
    }
}

} // namespace detail

inline void validate_config(const WorldConfig& c) {
    auto positive = [](int v, const char* what) {
        if (v < 1) throw DataError(std::string("generate_world: ") + what + " must be positive");
    };
    positive(c.attackers, "attackers");
    positive(c.victims, "victims");
    positive(c.attack_methods, "attack_methods");
    positive(c.human_vulnerabilities, "human_vulnerabilities");
    positive(c.attack_mediums, "attack_mediums");
    positive(c.effect_mechanisms, "effect_mechanisms");
    if (c.noise < 0 || c.noise > 1)
        throw DataError("generate_world: noise rate must lie in [0,1]");
    if (c.exposure_density <= 0 || c.exposure_density > 1)
        throw DataError("generate_world: exposure_density must lie in (0,1]");
    if (c.mechanism_fanout < 1 || c.mechanism_fanout > c.effect_mechanisms)
        throw DataError("generate_world: mechanism_fanout out of range");
    if (c.vuln_focus < 0 || c.vuln_focus >= 1)
        throw DataError("generate_world: vuln_focus must lie in [0,1)");
}

inline World generate_world(const WorldConfig& config) {
    validate_config(config);

    std::vector<std::pair<std::string, Kind>> decls;
    auto declare = [&decls](const char* prefix, int count, Kind kind) {
        for (int i = 0; i < count; ++i)
            decls.emplace_back(detail::synth_id(prefix, i, count), kind);
    };
    declare("atk_", config.attackers, Kind::attacker);
    declare("vic_", config.victims, Kind::victim);
    declare("mtd_", config.attack_methods, Kind::attack_method);
    declare("vul_", config.human_vulnerabilities, Kind::human_vulnerability);
    declare("med_", config.attack_mediums, Kind::attack_medium);
    declare("mch_", config.effect_mechanisms, Kind::effect_mechanism);

    World world;
    world.registry = EntityRegistry::build(decls);
    world.graph = RelationGraph(world.registry);
    Rng rng(mix_seed({config.seed, 0x5e7d}));

    auto ascending = [](int n) {
        std::vector<int> v(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) v[static_cast<std::size_t>(i)] = i;
        return v;
    };
    std::vector<double> uniform_methods(static_cast<std::size_t>(config.attack_methods), 1.0);
    std::vector<double> uniform_mediums(static_cast<std::size_t>(config.attack_mediums), 1.0);
    std::vector<double> vuln_weights =
        detail::focus_weights(config.human_vulnerabilities, config.vuln_focus);

    // performs: every attacker acts at least once.
    detail::fill_relation(world.graph, Relation::performs, ascending(config.attackers),
                          config.attackers, config.attack_methods, config.performs_edges,
                          uniform_methods, rng);

    // exploits: every method exploits something; hot vulnerabilities preferred.
    detail::fill_relation(world.graph, Relation::exploits, ascending(config.attack_methods),
                          config.attack_methods, config.human_vulnerabilities,
                          config.exploits_edges, vuln_weights, rng);

    // has_vulnerability: every victim has at least one, same hot skew.
    detail::fill_relation(world.graph, Relation::has_vulnerability, ascending(config.victims),
                          config.victims, config.human_vulnerabilities,
                          config.has_vulnerability_edges, vuln_weights, rng);

    // uses_medium: the budget cannot cover all methods when it is smaller than
    // the method count, so performed methods are covered first — they are the
    // only ones the threat rule can ever see.
    std::vector<int> performed;
    for (int a = 0; a < config.attackers; ++a)
        for (int m : world.graph.objects_of(Relation::performs, a))
            performed.push_back(m);
    std::sort(performed.begin(), performed.end());
    performed.erase(std::unique(performed.begin(), performed.end()), performed.end());
    detail::fill_relation(world.graph, Relation::uses_medium, performed, config.attack_methods,
                          config.attack_mediums, config.uses_medium_edges, uniform_mediums,
                          rng);

    // exposed_via: density-controlled, every victim exposed somewhere.
    long long pairs = static_cast<long long>(config.victims) * config.attack_mediums;
    int exposure_target = static_cast<int>(std::llround(config.exposure_density *
                                                        static_cast<double>(pairs)));
    if (exposure_target < config.victims) exposure_target = config.victims;
    if (exposure_target > pairs) exposure_target = static_cast<int>(pairs);
    detail::fill_relation(world.graph, Relation::exposed_via, ascending(config.victims),
                          config.victims, config.attack_mediums, exposure_target,
                          uniform_mediums, rng);

    // effected_by: fixed fan-out per vulnerability.
    for (int u = 0; u < config.human_vulnerabilities; ++u)
        for (std::size_t mch : rng.sample_indices(
                 static_cast<std::size_t>(config.effect_mechanisms),
                 static_cast<std::size_t>(config.mechanism_fanout)))
            world.graph.add_edge(Relation::effected_by, u, static_cast<int>(mch));

    return world;
}

inline std::vector<LabeledPair> plant_labels(const EntityRegistry& registry,
                                             const RelationGraph& graph, ThreatRule,
                                             double noise, std::uint64_t seed) {
    if (noise < 0 || noise > 1) throw DataError("plant_labels: noise rate must lie in [0,1]");
    Rng rng(mix_seed({seed, 0x1abe1}));
    std::vector<LabeledPair> out;
    int attackers = registry.count(Kind::attacker);
    int victims = registry.count(Kind::victim);
    out.reserve(static_cast<std::size_t>(attackers) * static_cast<std::size_t>(victims));
    for (int a = 0; a < attackers; ++a)
        for (int v = 0; v < victims; ++v) {
            int label = rule_holds(graph, a, v) ? 1 : 0;
            if (rng.unit() < noise) label = 1 - label;
            out.push_back({a, v, label});
        }
    return out;
}

struct ShareCount {
    std::size_t positives = 0;
    std::size_t total = 0;
    double share() const {
        return total ? static_cast<double>(positives) / static_cast<double>(total) : 0.0;
    }
};

inline ShareCount noiseless_positive_share(const WorldConfig& config) {
    World world = generate_world(config);
    ShareCount s;
    int attackers = world.registry.count(Kind::attacker);
    int victims = world.registry.count(Kind::victim);
    s.total = static_cast<std::size_t>(attackers) * static_cast<std::size_t>(victims);
    for (int a = 0; a < attackers; ++a)
        for (int v = 0; v < victims; ++v)
            if (rule_holds(world.graph, a, v)) ++s.positives;
    return s;
}

// Seed search first, then widening exposure-density nudges, until the
// noiseless share lands within tolerance. Attempt 0 is the config as given.
inline WorldConfig calibrate_positive_share(const WorldConfig& config, double target,
                                            double tolerance, int max_attempts = 64) {
    if (!(target > 0 && target < 1))
        throw DataError("calibrate_positive_share: target must lie in (0,1)");
    if (tolerance < 0) throw DataError("calibrate_positive_share: negative tolerance");
    if (max_attempts < 1) throw DataError("calibrate_positive_share: max_attempts < 1");

    const int seeds_per_density = 8;
    double best_diff = 2.0;
    ShareCount best;
    for (int attempt = 0; attempt < max_attempts; ++attempt) {
        WorldConfig cand = config;
        if (attempt > 0) {
            cand.seed = mix_seed({config.seed, static_cast<std::uint64_t>(attempt)});
            int step = attempt / seeds_per_density;
            double offset = ((step + 1) / 2) * 0.05 * (step % 2 == 1 ? 1.0 : -1.0);
            double density = config.exposure_density + offset;
            if (density < 0.05) density = 0.05;
            if (density > 1.0) density = 1.0;
            cand.exposure_density = density;
        }
        ShareCount s = noiseless_positive_share(cand);
        double diff = std::abs(s.share() - target);
        if (diff <= tolerance) return cand;
        if (diff < best_diff) {
            best_diff = diff;
            best = s;
        }
    }
    throw DataError("calibrate_positive_share: exhausted " + std::to_string(max_attempts) +
                    " attempts; closest share " +
                    format_share(best.positives, best.total));
}

inline nlohmann::json world_config_to_json(const WorldConfig& c) {
    return {{"attackers", c.attackers},
            {"victims", c.victims},
            {"attack_methods", c.attack_methods},
            {"human_vulnerabilities", c.human_vulnerabilities},
            {"attack_mediums", c.attack_mediums},
            {"effect_mechanisms", c.effect_mechanisms},
            {"performs_edges", c.performs_edges},
            {"has_vulnerability_edges", c.has_vulnerability_edges},
            {"exploits_edges", c.exploits_edges},
            {"uses_medium_edges", c.uses_medium_edges},
            {"exposure_density", c.exposure_density},
            {"mechanism_fanout", c.mechanism_fanout},
            {"vuln_focus", c.vuln_focus},
            {"noise", c.noise},
            {"seed", c.seed}};
}

inline nlohmann::json world_meta_json(const WorldConfig& config, const World& world,
                                      const std::vector<LabeledPair>& labels) {
    WorldSummary s = summarize_world(world.registry, world.graph, labels);
    return {{"config", world_config_to_json(config)},
            {"summary", summary_to_json(s)},
            {"rule", std::string(ThreatRule::kForm)},
            {"seed", config.seed}};
}

} // namespace setd
