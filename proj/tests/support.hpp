#pragma once

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "iai/catalog.hpp"
#include "iai/core.hpp"
#include "iai/validate.hpp"

namespace iai::test {

inline std::filesystem::path source_dir() { return IAI_SOURCE_DIR; }

inline std::string read_file(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline std::vector<std::filesystem::path> iai_files(const std::filesystem::path& dir) {
    std::vector<std::filesystem::path> out;
    for (const auto& e : std::filesystem::directory_iterator(dir)) {
        if (e.path().extension() == ".iai") out.push_back(e.path());
    }
    std::sort(out.begin(), out.end());
    return out;
}

inline const ParadigmGraph& paradigm(std::string_view id) { return default_catalog().at(id).graph; }

inline Edge edge(Entity s, Entity t, int seq) { return Edge{{s, t}, seq, {}}; }

/// Random graph over whitelisted relations, each used at most once, listed in
/// a random order with random concurrency grouping. Not necessarily valid.
inline ParadigmGraph random_graph(std::mt19937& rng, std::size_t max_edges = 7) {
    std::vector<std::size_t> idx(kRelationCount);
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    std::shuffle(idx.begin(), idx.end(), rng);
    const std::size_t k = std::uniform_int_distribution<std::size_t>(1, max_edges)(rng);
    std::vector<Edge> edges;
    int seq = 1;
    for (std::size_t i = 0; i < k; ++i) {
        if (i > 0 && std::bernoulli_distribution(0.6)(rng)) ++seq;
        edges.push_back({kWhitelist[idx[i]], seq, {}});
    }
    return ParadigmGraph(std::move(edges), std::bernoulli_distribution(0.5)(rng));
}

/// Draws random graphs until one passes atomic validation.
inline ParadigmGraph random_valid_atomic(std::mt19937& rng, std::size_t max_edges = 7) {
    for (;;) {
        ParadigmGraph g = random_graph(rng, max_edges);
        if (validate(g, Profile::Atomic).passes()) return g;
    }
}

}  // namespace iai::test
