#pragma once

#include <cstdlib>
#include <filesystem>
#include <optional>
#include <string>

#include "opsw/instance.hpp"
#include "opsw/recourse.hpp"
#include "opsw/rng.hpp"

namespace opsw::fixtures {

/// Set-3 score file, from OPSW_SET3 or data/tsiligirides_set3.txt.
inline std::optional<std::string> set3_path() {
    if (const char* env = std::getenv("OPSW_SET3"); env && std::filesystem::exists(env)) return std::string(env);
    const auto local = std::filesystem::path(OPSW_SOURCE_DIR) / "data" / "tsiligirides_set3.txt";
    if (std::filesystem::exists(local)) return local.string();
    return std::nullopt;
}

/// Depot (0,0), v1 = (10,0) with score 10, v2 = (3,0) with score 5, L = 20.
inline Instance toy3() {
    Instance inst;
    inst.length_limit = 20.0;
    inst.nodes = {{0, 0, 0}, {10, 0, 10}, {3, 0, 5}};
    return inst;
}

/// Depot (0,0) and one node at (4,0) with score 10.
inline Instance toy2(double L) {
    Instance inst;
    inst.length_limit = L;
    inst.nodes = {{0, 0, 0}, {4, 0, 10}};
    return inst;
}

inline Path random_path(CounterRng& rng, std::size_t node_count, std::size_t max_len) {
    std::vector<int> pool;
    for (std::size_t v = 1; v < node_count; ++v) pool.push_back(static_cast<int>(v));
    for (std::size_t i = pool.size(); i > 1; --i) std::swap(pool[i - 1], pool[rng.below(i)]);
    const std::size_t len = rng.below(std::min(max_len, pool.size()) + 1);
    return Path{std::vector<int>(pool.begin(), pool.begin() + static_cast<long>(len))};
}

}  // namespace opsw::fixtures
