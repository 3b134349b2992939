#include "keyclust/cluster.hpp"

namespace keyclust {

std::string_view to_string(ClusterMode mode) {
    return mode == ClusterMode::Standard ? "standard" : "modified";
}

std::string_view to_string(Seeding seeding) {
    return seeding == Seeding::Partial ? "partial" : "random";
}

ClusterMode parse_cluster_mode(std::string_view name) {
    if (name == "modified") return ClusterMode::Modified;
    if (name == "standard") return ClusterMode::Standard;
    throw InvalidConfig("unknown mode '" + std::string(name) + "' (expected modified|standard)");
}

Seeding parse_seeding(std::string_view name) {
    if (name == "random" || name == "random_distinct") return Seeding::RandomDistinct;
    if (name == "partial") return Seeding::Partial;
    throw InvalidConfig("unknown seeding '" + std::string(name) + "' (expected random|partial)");
}

}  // namespace keyclust
