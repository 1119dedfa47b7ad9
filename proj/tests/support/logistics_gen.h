#pragma once

#include <string>

namespace mtplan::testsupport {

// Small package-delivery instances: each city has an airport and an office
// joined by a street, airports are joined pairwise by highways and air
// links. Planes are fast and expensive, trucks slow and cheap, so the best
// plan depends on how the objective weighs cost against makespan.
struct LogisticsSpec {
    int cities = 2;   // >= 2
    int packages = 2; // >= 1
    int planes = 1;   // >= 1
    unsigned seed = 1;
};

struct GeneratedInstance {
    std::string domain;
    std::string problem;
};

GeneratedInstance generate_logistics(const LogisticsSpec &spec);

} // namespace mtplan::testsupport
