#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fslab/grid.hpp"

namespace fslab {

/// Fixed test-function shapes, from smooth plateaus down to jump
/// discontinuities.  All vanish at |x| >= radius.
enum class CorpusProfile {
    Hat,
    SmoothBump,
    Parabola,
    CosineArch,
    Step,
    Zigzag,
    TwinBumps,
};

std::string to_string(CorpusProfile profile);
CorpusProfile corpus_profile_from_string(const std::string& name);

GridFunction make_profile(CorpusProfile profile, int dim, int level, double extent,
                          double radius);

struct CorpusMember {
    std::string name;
    GridFunction f;
};

/// The seven fixed profiles followed by seeded random members (sums of three
/// smooth sub-bumps).  Random parameters depend only on seed and index, never
/// on the level, so the same member refines consistently across resolutions.
std::vector<CorpusMember> make_corpus(int dim, int level, double extent, double radius,
                                      int count, std::uint64_t seed);

} // namespace fslab
