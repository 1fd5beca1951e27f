#pragma once

#include <cstdint>
#include <string>

#include "gbp/system.hpp"

namespace gbp {

enum class GeneratorKind { Tree, SingleLoop, Example1, Example2, Example3Style, Example4Style };

GeneratorKind generator_kind_from_string(const std::string& name);
std::string to_string(GeneratorKind kind);

/// Instance recipes. Every generated system classifies at least weakly
/// D-scaled diagonally dominant at D = I (rejection sampling, bounded
/// attempts) and uses b_i = i + 1 unless the caller replaces the rhs.
struct GeneratorSpec {
    GeneratorKind kind = GeneratorKind::Example1;
    Index n = 0;  // 0 picks the kind's default size

    /// Tree / SingleLoop: target off-diagonal row mass relative to the
    /// diagonal, i.e. the varrho level; must be < 1.
    double row_sum = 0.7;

    /// Example3Style / Example4Style: target mean node degree; 0 picks the
    /// kind's default (3.1 and 7.772 respectively).
    double mean_degree = 0.0;

    /// Example3Style: off-diagonal values are uniform in (value_min, value_max).
    /// Narrowing the range toward value_min yields harder instances (spectral
    /// radius closer to 1).
    double value_min = -1.2;
    double value_max = -0.2;

    /// Example4Style: probability of a positive off-diagonal sign and the
    /// mean absolute off-diagonal row sum after rescaling.
    double positive_prob = 0.8;
    double target_row_sum = 0.4;
};

SparseSystem generate(const GeneratorSpec& spec, std::uint64_t seed);

}  // namespace gbp
