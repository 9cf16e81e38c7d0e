#pragma once

#include <array>
#include <cstddef>
#include <string>
#include <string_view>

namespace clmn {

/// Four-way stance of a document toward a claim; indices are fixed.
enum class StanceLabel : std::size_t {
    agree = 0,
    disagree = 1,
    discuss = 2,
    unrelated = 3,
};

inline constexpr std::size_t kNumStances = 4;
inline constexpr std::array<StanceLabel, kNumStances> kAllStances = {
    StanceLabel::agree, StanceLabel::disagree, StanceLabel::discuss, StanceLabel::unrelated};

/// related = {agree, disagree, discuss}
inline bool is_related(StanceLabel label) { return label != StanceLabel::unrelated; }

inline std::size_t stance_index(StanceLabel label) { return static_cast<std::size_t>(label); }

std::string to_string(StanceLabel label);
/// Case-insensitive; unknown strings raise ParseError.
StanceLabel parse_stance(std::string_view text);

}  // namespace clmn
