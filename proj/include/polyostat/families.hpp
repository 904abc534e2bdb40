#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string_view>

namespace polyostat {

// The six column families. Order is stable and used for caching.
enum class FamilyId { dcc, cc, dc, st, es, wa };

inline constexpr std::size_t kFamilyCount = 6;

inline constexpr std::array<FamilyId, 6> all_families{
    FamilyId::dcc, FamilyId::cc, FamilyId::dc,
    FamilyId::st,  FamilyId::es, FamilyId::wa};

struct FamilySpec {
    FamilyId id;
    const char* name;
    // Perimeter gained horizontally per column (0 for the diagonal family,
    // whose perimeter bookkeeping has no separate horizontal term).
    int horizontal_increment;
    // A closed joint perimeter generating function exists for comparison.
    bool supports_known_gf;
    // Long-range covariance goes through the xi5 sums; dcc and wa have
    // direct closed-form treatments instead.
    bool uses_xi5;
};

const FamilySpec& family_spec(FamilyId id);
std::optional<FamilyId> parse_family(std::string_view name);
const char* family_name(FamilyId id);

// U(k,j): number of vertical placements of a size-j column after a size-k
// column. Zero marks a forbidden transition.
long gluing_count(FamilyId id, long k, long j);

}  // namespace polyostat
