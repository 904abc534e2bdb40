#include "polyostat/families.hpp"

#include <algorithm>

namespace polyostat {

namespace {
constexpr std::array<FamilySpec, 6> kSpecs{{
    {FamilyId::dcc, "dcc", 2, true, false},
    {FamilyId::cc, "cc", 2, true, true},
    {FamilyId::dc, "dc", 0, false, true},
    {FamilyId::st, "st", 2, true, true},
    {FamilyId::es, "es", 2, false, true},
    {FamilyId::wa, "wa", 2, true, false},
}};
}  // namespace

const FamilySpec& family_spec(FamilyId id) {
    return kSpecs[static_cast<int>(id)];
}

const char* family_name(FamilyId id) { return family_spec(id).name; }

std::optional<FamilyId> parse_family(std::string_view name) {
    for (const auto& s : kSpecs)
        if (name == s.name) return s.id;
    return std::nullopt;
}

long gluing_count(FamilyId id, long k, long j) {
    if (k < 1 || j < 1) return 0;
    switch (id) {
        case FamilyId::dcc: return k;
        case FamilyId::cc: return k + j - 1;
        case FamilyId::dc: return j <= k + 1 ? k - j + 2 : 0;
        case FamilyId::st: return std::min(k, j);
        case FamilyId::es: return j >= k - 1 ? 1 : 0;
        case FamilyId::wa: return 1;
    }
    return 0;
}

}  // namespace polyostat
