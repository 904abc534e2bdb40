#include "polyostat/qseries.hpp"

#include <cstdlib>
#include <string>

namespace polyostat {

Profile precision_profile() {
    static const Profile p = [] {
        const char* e = std::getenv("POLYOSTAT_PRECISION");
        if (e != nullptr && std::string(e) == "double") return Profile::dbl;
        return Profile::extended;
    }();
    return p;
}

const char* profile_name(Profile p) {
    return p == Profile::dbl ? "double" : "extended";
}

}  // namespace polyostat
