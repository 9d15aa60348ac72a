#pragma once
#include <string>

namespace lf {

// Boundary condition on the boundary face layer: each colour is free (0) or fixed to +1/-1.
struct BC {
    int black = 0;
    int white = 0;
    bool operator==(const BC& o) const { return black == o.black && white == o.white; }
    bool any_fixed() const { return black != 0 || white != 0; }
};

// names: free, r+, r-, w+, w-, r+w+, r-w+, r+w-, r-w-  ("b" accepted as an alias of "r")
BC parse_bc(const std::string& s);
std::string bc_name(BC bc);

}  // namespace lf
