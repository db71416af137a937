#ifndef PDC_SYSTEM_TEXT_HPP
#define PDC_SYSTEM_TEXT_HPP

#include <string>
#include <string_view>

#include "pdc/moment_system.hpp"

namespace pdc {

/// "<ap' ap>^2", "-2*<ap><as ai>", "(1/2+3i)*<as>".
std::string format_poly(const MomentPoly& p);
MomentPoly parse_poly(std::string_view text);

/// One line "d<v>/dtau = <poly>" per variable in variable order; aliases as '#' lines first.
std::string export_system(const MomentSystem& sys);

/// Reads the export grammar; '#' lines and blank lines are ignored. Variables come back
/// sorted, so export_system(parse_system(t)) is the canonical form of t.
MomentSystem parse_system(std::string_view text);

}  // namespace pdc

#endif  // PDC_SYSTEM_TEXT_HPP
