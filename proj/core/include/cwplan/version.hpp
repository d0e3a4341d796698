#ifndef CWPLAN_VERSION_HPP
#define CWPLAN_VERSION_HPP

namespace cwplan {

inline constexpr const char* kVersion = "1.0.0";

} // namespace cwplan

#endif // CWPLAN_VERSION_HPP
