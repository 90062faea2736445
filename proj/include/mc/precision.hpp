#ifndef MC_PRECISION_HPP
#define MC_PRECISION_HPP

#include <boost/multiprecision/float128.hpp>

namespace mc {

/// 113-bit binary floating point. The snowflake and Heisenberg distances take
/// roots of coordinate differences, which amplifies double roundoff from
/// 1e-16 to about 1e-8; quad keeps the amplified noise below 1e-16.
using quad = boost::multiprecision::float128;

}  // namespace mc

#endif  // MC_PRECISION_HPP
