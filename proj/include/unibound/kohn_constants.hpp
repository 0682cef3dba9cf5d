#pragma once

namespace unibound {

/// c1(n, l) for odd l >= 3 (c1(n, 3) = 4); evaluated as an exact rational
/// and rounded once to the nearest double.
double kohn_constant_c1(int n, int l);

/// c2(n, l) for even l >= 4, exact rational rounded once.
double kohn_constant_c2(int n, int l);

}  // namespace unibound
