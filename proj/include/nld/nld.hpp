#ifndef NLD_NLD_HPP
#define NLD_NLD_HPP

#include "clifford.hpp"
#include "equations.hpp"
#include "errors.hpp"
#include "finite_difference.hpp"
#include "geometry.hpp"
#include "grid.hpp"
#include "ode.hpp"
#include "polar.hpp"
#include "quantum_scan.hpp"
#include "singularity.hpp"
#include "soler_ode.hpp"
#include "tensor.hpp"
#include "types.hpp"

#endif // NLD_NLD_HPP
