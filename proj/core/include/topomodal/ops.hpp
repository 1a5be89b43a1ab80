// Operator selectors shared by the finite-space and symbolic engines.

#pragma once

namespace topomodal {

enum class TopoOp { Int, Cl, Deriv };
enum class SetOp { Union, Intersect, Complement };

}  // namespace topomodal
