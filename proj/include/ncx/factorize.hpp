#pragma once

#include "ncx/opfunc.hpp"

namespace ncx {

// f = h* g cellwise with ||g||^2 = ||h||^2 = ||f||_{L1(S1)}.
template <typename Fn>
struct FactorPair {
  Fn g;
  Fn h;
};

FactorPair<DyadicFn> generic_factor(const DyadicFn& f);
FactorPair<TrigFn> generic_factor(const TrigFn& f);

}  // namespace ncx
