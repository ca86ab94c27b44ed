#pragma once

#include "fbauction/kernels.hpp"

namespace fba::kernels::detail {

extern const KernelTable kScalarTable;
#if defined(FBA_HAVE_AVX2)
extern const KernelTable kAvx2Table;
#endif

}  // namespace fba::kernels::detail
