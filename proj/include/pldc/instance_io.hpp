#pragma once

#include <string>

#include "pldc/instance.hpp"

namespace pldc {

// Dispatches on content/extension: JSON instance schema, or the SMPS subset
// (CORE+TIME+STOCH with INDEP DISCRETE entries on RHS and T coefficients; pass
// the .cor path, the sibling .tim/.sto files are found by basename).
TwoStageInstance load_instance(const std::string& path);

void write_instance(const TwoStageInstance& inst, const std::string& path);

}  // namespace pldc
