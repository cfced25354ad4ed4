#pragma once

#include "pcep/dataset.hpp"
#include "pcep/design.hpp"
#include "pcep/errors.hpp"
#include "pcep/eval.hpp"
#include "pcep/inference.hpp"
#include "pcep/marginals.hpp"
#include "pcep/model_indicator.hpp"
#include "pcep/model_space.hpp"
#include "pcep/pcep_core.hpp"
#include "pcep/quadrature.hpp"
#include "pcep/random.hpp"
#include "pcep/search.hpp"
