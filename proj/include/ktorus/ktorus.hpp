#pragma once

#include "ktorus/errors.hpp"
#include "ktorus/fft.hpp"
#include "ktorus/kernel.hpp"
#include "ktorus/norms.hpp"
#include "ktorus/sparse_grid.hpp"
#include "ktorus/special.hpp"
#include "ktorus/study.hpp"
#include "ktorus/targets.hpp"
#include "ktorus/tensor.hpp"
