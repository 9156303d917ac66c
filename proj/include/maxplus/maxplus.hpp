#pragma once

// Umbrella header.

#include "maxplus/closure.hpp"
#include "maxplus/corpus.hpp"
#include "maxplus/errors.hpp"
#include "maxplus/extreal.hpp"
#include "maxplus/geodesics.hpp"
#include "maxplus/harmonic.hpp"
#include "maxplus/io.hpp"
#include "maxplus/kernel.hpp"
#include "maxplus/martin.hpp"
#include "maxplus/measures.hpp"
#include "maxplus/metric.hpp"
