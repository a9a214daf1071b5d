#pragma once

#include "cara/classifier.hpp"
#include "cara/config.hpp"
#include "cara/cost_matrix.hpp"
#include "cara/datagen.hpp"
#include "cara/detectors.hpp"
#include "cara/errors.hpp"
#include "cara/evaluation.hpp"
#include "cara/harness.hpp"
#include "cara/model_bank.hpp"
#include "cara/optimize.hpp"
#include "cara/oracle.hpp"
#include "cara/policies.hpp"
#include "cara/random.hpp"
#include "cara/scenarios.hpp"
#include "cara/staleness.hpp"
#include "cara/stream_io.hpp"
#include "cara/types.hpp"
