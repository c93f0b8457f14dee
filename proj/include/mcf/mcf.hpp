#pragma once

#include "mcf/errors.hpp"
#include "mcf/tensor_core.hpp"
#include "mcf/gradient_sample.hpp"
#include "mcf/pinching.hpp"
#include "mcf/reaction_terms.hpp"
#include "mcf/samplers.hpp"
#include "mcf/inequality_verifier.hpp"
#include "mcf/flow_sim.hpp"
#include "mcf/rescaling.hpp"
#include "mcf/io.hpp"
