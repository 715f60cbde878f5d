#pragma once

#include "mcflab/flowsim/common.hpp"
#include "mcflab/flowsim/consistency.hpp"
#include "mcflab/flowsim/equivariant.hpp"
#include "mcflab/flowsim/output.hpp"
#include "mcflab/flowsim/run.hpp"
#include "mcflab/flowsim/torus.hpp"
