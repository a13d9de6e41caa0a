#pragma once

#include "omni/asymptotic.hpp"
#include "omni/constraints.hpp"
#include "omni/error.hpp"
#include "omni/gf256.hpp"
#include "omni/instance.hpp"
#include "omni/json_io.hpp"
#include "omni/lexlp.hpp"
#include "omni/netcode.hpp"
#include "omni/packet_set.hpp"
#include "omni/predict.hpp"
#include "omni/rational.hpp"
#include "omni/simplex.hpp"
#include "omni/vertex_oracle.hpp"
