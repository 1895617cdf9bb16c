#pragma once

// Umbrella header for the whole simulator.

#include "ptcpsim/cc/variant.hpp"
#include "ptcpsim/core/engine.hpp"
#include "ptcpsim/core/random.hpp"
#include "ptcpsim/exp/config.hpp"
#include "ptcpsim/exp/csv.hpp"
#include "ptcpsim/exp/matrix.hpp"
#include "ptcpsim/exp/svg_plots.hpp"
#include "ptcpsim/flow/tcp_flow.hpp"
#include "ptcpsim/net/link.hpp"
#include "ptcpsim/net/packet.hpp"
#include "ptcpsim/net/poisson.hpp"
#include "ptcpsim/net/red.hpp"
#include "ptcpsim/net/topology.hpp"
#include "ptcpsim/parallel/session.hpp"
#include "ptcpsim/sim/scenario.hpp"
#include "ptcpsim/stats/metrics.hpp"
