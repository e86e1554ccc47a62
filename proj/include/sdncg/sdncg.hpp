#pragma once

#include "sdncg/error.hpp"
#include "sdncg/rational.hpp"
#include "sdncg/graph.hpp"
#include "sdncg/graph_io.hpp"
#include "sdncg/tree.hpp"
#include "sdncg/game.hpp"
#include "sdncg/spanning.hpp"
#include "sdncg/constructions.hpp"
#include "sdncg/analysis.hpp"
#include "sdncg/certificates.hpp"
#include "sdncg/campaign.hpp"
