// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "relaylearn/baselines.hpp"
#include "relaylearn/channelsim.hpp"
#include "relaylearn/dataset.hpp"
#include "relaylearn/errors.hpp"
#include "relaylearn/format.hpp"
#include "relaylearn/link.hpp"
#include "relaylearn/metrics.hpp"
#include "relaylearn/mlp.hpp"
#include "relaylearn/model.hpp"
#include "relaylearn/plot.hpp"
#include "relaylearn/relay.hpp"
#include "relaylearn/rng.hpp"
