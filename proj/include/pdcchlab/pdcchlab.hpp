// SPDX-License-Identifier: Apache-2.0
//
// pdcchlab - link-level simulation toolkit for the 5G NR downlink control channel
// Copyright (C) 2026 pdcchlab developers
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef PDCCHLAB_PDCCHLAB_HPP
#define PDCCHLAB_PDCCHLAB_HPP

#include "analysis.hpp"
#include "campaign.hpp"
#include "channel.hpp"
#include "common.hpp"
#include "config_json.hpp"
#include "coreset.hpp"
#include "crc24c.hpp"
#include "estimation.hpp"
#include "ofdm.hpp"
#include "polar.hpp"
#include "polar_sequence.hpp"
#include "qpsk.hpp"
#include "rate_match.hpp"
#include "rng.hpp"
#include "scl_decoder.hpp"
#include "sim.hpp"

#endif
