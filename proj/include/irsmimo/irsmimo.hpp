// SPDX-License-Identifier: Apache-2.0
//
// irsmimo — joint active/passive beamforming simulator for IRS-assisted
// massive MIMO downlinks
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
// ------------------------------------------------------------------------

#pragma once

#include "irsmimo/active.hpp"
#include "irsmimo/association.hpp"
#include "irsmimo/channel.hpp"
#include "irsmimo/common.hpp"
#include "irsmimo/experiment.hpp"
#include "irsmimo/geometry.hpp"
#include "irsmimo/pathloss.hpp"
#include "irsmimo/phases.hpp"
#include "irsmimo/scenario.hpp"
#include "irsmimo/steering.hpp"
