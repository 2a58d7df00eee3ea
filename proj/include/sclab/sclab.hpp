//
// Copyright 2026 The sclab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

#pragma once

#include "sclab/bounds.hpp"
#include "sclab/channel_ops.hpp"
#include "sclab/discrete_channel.hpp"
#include "sclab/empirical.hpp"
#include "sclab/errors.hpp"
#include "sclab/estimate.hpp"
#include "sclab/estimators.hpp"
#include "sclab/harness/experiment.hpp"
#include "sclab/harness/oracle_suite.hpp"
#include "sclab/harness/output.hpp"
#include "sclab/harness/scenario.hpp"
#include "sclab/parallel.hpp"
#include "sclab/random.hpp"
#include "sclab/traffic_model.hpp"
#include "sclab/trajectory_space.hpp"
