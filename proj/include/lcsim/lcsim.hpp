// SPDX-License-Identifier: Apache-2.0
//
// lcsim - LiDAR-driven vehicular channel simulation library
// Copyright (C) 2026 The lcsim authors
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

#ifndef LCSIM_LCSIM_HPP
#define LCSIM_LCSIM_HPP

#include "channel.hpp"
#include "config.hpp"
#include "dataset.hpp"
#include "errors.hpp"
#include "geometry.hpp"
#include "io.hpp"
#include "lidar.hpp"
#include "metrics.hpp"
#include "mlp.hpp"
#include "pipeline.hpp"
#include "pointcloud.hpp"
#include "recognizer.hpp"
#include "rng.hpp"
#include "rt_oracle.hpp"
#include "scene.hpp"

#endif
