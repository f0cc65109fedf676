/* Copyright 2026 The stochevo Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 *
 */


#ifndef STOCHEVO_STOCHEVO_HPP
#define STOCHEVO_STOCHEVO_HPP

#include "stochevo/dpareto.hpp"
#include "stochevo/errors.hpp"
#include "stochevo/hia_sim.hpp"
#include "stochevo/killed_gbm.hpp"
#include "stochevo/rng.hpp"
#include "stochevo/sde_core.hpp"
#include "stochevo/stats.hpp"
#include "stochevo/tail_estimation.hpp"

namespace stochevo {
inline constexpr const char* kVersion = "0.1.0";
}

#endif  // STOCHEVO_STOCHEVO_HPP
