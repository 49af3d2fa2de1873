// Copyright 2026 The TBRVI Authors
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


#ifndef TBRVI_HPP_
#define TBRVI_HPP_

#include "tbrvi/config.hpp"
#include "tbrvi/core.hpp"
#include "tbrvi/diagnostics.hpp"
#include "tbrvi/game.hpp"
#include "tbrvi/io.hpp"
#include "tbrvi/learner.hpp"
#include "tbrvi/markov.hpp"
#include "tbrvi/oracle.hpp"
#include "tbrvi/runner.hpp"
#include "tbrvi/schedule.hpp"
#include "tbrvi/theory.hpp"
#include "tbrvi/tsallis.hpp"
#include "tbrvi/verify.hpp"

#endif  // TBRVI_HPP_
