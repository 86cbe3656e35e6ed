// Copyright pitomo contributors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// Umbrella header: the whole library.

#include "pitomo/common.hpp"
#include "pitomo/exact_model.hpp"
#include "pitomo/fringes.hpp"
#include "pitomo/graph_export.hpp"
#include "pitomo/interferometer.hpp"
#include "pitomo/reconstruction.hpp"
#include "pitomo/serialization.hpp"
#include "pitomo/simulate.hpp"
#include "pitomo/states.hpp"
