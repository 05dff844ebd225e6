// Copyright 2026 The heisctl Authors
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

#include "heisctl/error.hpp"
#include "heisctl/planar.hpp"
#include "heisctl/heisenberg.hpp"
#include "heisctl/system.hpp"
#include "heisctl/reduction.hpp"
#include "heisctl/control.hpp"
#include "heisctl/integrate.hpp"
#include "heisctl/flows.hpp"
#include "heisctl/normal_form.hpp"
#include "heisctl/classify.hpp"
#include "heisctl/certificates.hpp"
#include "heisctl/steering.hpp"
#include "heisctl/planners.hpp"
#include "heisctl/reachability.hpp"
