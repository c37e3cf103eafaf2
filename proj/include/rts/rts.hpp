// Copyright 2026 The rts Authors
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

#include "rts/bccks.hpp"
#include "rts/error.hpp"
#include "rts/linalg.hpp"
#include "rts/mixing.hpp"
#include "rts/ode.hpp"
#include "rts/optimizer.hpp"
#include "rts/pauli.hpp"
#include "rts/qsp.hpp"
#include "rts/series.hpp"
