/*
 * Copyright 2026 The specdiff Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef SPECDIFF_SPECDIFF_HPP
#define SPECDIFF_SPECDIFF_HPP

#include "specdiff/signature.hpp"
#include "specdiff/expr.hpp"
#include "specdiff/rng.hpp"
#include "specdiff/generator.hpp"
#include "specdiff/interp.hpp"
#include "specdiff/harness.hpp"
#include "specdiff/report.hpp"
#include "specdiff/suite.hpp"

#endif  // SPECDIFF_SPECDIFF_HPP
