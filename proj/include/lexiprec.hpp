// Copyright 2026 The Lexiprec Authors
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

#ifndef LEXIPREC_LEXIPREC_HPP_
#define LEXIPREC_LEXIPREC_HPP_

#include "lexiprec/error.hpp"
#include "lexiprec/experiments.hpp"
#include "lexiprec/ingest.hpp"
#include "lexiprec/metrics.hpp"
#include "lexiprec/model.hpp"
#include "lexiprec/parallel.hpp"
#include "lexiprec/preference.hpp"
#include "lexiprec/prng.hpp"
#include "lexiprec/rational.hpp"
#include "lexiprec/report.hpp"
#include "lexiprec/stats.hpp"
#include "lexiprec/theory.hpp"

#endif  // LEXIPREC_LEXIPREC_HPP_
