// Copyright 2026 The Sibyl Authors.
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

#ifndef SIBYL_SIBYL_HPP_
#define SIBYL_SIBYL_HPP_

#include "sibyl/adaptive.hpp"
#include "sibyl/error.hpp"
#include "sibyl/eval.hpp"
#include "sibyl/http_client.hpp"
#include "sibyl/image_io.hpp"
#include "sibyl/label.hpp"
#include "sibyl/lexicon.hpp"
#include "sibyl/mixtures.hpp"
#include "sibyl/parallel.hpp"
#include "sibyl/pipeline.hpp"
#include "sibyl/random.hpp"
#include "sibyl/registry.hpp"
#include "sibyl/sample.hpp"
#include "sibyl/text.hpp"
#include "sibyl/transforms.hpp"
#include "sibyl/unicode.hpp"

#endif  // SIBYL_SIBYL_HPP_
