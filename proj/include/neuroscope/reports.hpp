// Copyright 2026 The Neuroscope Authors
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

// Text renderings behind the command-line tools.

#ifndef NEUROSCOPE_REPORTS_HPP_
#define NEUROSCOPE_REPORTS_HPP_

#include <string>
#include <string_view>

#include "neuroscope/activation_store.hpp"
#include "neuroscope/projection.hpp"
#include "neuroscope/sampler.hpp"

namespace neuroscope {

// JSON summary: counts, classes, per-node shapes, warnings.
std::string bundle_summary(const Bundle& bundle);

// Header "subset,members,n0,...,n{k-1}" then one line per default class
// subset. Empty subsets leave the value cells blank.
std::string aggregate_csv(const Bundle& bundle, std::string_view node);

// Header "instance,x,y" then one line per sampled instance.
std::string projection_csv(const ProjectionResult& result);

}  // namespace neuroscope

#endif  // NEUROSCOPE_REPORTS_HPP_
