// Copyright 2026 The rawbench Authors. All Rights Reserved.
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

#ifndef RAWBENCH_RAWBENCH_HPP_
#define RAWBENCH_RAWBENCH_HPP_

#include "rawbench/attacks/apply.hpp"
#include "rawbench/audio_clip.hpp"
#include "rawbench/harness/aggregate.hpp"
#include "rawbench/harness/config.hpp"
#include "rawbench/harness/execute.hpp"
#include "rawbench/harness/manifest.hpp"
#include "rawbench/harness/plan.hpp"
#include "rawbench/harness/record.hpp"
#include "rawbench/harness/report.hpp"
#include "rawbench/harness/selftest.hpp"
#include "rawbench/metrics.hpp"
#include "rawbench/resample.hpp"
#include "rawbench/wav.hpp"
#include "rawbench/watermark.hpp"

#endif  // RAWBENCH_RAWBENCH_HPP_
