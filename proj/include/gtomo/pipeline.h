// Copyright 2026 The gtomo Authors
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

#ifndef GTOMO_PIPELINE_H
#define GTOMO_PIPELINE_H

#include <vector>

#include "gtomo/ensemble.h"
#include "gtomo/inverse.h"
#include "gtomo/measurement_map.h"

namespace gtomo {

struct PipelineOptions {
    InverseMethod method = InverseMethod::Pseudo;
    double delta = 1e-3;
    double w_floor = 1e-8;
    bool keep_blocks = true;
    MapOptions map;
};

/// Ensemble, propagators, F, W and the chosen inverse, built together.
struct Pipeline {
    QuenchEnsemble ensemble;
    std::vector<ComplexMatrix> propagators;
    CorrelationMatrix ancillas;
    MeasurementMap map;
    NoiseMatrix noise;
    InverseBundle bundle;
};

/// Ancillas default to vacuum.
Pipeline build_pipeline(QuenchEnsemble ensemble, const PipelineOptions &options, const CorrelationMatrix *c_anc = nullptr);

}  // namespace gtomo

#endif
