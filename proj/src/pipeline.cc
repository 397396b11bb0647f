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

#include "gtomo/pipeline.h"

#include "gtomo/errors.h"

namespace gtomo {

Pipeline build_pipeline(QuenchEnsemble ensemble, const PipelineOptions &options, const CorrelationMatrix *c_anc) {
    ensemble.validate();
    std::size_t need = map_memory_estimate(ensemble);
    if (need > options.map.memory_cap_bytes) {
        throw ResourceError("measurement map needs " + std::to_string(need) +
                            " bytes, above the configured cap; use the truncated local map instead");
    }
    Pipeline p;
    p.ensemble = std::move(ensemble);
    p.ancillas = c_anc ? *c_anc : empty_ancillas(p.ensemble);
    p.propagators = member_propagators(p.ensemble);
    p.map = stack_forward(p.ensemble, p.propagators, p.ancillas, options.map);
    p.noise = noise_matrix(p.ensemble, p.propagators, p.ancillas);
    InverseOptions inv{options.w_floor, options.keep_blocks};
    if (options.method == InverseMethod::Optimal) {
        p.bundle = optimal_inverse(p.map, p.noise, inv);
    } else {
        p.bundle = pseudo_inverse(p.map, options.delta, &p.noise, inv);
    }
    return p;
}

}  // namespace gtomo
