#include "loadcorr/similarity_demo.hpp"

namespace loadcorr::similarity {

DemoResult similarity_demo(const DemoSettings& s) {
  DemoResult d{synth_sine(s.amplitude, s.frequency, 0.0, s.span, s.dt),
               {{{PerturbationKind::AmplitudeShift, s.amplitude_shift},
                 {PerturbationKind::AmplitudeStretch, s.amplitude_stretch},
                 {PerturbationKind::TimeShift, s.time_shift},
                 {PerturbationKind::TimeStretch, s.time_stretch}}},
               {},
               {},
               {}};
  const auto cfg = DtwConfig::band(s.dtw_window);
  for (std::size_t i = 0; i < d.perturbations.size(); ++i) {
    d.perturbed.push_back(apply_perturbation(d.base, d.perturbations[i]));
    for (Measure m : kAllMeasures) {
      d.raw[m][i] = evaluate(m, d.base.values(), d.perturbed.back().values(), cfg);
    }
  }
  for (const auto& [m, row] : d.raw) d.profile[m] = normalize_error_profile(row);
  return d;
}

}  // namespace loadcorr::similarity
