#pragma once

#include <optional>
#include <string_view>
#include <vector>

namespace lieep::harness {

struct Preset {
  std::string_view name;
  std::string_view description;
  std::string_view text;  // INI document accepted by parse_config
};

inline const std::vector<Preset>& presets() {
  static const std::vector<Preset> all{
      {"fig1a_wind_conservative", "wind oscillator energy, theta = pi/2, h = 1/20, T = 1000",
       R"([wind_conservative]
problem = wind
r = 20
theta = pi/2
a = 1/2
methods = lieep, eavf
h = 1/20
T = 1000
channels = polarized_energy, discrete_energy
repetitions = 3
)"},
      {"fig1b_wind_dissipative", "wind oscillator Lyapunov functions, theta = pi/2 - 1e-4, h = 1/20, T = 1000",
       R"([wind_dissipative]
problem = wind
r = 20
theta = pi/2 - 1e-4
a = 1/2
methods = lieep, eavf
h = 1/20
T = 1000
channels = polarized_energy, discrete_energy
repetitions = 3
)"},
      {"fig2_wind_order_conservative",
       "wind oscillator order and cost, theta = pi/2, h = 1/10 * 2^-i, T = 1000, a in {1/2, 0, 1/4, 1}",
       R"([wind_order_a0.5]
problem = wind
theta = pi/2
a = 1/2
methods = lieep, eavf
h = 1/10, 1/20, 1/40, 1/80, 1/160, 1/320
T = 1000
reference = crk6
ref_divisor = 16
write_traces = false
repetitions = 3

[wind_order_a0]
problem = wind
theta = pi/2
a = 0
methods = lieep
h = 1/10, 1/20, 1/40, 1/80, 1/160, 1/320
T = 1000
reference = crk6
write_traces = false
repetitions = 1

[wind_order_a0.25]
problem = wind
theta = pi/2
a = 1/4
methods = lieep
h = 1/10, 1/20, 1/40, 1/80, 1/160, 1/320
T = 1000
reference = crk6
write_traces = false
repetitions = 1

[wind_order_a1]
problem = wind
theta = pi/2
a = 1
methods = lieep
h = 1/10, 1/20, 1/40, 1/80, 1/160, 1/320
T = 1000
reference = crk6
write_traces = false
repetitions = 1
)"},
      {"fig2_wind_order_dissipative", "wind oscillator order and cost, theta = pi/2 - 1e-4, h = 1/10 * 2^-i, T = 1000",
       R"([wind_order_dissipative]
problem = wind
theta = pi/2 - 1e-4
a = 1/2
methods = lieep, eavf
h = 1/10, 1/20, 1/40, 1/80, 1/160, 1/320
T = 1000
reference = crk6
write_traces = false
repetitions = 3
)"},
      {"fig3_fpu_energy", "FPU polarized energy under LIEEP for several damping settings, h = 0.025, T = 500",
       R"([fpu_energy_beta0_gamma0]
problem = fpu
beta = 0
gamma = 0
methods = lieep
h = 0.025
T = 500
trace_stride = 40
repetitions = 1

[fpu_energy_beta0.5]
problem = fpu
beta = 0.5
gamma = 0
methods = lieep
h = 0.025
T = 500
trace_stride = 40
repetitions = 1

[fpu_energy_beta2]
problem = fpu
beta = 2
gamma = 0
methods = lieep
h = 0.025
T = 500
trace_stride = 40
repetitions = 1

[fpu_energy_gamma0.005]
problem = fpu
beta = 0
gamma = 0.005
methods = lieep
h = 0.025
T = 500
trace_stride = 40
repetitions = 1
)"},
      {"fig4_fpu_order_gamma", "FPU order and cost, gamma = 0.005, beta = 0, h = 2^-i, T = 100",
       R"([fpu_order_gamma]
problem = fpu
beta = 0
gamma = 0.005
methods = lieep, eavf
h = 2^-1, 2^-2, 2^-3, 2^-4, 2^-5
T = 100
reference = crk6
ref_divisor = 16
write_traces = false
repetitions = 3
)"},
      {"fig5_fpu_order_beta", "FPU order and cost, gamma = 0, beta = 2, h = 2^-i, T = 100",
       R"([fpu_order_beta]
problem = fpu
beta = 2
gamma = 0
methods = lieep, eavf
h = 2^-1, 2^-2, 2^-3, 2^-4, 2^-5
T = 100
reference = crk6
ref_divisor = 16
write_traces = false
repetitions = 3
)"},
      {"fig6_fpu_solution", "FPU displacement fields under LIEEP, h = 0.025, T = 500",
       R"([fpu_solution_beta0_gamma0]
problem = fpu
beta = 0
gamma = 0
methods = lieep
h = 0.025
T = 500
channels = polarized_energy
trace_stride = 40
repetitions = 1

[fpu_solution_gamma0.005]
problem = fpu
beta = 0
gamma = 0.005
methods = lieep
h = 0.025
T = 500
channels = polarized_energy
trace_stride = 40
repetitions = 1

[fpu_solution_beta2]
problem = fpu
beta = 2
gamma = 0
methods = lieep
h = 0.025
T = 500
channels = polarized_energy
trace_stride = 40
repetitions = 1
)"},
      {"fig7_pendulum", "truncated pendulum energies (h = 1, T = 1000) and phase portrait (h = 0.3)",
       R"([pendulum_energy]
problem = pendulum
methods = lieep
h = 1
T = 1000
channels = polarized_energy, discrete_energy
repetitions = 1

[pendulum_solution]
problem = pendulum
methods = lieep
h = 0.3
T = 300
channels = polarized_energy
repetitions = 1
)"},
  };
  return all;
}

inline std::optional<Preset> find_preset(std::string_view name) {
  for (const auto& p : presets())
    if (p.name == name) return p;
  return std::nullopt;
}

}  // namespace lieep::harness
