"""Joint receive-beamforming and surface phase-shift optimization for a
line-of-sight directional-modulation link with artificial noise."""

__version__ = "0.1.0"

from .channel import (ArraySpec, ChannelSet, LinkAngles, ScenarioAngles,
                      ScenarioConfig, build_channels, default_angles,
                      los_channel, path_loss, steering_vector)
from .errors import (ConfigError, ContractError, DegenerateError,
                     DimensionError, IrsdmError, ZfInfeasibleError)
from .metrics import (BeamformingSolution, Gain2x2, RateReport,
                      effective_channel, eve_beamformers, gain_2x2, rate_bob,
                      rate_eve, receive_power_sum, rps_objective, secrecy_rate)
from .opt_gao import (ConvergenceTrace, GaoSettings, gao_theta_terms,
                      gao_update_rbf, gao_update_theta, run_gao)
from .opt_zf import (ZfSettings, null_space_projector, run_zf, zf_update_rbf,
                     zf_update_theta)
from .precoding import (InitialRbf, TransmitDesign, an_projection,
                        build_transmit_design, initial_rbf, stack_cm_channel,
                        transmit_beamformers)
from .experiments import (SCHEMES, SchemeResult, SweepRow, SweepSpec,
                          flops_gao, flops_zf, no_irs_channels,
                          random_phase_psm, run_scheme, run_sweep,
                          solve_gao, solve_no_irs, solve_random_phase,
                          solve_zf)
