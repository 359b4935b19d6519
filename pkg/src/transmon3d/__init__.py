"""Transmon qubits in 3D cavities: spectra, dispersive coupling, coherence
dynamics under frequency noise, quasiparticle temperature dependence and fits."""

__version__ = "0.1.0"

from .errors import (  # noqa: E402
    FitError, IllConditionedError, InvalidParameterError, NoSolutionError, NumericFailureError,
    ParseError, ResonantRegimeError, TransmonError, ValidationError,
)
from .spectrum import TransmonParams, EnergySpectrum, eigenlevels, approx_f01, charge_dispersion  # noqa: E402
from .cavity import CavityMode, DispersiveSystem, dispersive_shift, dressed_spectrum, purcell_rate  # noqa: E402
from .noise import White, OrnsteinUhlenbeck, StaticGaussian, Telegraph, coherence_function, mc_coherence  # noqa: E402
from .quasiparticles import QuasiparticleModel, t1_vs_temperature  # noqa: E402
from .dynamics import simulate_t1, simulate_ramsey, simulate_echo, single_shot_readout  # noqa: E402
from .fitting import fit_decay, fit_ramsey, discriminate_envelope, fit_gap, detect_jumps  # noqa: E402
from .kernels import BACKEND  # noqa: E402
