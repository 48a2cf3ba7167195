# validation tolerances
HERMITIAN_TOL = 1e-12
TRACE_TOL = 1e-10
PSD_TOL = 1e-10
PULSE_NORM_TOL = 1e-10
# pulses are truncated once the remaining norm drops below this
PULSE_TAIL_EPS = 1e-12

MAX_DIMENSION = 64

# extra time (in units of 1/Gamma) appended to the pulse horizon for improper integrals
DECAY_HORIZON = 40.0

# default number of records an enumeration may produce
ENUMERATION_BUDGET = 50_000_000

THREADS_ENV = "PHOTONQ_THREADS"
# collision unitaries act on C^2 x C^2 x C^d
MAX_INTERACTION_DIMENSION = 4 * MAX_DIMENSION
LOG_LEVEL_ENV = "PHOTONQ_LOG_LEVEL"
