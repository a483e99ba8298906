# --- RUN BUDGET ---
DEFAULT_RUNS = 10
DEFAULT_MAX_ACTIONS = 100
DEFAULT_HARD_CAP_FACTOR = 10
DEFAULT_JOBS = 1

# Unsubscripted temporal operators take this value unless overridden.
DEFAULT_SUBSCRIPT = 100


# --- CHECKER ---
DEFAULT_POLL_MS = 100

# Consecutive Waits without a state change before a run is declared stuck.
STUCK_WAIT_LIMIT = 10

# Event and timeout states allowed per hard-capped action before a run is cut off.
MAX_STATES_PER_ACTION = 10

INITIAL_EVENT_ID = "loaded"

# Seconds to wait for an external executor before declaring it dead.
DEFAULT_RECEIVE_TIMEOUT_S = 30


# --- FORMULA ENGINE ---
FORMULA_NODE_CAP = 100_000

# Nesting shown when a formula is printed in an error or a report.
FORMULA_SHOW_DEPTH = 6


# --- SWEEP ---
DEFAULT_SWEEP_SUBSCRIPTS = [1, 10, 50]
DEFAULT_SWEEP_RUNS_PER = 50
DEFAULT_SWEEP_MAX_ACTIONS = 1


# --- OUTPUT ---
FORMAT_HUMAN = "human"
FORMAT_MACHINE = "machine"
REPORT_FORMATS = [FORMAT_HUMAN, FORMAT_MACHINE]
