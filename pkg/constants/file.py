# --- BUNDLED SPECIFICATIONS ---
SPEC_DIR = "specs"

EGGTIMER_SPEC_FILE = "eggtimer.strom"
TODOMVC_LITE_SPEC_FILE = "todomvc_lite.strom"


# --- BUNDLED MODELS ---
MODEL_DIR = "models"

EGGTIMER_MODEL_FILE = "eggtimer.json"
EGGTIMER_MUT_STOP_MODEL_FILE = "eggtimer_mut_stop.json"
EGGTIMER_MUT_TICK_MODEL_FILE = "eggtimer_mut_tick.json"
TODOMVC_LITE_MODEL_FILE = "todomvc_lite.json"
TODOMVC_LITE_BUG7_MODEL_FILE = "todomvc_lite_bug7.json"
TODOMVC_LITE_BUG8_MODEL_FILE = "todomvc_lite_bug8.json"


# --- EXECUTOR ENDPOINTS ---
EXECUTOR_MODEL_PREFIX = "model:"
EXECUTOR_COMMAND_PREFIX = "cmd:"
EXECUTOR_TCP_PREFIX = "tcp:"


# --- OUTPUT FILES ---
SWEEP_CSV_COLUMNS = ["subscript", "detection_rate", "mean_actions"]
