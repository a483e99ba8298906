# --- CHECKER -> EXECUTOR ---
TAG_START = "Start"
TAG_ACT = "Act"
TAG_WAIT = "Wait"
TAG_END = "End"

# --- EXECUTOR -> CHECKER ---
TAG_EVENT = "Event"
TAG_ACTED = "Acted"
TAG_TIMEOUT = "Timeout"
TAG_STALE = "Stale"

# Reserved state key holding the descriptor ids that produced a state.
HAPPENED_KEY = "happened"

# Event id emitted by the model executor for subject-bearing events.
CHANGED_EVENT_ID = "changed"
NOOP_ACTION_ID = "noop"
