"""
Test sessions: each run starts a fresh executor session, waits for the
initial event, then alternates between progressing the property over the
newest state and asking the executor for the next one.
"""

import logging
import random
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, List, Optional, Set, Tuple, Union

from checker.errors import ExecutorDied, ProtocolViolation, StuckNoEnabledActions
from checker.selection import ActDecision, select_action
from checker.state import (
    ActionPerformed,
    EventOccurred,
    InitialEvent,
    TimedOut,
    TraceEntry,
    with_happened,
)
from constants.defaults import (
    DEFAULT_HARD_CAP_FACTOR,
    DEFAULT_JOBS,
    DEFAULT_MAX_ACTIONS,
    DEFAULT_POLL_MS,
    DEFAULT_RECEIVE_TIMEOUT_S,
    DEFAULT_RUNS,
    FORMULA_NODE_CAP,
    FORMULA_SHOW_DEPTH,
    INITIAL_EVENT_ID,
    MAX_STATES_PER_ACTION,
    STUCK_WAIT_LIMIT,
)
from ltl.formula import Formula, GuardedFormula, show
from ltl.progression import Definitive, presumptive, progress, requires_next, step_forward
from ltl.verdict import Verdict
from protocol.errors import ConnectionClosed, DecodeError
from protocol.messages import Act, Acted, Descriptor, End, Event, Stale, Start, Timeout, Wait
from protocol.transport import Connection
from speclang.deps import analyze_deps
from speclang.elaborate import ActionSpec, CheckConfig, ElaboratedSpec
from speclang.values import fields_equal
from utils.errors import StromError

logger = logging.getLogger(__name__)

INCONCLUSIVE = "Inconclusive"

# Overall outcomes
PASS = "pass"
FAIL = "fail"
OUTCOME_INCONCLUSIVE = "inconclusive"

# Run notes
NOTE_HARD_CAP = "HardCapReached"
NOTE_STUCK = "StuckNoEnabledActions"

RunVerdict = Union[Verdict, str]


@dataclass(frozen=True)
class Budget:
    runs: int = DEFAULT_RUNS
    max_actions: int = DEFAULT_MAX_ACTIONS
    hard_cap: int = DEFAULT_MAX_ACTIONS * DEFAULT_HARD_CAP_FACTOR

    @classmethod
    def scaled(cls, runs: int, max_actions: int, hard_cap_factor: int = DEFAULT_HARD_CAP_FACTOR) -> "Budget":
        return cls(runs, max_actions, max_actions * hard_cap_factor)


@dataclass(frozen=True)
class RunResult:
    index: int
    seed: int
    verdict: RunVerdict
    trace: List[TraceEntry]
    actions_taken: int
    definitive_at: Optional[int] = None
    note: Optional[str] = None
    residual: Optional[str] = None

    @property
    def failed(self) -> bool:
        return isinstance(self.verdict, Verdict) and self.verdict.is_false

    @property
    def verdict_label(self) -> str:
        return self.verdict.label if isinstance(self.verdict, Verdict) else self.verdict


@dataclass(frozen=True)
class CheckResult:
    property: str
    seed: int
    dependencies: Tuple[str, ...]
    runs: List[RunResult] = field(default_factory=list)

    @property
    def overall(self) -> str:
        if any(run.failed for run in self.runs):
            return FAIL
        if any(run.verdict == INCONCLUSIVE for run in self.runs):
            return OUTCOME_INCONCLUSIVE

        return PASS


@dataclass
class _Outstanding:
    kind: str
    version: int
    action: Optional[ActionSpec] = None


class _Run:
    """
    A single run over one executor connection. The inbox is consumed in
    order; an Act is only ever outstanding once per version.
    """

    def __init__(
        self,
        spec: ElaboratedSpec,
        check: CheckConfig,
        formula: Formula,
        connection: Connection,
        dependencies: Tuple[str, ...],
        rng: random.Random,
        budget: Budget,
        poll_ms: int,
        stuck_limit: int,
        receive_timeout: float,
    ):
        self.spec = spec
        self.check = check
        self.formula = formula
        self.connection = connection
        self.dependencies = dependencies
        self.rng = rng
        self.budget = budget
        self.poll_ms = poll_ms
        self.stuck_limit = stuck_limit
        self.receive_timeout = receive_timeout
        self.trace: List[TraceEntry] = []
        self.actions_taken = 0
        self.outstanding: Optional[_Outstanding] = None
        self.pending_wait: Optional[Tuple[int, str]] = None
        self.fruitless_waits = 0
        self.sent_versions: Set[int] = set()
        self.stuck = False

    def execute(self) -> Tuple[RunVerdict, Optional[int], Optional[str], Optional[str]]:
        """
        Returns the verdict, the state index it became definitive at, a note,
        and the residual formula when the run ended without a definitive
        verdict.
        """
        self.connection.send(Start(self.dependencies))
        self._await_initial_event()
        formula = self.formula
        state_cap = self.budget.hard_cap * MAX_STATES_PER_ACTION
        while True:
            index = len(self.trace) - 1
            try:
                result = progress(formula, self.trace[-1].state, FORMULA_NODE_CAP)
            except StromError as e:
                e.state_index = index
                raise
            if isinstance(result, Definitive):
                return result.verdict, index, None, None
            guarded = result.formula
            demanding = requires_next(guarded)
            if not demanding and self.actions_taken >= self.budget.max_actions:
                return _undecided(guarded, demanding, None)
            if self.actions_taken >= self.budget.hard_cap or index >= state_cap:
                return _undecided(guarded, demanding, NOTE_HARD_CAP)
            if self.stuck:
                return _undecided(guarded, demanding, NOTE_STUCK)
            self.trace.append(self._next_entry())
            formula = step_forward(guarded)

    def _await_initial_event(self) -> None:
        while True:
            msg = self._receive()
            if isinstance(msg, Event) and msg.event.id == INITIAL_EVENT_ID:
                self._check_version(msg.version)
                name = f"{INITIAL_EVENT_ID}?"
                self.trace.append(with_happened(msg.state, InitialEvent(name, msg.event)))
                return
            if not isinstance(msg, Event):
                raise ProtocolViolation(f"expected the {INITIAL_EVENT_ID} event, got {type(msg).__name__}")
            logger.debug("Ignoring %s before the initial event", msg.event.label)

    def _check_version(self, version: int) -> None:
        if version != len(self.trace) + 1:
            raise ProtocolViolation(f"state version {version} does not follow trace length {len(self.trace)}")

    def _dispatch(self) -> None:
        version = len(self.trace)
        if self.pending_wait is not None:
            time, name = self.pending_wait
            self.pending_wait = None
            self.connection.send(Wait(time, version))
            self.outstanding = _Outstanding("timeout", version, self.spec.lookup(name))
            return
        decision = select_action(self.trace[-1].state, self.spec.actions, self.check.allowed, self.rng, self.poll_ms)
        if isinstance(decision, ActDecision):
            action = decision.action
            if version in self.sent_versions:
                raise ProtocolViolation(f"a second Act for version {version}")
            self.sent_versions.add(version)
            self.connection.send(Act(Descriptor(action.descriptor_id, action.args), version, action.timeout))
            self.outstanding = _Outstanding("act", version, action)
        else:
            self.connection.send(Wait(decision.time, version))
            self.outstanding = _Outstanding("poll", version)

    def _event_entry(self, msg: Event) -> TraceEntry:
        names = tuple(
            sorted(name for name, event in self.spec.events.items() if _event_matches(event, msg.event))
        )
        timeouts = [
            (self.spec.events[name].timeout, name) for name in names if self.spec.events[name].timeout is not None
        ]
        if timeouts:
            self.pending_wait = max(timeouts)

        return with_happened(msg.state, EventOccurred(names or (f"{msg.event.id}?",), msg.event))

    def _next_entry(self) -> TraceEntry:
        while True:
            if self.outstanding is None:
                self._dispatch()
            msg = self._receive()
            if isinstance(msg, Stale):
                if self.outstanding is not None and self.outstanding.version < msg.version:
                    logger.debug("Stale reply at version %d, deciding again", msg.version)
                    self.outstanding = None
                else:
                    logger.debug("Late Stale reply at version %d for a superseded request", msg.version)
                continue
            self._check_version(msg.version)
            outstanding = self.outstanding
            if isinstance(msg, Acted):
                if outstanding is None or outstanding.kind != "act":
                    raise ProtocolViolation("Acted without an outstanding Act")
                action = outstanding.action
                self.actions_taken += 1
                self.fruitless_waits = 0
                self.outstanding = _Outstanding("timeout", msg.version, action) if action.timeout is not None else None
                descriptor = Descriptor(action.descriptor_id, action.args)
                return with_happened(msg.state, ActionPerformed(action.name, descriptor))
            if isinstance(msg, Timeout):
                if outstanding is None or outstanding.kind == "act":
                    raise ProtocolViolation("Timeout without a pending wait")
                self.outstanding = None
                attributed = outstanding.action.name if outstanding.action is not None else None
                entry = with_happened(msg.state, TimedOut(attributed))
                self._count_wait(outstanding, entry)
                return entry
            if isinstance(msg, Event):
                if outstanding is not None and outstanding.kind != "act":
                    self.outstanding = None
                self.fruitless_waits = 0
                return self._event_entry(msg)

            raise ProtocolViolation(f"unexpected message {type(msg).__name__}")

    def _count_wait(self, outstanding: _Outstanding, entry: TraceEntry) -> None:
        unchanged = fields_equal(entry.state.fields, self.trace[-1].state.fields)
        if outstanding.kind == "poll" and unchanged:
            self.fruitless_waits += 1
        else:
            self.fruitless_waits = 0
        if self.fruitless_waits >= self.stuck_limit:
            logger.info("Run stuck: %s", StuckNoEnabledActions(self.fruitless_waits))
            self.stuck = True

    def _receive(self):
        try:
            msg = self.connection.receive(self.receive_timeout)
        except ConnectionClosed as e:
            raise ExecutorDied(e.message) from e
        except DecodeError as e:
            raise ProtocolViolation(e.message) from e
        if msg is None:
            raise ExecutorDied("no reply from the executor")
        logger.debug("Received %s", msg)

        return msg


def _undecided(
    guarded: GuardedFormula, demanding: bool, note: Optional[str]
) -> Tuple[RunVerdict, Optional[int], Optional[str], Optional[str]]:
    verdict = INCONCLUSIVE if demanding else presumptive(guarded)

    return verdict, None, note, show(guarded, FORMULA_SHOW_DEPTH)


def _event_matches(event: ActionSpec, descriptor: Descriptor) -> bool:
    if event.descriptor_id != descriptor.id or len(event.args) > len(descriptor.args):
        return False

    return all(_arg_matches(expected, actual) for expected, actual in zip(event.args, descriptor.args))


def _arg_matches(expected, actual) -> bool:
    if expected == actual:
        return True

    return isinstance(expected, str) and isinstance(actual, str) and actual.startswith(expected + ".")


def derive_seeds(seed: int, runs: int) -> List[int]:
    rng = random.Random(seed)

    return [rng.getrandbits(63) for _ in range(runs)]


def run_once(
    spec: ElaboratedSpec,
    check: CheckConfig,
    property_name: str,
    connection: Connection,
    seed: int,
    budget: Budget,
    index: int = 0,
    poll_ms: int = DEFAULT_POLL_MS,
    stuck_limit: int = STUCK_WAIT_LIMIT,
    receive_timeout: float = DEFAULT_RECEIVE_TIMEOUT_S,
) -> RunResult:
    dependencies = tuple(sorted(analyze_deps(spec, check)))
    run = _Run(
        spec,
        check,
        spec.properties[property_name],
        connection,
        dependencies,
        random.Random(seed),
        budget,
        poll_ms,
        stuck_limit,
        receive_timeout,
    )
    try:
        verdict, definitive_at, note, residual = run.execute()
    finally:
        try:
            connection.send(End())
        except (StromError, OSError):
            logger.debug("Could not send End to the executor")
        connection.close()
    label = verdict.label if isinstance(verdict, Verdict) else verdict
    logger.info("Run %d of %s: %s after %d action(s)", index, property_name, label, run.actions_taken)
    if residual is not None:
        logger.debug("Run %d residual formula: %s", index, residual)

    return RunResult(index, seed, verdict, run.trace, run.actions_taken, definitive_at, note, residual)


def run_check(
    spec: ElaboratedSpec,
    check: CheckConfig,
    property_name: str,
    connect: Callable[[], Connection],
    seed: int,
    budget: Budget = Budget(),
    jobs: int = DEFAULT_JOBS,
    fail_fast: bool = False,
    poll_ms: int = DEFAULT_POLL_MS,
    stuck_limit: int = STUCK_WAIT_LIMIT,
) -> CheckResult:
    """
    Runs one property `budget.runs` times, each against a fresh executor
    connection and with its own seed derived from `seed`.
    """
    seeds = derive_seeds(seed, budget.runs)
    dependencies = tuple(sorted(analyze_deps(spec, check)))
    logger.info("Checking %s with %d run(s), dependencies %s", property_name, budget.runs, list(dependencies))

    def _one(index: int) -> RunResult:
        return run_once(
            spec, check, property_name, connect(), seeds[index], budget, index, poll_ms, stuck_limit
        )

    runs: List[RunResult] = []
    if jobs <= 1:
        for index in range(budget.runs):
            result = _one(index)
            runs.append(result)
            if fail_fast and result.failed:
                break
    else:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            futures = [pool.submit(_one, index) for index in range(budget.runs)]
            for future in futures:
                result = future.result()
                runs.append(result)
                if fail_fast and result.failed:
                    for pending in futures:
                        pending.cancel()
                    break
    runs.sort(key=lambda run: run.index)

    return CheckResult(property_name, seed, dependencies, runs)
