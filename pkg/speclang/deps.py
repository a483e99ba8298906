from typing import Set

from ltl.formula import fields_read
from speclang.elaborate import CheckConfig, ElaboratedSpec
from speclang.expr import fields_of


def allowed_names(spec: ElaboratedSpec, check: CheckConfig) -> Set[str]:
    if check.allowed is None:
        return set(spec.actions) | set(spec.events)

    return set(check.allowed)


def analyze_deps(spec: ElaboratedSpec, check: CheckConfig) -> Set[str]:
    """
    Every state field a check can read: through its properties, and through
    the guards of the actions and events it is allowed to use. Both branches
    of conditionals count.
    """
    found: Set[str] = set()
    for name in check.properties:
        found |= fields_read(spec.properties[name])
    for name in allowed_names(spec, check):
        action = spec.lookup(name)
        if action is not None and action.guard is not None:
            found |= fields_of(action.guard)

    return found
