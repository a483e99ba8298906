import logging
from typing import List, Optional, Tuple

from constants.defaults import DEFAULT_SUBSCRIPT
from speclang.elaborate import ElaboratedSpec, elaborate
from speclang.parser import parse
from speclang.syntax import TopLevel
from speclang.typecheck import typecheck
from utils.io import read_text

logger = logging.getLogger(__name__)


def load_program(path: str) -> List[TopLevel]:
    program = parse(read_text(path), path)
    typecheck(program)

    return program


def load_spec(path: str, default_subscript: Optional[int] = None) -> Tuple[List[TopLevel], ElaboratedSpec]:
    """
    Reads, parses, typechecks and elaborates a `.strom` file.
    """
    program = load_program(path)
    subscript = DEFAULT_SUBSCRIPT if default_subscript is None else default_subscript
    spec = elaborate(program, subscript)
    logger.info("loaded %s: %d check statement(s)", path, len(spec.checks))

    return program, spec
