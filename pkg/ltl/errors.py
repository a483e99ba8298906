from utils.errors import StromError


class AtomNotBoolean(StromError):
    def __init__(self, atom: str, value_type: str):
        super().__init__(f"atom {atom} evaluated to a {value_type}, not a boolean")
        self.atom = atom
        self.value_type = value_type


class FormulaBlowUp(StromError):
    def __init__(self, nodes: int, cap: int, excerpt: str = ""):
        message = f"formula grew to {nodes} nodes, over the cap of {cap}"
        super().__init__(f"{message}: {excerpt}" if excerpt else message)
        self.nodes = nodes
        self.cap = cap
        self.excerpt = excerpt
