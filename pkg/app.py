import sys
from typing import List, Optional

from utils.cli_app import run_cli


class StromApp:
    def __init__(self, argv: Optional[List[str]] = None):
        self.argv = argv

    def run(self) -> int:
        return run_cli(self.argv)


if __name__ == "__main__":
    app = StromApp()

    sys.exit(app.run())
