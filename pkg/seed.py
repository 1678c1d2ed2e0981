# ---
# File: seed.py
# Purpose: Write the synthetic SBM dataset (edges, features, labels) and a
#          run.json pointing the `sbm` preset at it
# ---

import sys
from pathlib import Path

from ctgc.main import configure_logging
from ctgc.pipeline import PipelineService


def main(directory: Path = Path("data/sbm"), seed: int = 0) -> None:
    configure_logging()
    config = PipelineService.fixture(directory, seed)
    print(f"SBM fixture ready: {config}")
    print(f"Run it with: python -m ctgc.main pipeline --config {config}")


if __name__ == "__main__":
    target = Path(sys.argv[1]) if len(sys.argv) > 1 else Path("data/sbm")
    main(target)
