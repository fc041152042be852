"""Emit the validation ranges as JSON for the web UI build.

The UI's form validation must agree exactly with server-side validation, so
its constants file is generated from here rather than maintained by hand:

    python3 -m balancelab.export_ranges > frontend/src/ranges.json
"""

import json
import sys

from .datagen import CONFIG_RANGES
from .service import DEFAULT_REPLICATE_CAP


def ranges_payload() -> dict:
    return {"fields": CONFIG_RANGES, "replicate_cap": DEFAULT_REPLICATE_CAP}


def main() -> None:
    json.dump(ranges_payload(), sys.stdout, indent=2, sort_keys=True)
    sys.stdout.write("\n")


if __name__ == "__main__":
    main()
