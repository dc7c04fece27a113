"""
Regenerate schemas/report.schema.json from the pydantic Report model.

The pydantic models in schemas/src/schemas/curvefrob_schemas.py are the source of truth
for the JSON the CLI writes. Run this after editing them:

  uv run python -m curvefrob.regenerate_schema

Then run the tests; test_cli checks emitted reports against the shipped document.
"""

from __future__ import annotations

import json
import sys
from pathlib import Path

from schemas import Report

REPO_ROOT = Path(__file__).resolve().parent.parent.parent.parent
OUTPUT = REPO_ROOT / "schemas" / "report.schema.json"


def report_schema() -> dict:
    return Report.model_json_schema(by_alias=True)


def main() -> int:
    if not OUTPUT.parent.exists():
        print(f"Schemas directory not found: {OUTPUT.parent}", file=sys.stderr)
        return 1
    OUTPUT.write_text(json.dumps(report_schema(), indent=2, sort_keys=True) + "\n")
    print(f"Regenerated {OUTPUT} from schemas.Report")
    return 0


if __name__ == "__main__":
    sys.exit(main())
