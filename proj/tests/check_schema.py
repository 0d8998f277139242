"""Validate a report file against a JSON schema."""
import json
import sys

import jsonschema


def main() -> int:
    schema_path, report_path = sys.argv[1], sys.argv[2]
    with open(schema_path, encoding="utf-8") as f:
        schema = json.load(f)
    with open(report_path, encoding="utf-8") as f:
        report = json.load(f)
    jsonschema.validate(report, schema)
    print(f"{report_path}: valid against {schema_path}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
