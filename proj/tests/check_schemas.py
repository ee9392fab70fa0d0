# Copyright 2026 The Dual-AEB Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Checks the published schemas and validates the bundled scenarios."""

import json
import pathlib
import sys

import jsonschema


def main(root: pathlib.Path) -> int:
    schemas = {p.name: json.loads(p.read_text()) for p in (root / "schemas").glob("*.json")}
    for schema in schemas.values():
        jsonschema.Draft202012Validator.check_schema(schema)
    validator = jsonschema.Draft202012Validator(schemas["scenario.schema.json"])
    failures = 0
    for path in sorted((root / "scenarios").glob("*.json")):
        for error in validator.iter_errors(json.loads(path.read_text())):
            failures += 1
            print(f"{path.name}: {'.'.join(map(str, error.path))}: {error.message}")
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main(pathlib.Path(sys.argv[1])))
