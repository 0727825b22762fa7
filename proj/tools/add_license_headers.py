#!/usr/bin/env python3
# Copyright 2026 The fpplab Authors
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

"""Prepends the Apache-2.0 header to every source file in the repository.

Idempotent: files that already carry the header are left alone. vendor/,
examples/ and build directories are skipped.

Usage: add_license_headers.py [--check] [ROOT]
"""

import argparse
import os
import sys

NOTICE = """Copyright 2026 The fpplab Authors

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License."""

SKIP_DIRS = {"vendor", "examples", ".git", "__pycache__"}
C_STYLE = {".cpp", ".hpp", ".h", ".cc"}
HASH_STYLE = {".py", ".cmake"}


def comment_style(name):
    ext = os.path.splitext(name)[1]
    if ext in C_STYLE:
        return "//"
    if ext in HASH_STYLE or name == "CMakeLists.txt" or name.endswith(".cmake.in"):
        return "#"
    return None


def header(prefix):
    return "".join(f"{prefix} {line}".rstrip() + "\n" for line in NOTICE.splitlines()) + "\n"


def process(path, prefix, check):
    with open(path) as f:
        text = f.read()
    if "Copyright 2026 The fpplab Authors" in text.split("\n\n", 1)[0] or text.startswith(header(prefix)):
        return False
    if check:
        return True
    shebang = ""
    if text.startswith("#!"):
        shebang, _, text = text.partition("\n")
        shebang += "\n"
    with open(path, "w") as f:
        f.write(shebang + header(prefix) + text)
    return True


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--check", action="store_true", help="list files missing the header, change nothing")
    ap.add_argument("root", nargs="?", default=os.path.join(os.path.dirname(os.path.abspath(__file__)), ".."))
    args = ap.parse_args()
    changed = []
    for dirpath, dirnames, filenames in os.walk(args.root):
        dirnames[:] = sorted(d for d in dirnames if d not in SKIP_DIRS and not d.startswith("build"))
        for name in sorted(filenames):
            prefix = comment_style(name)
            if prefix and process(os.path.join(dirpath, name), prefix, args.check):
                changed.append(os.path.relpath(os.path.join(dirpath, name), args.root))
    for path in changed:
        print(("missing: " if args.check else "added: ") + path)
    return 1 if args.check and changed else 0


if __name__ == "__main__":
    sys.exit(main())
