#!/usr/bin/env python3
"""Misbehaving evaluator, mode chosen by argv[1]:

  garbage    - answers requests with a non-JSON line
  no_f       - answers with JSON that has the right id but no f/error field
  string_f   - answers with f as a string
  nonfinite  - answers with f = 1e999 (overflows to infinity on parse)
  bad_ready  - handshake reply is {"ready": false}
  init_junk  - handshake reply is not JSON
"""
import json
import sys

mode = sys.argv[1] if len(sys.argv) > 1 else "garbage"


def main():
    init = sys.stdin.readline()
    if not init:
        return
    json.loads(init)
    if mode == "bad_ready":
        sys.stdout.write(json.dumps({"ready": False}) + "\n")
    elif mode == "init_junk":
        sys.stdout.write("hello there\n")
    else:
        sys.stdout.write(json.dumps({"ready": True}) + "\n")
    sys.stdout.flush()
    for line in sys.stdin:
        req = json.loads(line)
        if mode == "garbage":
            sys.stdout.write("{not json at all\n")
        elif mode == "no_f":
            sys.stdout.write(json.dumps({"id": req["id"]}) + "\n")
        elif mode == "string_f":
            sys.stdout.write(json.dumps({"id": req["id"], "f": "small"}) + "\n")
        elif mode == "nonfinite":
            sys.stdout.write('{"id": %d, "f": 1e999}\n' % req["id"])
        else:
            sys.stdout.write(json.dumps({"id": req["id"], "f": 0.0}) + "\n")
        sys.stdout.flush()


if __name__ == "__main__":
    main()
