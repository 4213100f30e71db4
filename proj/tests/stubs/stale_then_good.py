#!/usr/bin/env python3
"""Before every real answer, emits a response for a stale id the client never
sent (id - 1000). A correct client skips it and accepts the real one.
"""
import json
import sys


def main():
    init = sys.stdin.readline()
    if not init:
        return
    json.loads(init)
    sys.stdout.write(json.dumps({"ready": True}) + "\n")
    sys.stdout.flush()
    for line in sys.stdin:
        req = json.loads(line)
        stale = {"id": req["id"] - 1000, "f": -12345.0}
        good = {"id": req["id"], "f": sum(req["x"].values())}
        sys.stdout.write(json.dumps(stale) + "\n")
        sys.stdout.write(json.dumps(good) + "\n")
        sys.stdout.flush()


if __name__ == "__main__":
    main()
