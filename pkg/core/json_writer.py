import json
import os
import sys


class JSONWriter:
    def __init__(self, path):
        self.path = path

    def write(self, data):
        if hasattr(data, "model_dump"):
            data = data.model_dump(mode="json")

        if self.path == "-":
            json.dump(data, sys.stdout, indent=2, sort_keys=True)
            sys.stdout.write("\n")
            return

        # Ensure parent directory exists
        parent = os.path.dirname(self.path)
        if parent:
            os.makedirs(parent, exist_ok=True)

        with open(self.path, "w", encoding="utf-8", newline="\n") as f:
            json.dump(data, f, indent=2, sort_keys=True)
            f.write("\n")
