import csv
import os
import sys

from models.curve_model import CSV_COLUMNS


class CSVWriter:
    def __init__(self, path):
        self.path = path

    def write(self, curve):
        """
        Write an MiCurve as CSV.
        CSV structure: l, f, mi_nats, mi_normalized, stderr, samples
        Floats use repr so every value reads back bit for bit.
        """
        if self.path == "-":
            self._write_rows(sys.stdout, curve)
            return

        parent = os.path.dirname(self.path)
        if parent:
            os.makedirs(parent, exist_ok=True)

        with open(self.path, "w", encoding="utf-8", newline="") as f:
            self._write_rows(f, curve)

    def _write_rows(self, stream, curve):
        writer = csv.writer(stream, lineterminator="\n")
        writer.writerow(CSV_COLUMNS)
        for point in curve.points:
            writer.writerow([
                point.l,
                repr(float(point.f)),
                repr(float(point.mi_nats)),
                repr(float(point.mi_normalized)),
                repr(float(point.stderr)),
                point.samples,
            ])
