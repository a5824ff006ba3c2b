"""Text formats: channel files, solver and decoder trace CSVs, toy-instance files.

Channel file::

    # comments start with '#'
    2 3
    0.7 0.2 0.1
    0.1 0.2 0.7

The header gives ``inputs outputs``; each following line is the output
distribution of one input and must sum to 1 within 1e-9.
"""

import csv
import io

import numpy as np

from .channel import STOCHASTIC_TOL, channel_from_rows
from .exceptions import ProxPointError

FLOAT_FMT = "{:.17g}"

CAPACITY_TRACE_HEADER = ["iter", "mutual_info_nats", "upper_bound_nats", "beta", "delta"]
DECODER_TRACE_HEADER = ["iter", "J_theta_m", "J_theta_c", "mu_m", "mu_c", "max_llr_delta"]


class FormatError(ProxPointError):
    """Malformed input file; ``line`` is 1-based (0 when not tied to a line)."""

    def __init__(self, message, line=0):
        self.line = line
        super().__init__(f"line {line}: {message}" if line else message)


def _content_lines(text):
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if line and not line.startswith("#"):
            yield lineno, line


def parse_channel(text, tol=STOCHASTIC_TOL):
    lines = list(_content_lines(text))
    if not lines:
        raise FormatError("empty channel file")
    lineno, header = lines[0]
    try:
        n_in, n_out = (int(tok) for tok in header.split())
    except ValueError:
        raise FormatError("header must be two integers 'inputs outputs'", lineno) from None
    if n_in < 1 or n_out < 1:
        raise FormatError("alphabet sizes must be positive", lineno)
    body = lines[1:]
    if len(body) != n_in:
        raise FormatError(f"expected {n_in} rows, found {len(body)}", body[-1][0] if body else lineno)

    rows = []
    for lineno, line in body:
        try:
            row = [float(tok) for tok in line.split()]
        except ValueError:
            raise FormatError("non-numeric entry", lineno) from None
        if len(row) != n_out:
            raise FormatError(f"expected {n_out} values, found {len(row)}", lineno)
        if any(not np.isfinite(v) or v < 0 for v in row):
            raise FormatError("probabilities must be finite and non-negative", lineno)
        total = sum(row)
        if abs(total - 1.0) > tol:
            raise FormatError(f"row sums to {total:.17g}, not 1", lineno)
        rows.append(row)
    return channel_from_rows(rows, tol=tol)


def read_channel(path):
    with open(path, encoding="utf-8") as fh:
        return parse_channel(fh.read())


def format_channel(ch, comment=None):
    out = io.StringIO()
    if comment:
        for line in comment.splitlines():
            out.write(f"# {line}\n")
    out.write(f"{ch.input_size} {ch.output_size}\n")
    for row in ch.rows:
        out.write(" ".join(FLOAT_FMT.format(v) for v in row) + "\n")
    return out.getvalue()


def write_channel(path, ch, comment=None):
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(format_channel(ch, comment))


def _write_csv(path, header, rows):
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([row[0]] + [FLOAT_FMT.format(v) for v in row[1:]])


def write_capacity_trace(path, trace):
    rows = [(r.k, r.mutual_info_nats, r.upper_bound_nats, r.beta_used, r.delta) for r in trace]
    _write_csv(path, CAPACITY_TRACE_HEADER, rows)


def write_decoder_trace(path, trace):
    rows = [(r.k, r.J_theta_m, r.J_theta_c, r.mu_m, r.mu_c, r.max_llr_delta) for r in trace]
    _write_csv(path, DECODER_TRACE_HEADER, rows)


def read_csv_rows(path):
    with open(path, encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        return header, [row for row in reader]


# Toy-instance file: one "key value..." pair per line.
#   generator 1011         (repeat once per row)
#   interleaver 0 2 1 3
#   noise_std 0.5
#   seed 7
#   constellation 4pam     (optional)
#   message 1 0            (optional)


def parse_instance(text):
    fields = {"generator": []}
    for lineno, line in _content_lines(text):
        key, _, value = line.partition(" ")
        value = value.strip()
        try:
            if key == "generator":
                if set(value) - {"0", "1"}:
                    raise ValueError
                fields["generator"].append([int(ch) for ch in value])
            elif key in ("interleaver", "message"):
                fields[key] = [int(tok) for tok in value.split()]
            elif key == "noise_std":
                fields[key] = float(value)
            elif key == "seed":
                fields[key] = int(value)
            elif key == "constellation":
                fields[key] = value
            else:
                raise FormatError(f"unknown key {key!r}", lineno)
        except ValueError:
            raise FormatError(f"bad value for {key!r}", lineno) from None
    if not fields["generator"]:
        raise FormatError("instance file lists no generator rows")
    if len({len(r) for r in fields["generator"]}) != 1:
        raise FormatError("generator rows differ in length")
    return fields


def read_instance(path):
    """Parse an instance file into keyword arguments for ``build_toy_instance``."""
    with open(path, encoding="utf-8") as fh:
        return parse_instance(fh.read())


def format_instance(instance):
    lines = ["generator " + "".join(str(int(b)) for b in row) for row in instance.generator]
    lines.append("interleaver " + " ".join(str(int(i)) for i in instance.interleaver))
    lines.append("noise_std " + FLOAT_FMT.format(instance.noise_std))
    lines.append(f"seed {instance.seed}")
    lines.append(f"constellation {instance.constellation.name}")
    lines.append("message " + " ".join(str(int(b)) for b in instance.message))
    return "\n".join(lines) + "\n"
