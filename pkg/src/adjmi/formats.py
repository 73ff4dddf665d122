"""File formats and number formatting shared by the command-line tool.

JSON shapes::

    joint      {"matrix": [[P(x,y), ...], ...]}
    adjacency  {"px": [...], "py": [...], "support": [[0|1, ...], ...]}
    channel    {"matrix": [[P(y|x), ...], ...]}
    actions    {"maps": [[y per x], ...], "probs": [...]}

Truth tables are a single line of 2^n characters '0'/'1' in little-endian
input order.
"""

import csv
import io
import json

from adjmi.actions import ActionModel
from adjmi.boolean import BooleanFunction
from adjmi.core import AdjacencyProblem, JointDistribution, ValidationError


def fmt(x):
    """Nine significant digits, locale independent."""
    if isinstance(x, str):
        return x
    if isinstance(x, bool):
        return str(int(x))
    if isinstance(x, int):
        return str(x)
    return format(float(x), "#.9g")


def to_csv(header, rows):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([fmt(v) for v in row])
    return buf.getvalue()


def load_json(path):
    try:
        with open(path, encoding="utf-8") as fh:
            obj = json.load(fh)
    except json.JSONDecodeError as exc:
        raise ValidationError(f"{path}: malformed JSON ({exc})") from exc
    except OSError as exc:
        raise ValidationError(f"{path}: cannot read ({exc.strerror})") from exc
    if not isinstance(obj, dict):
        raise ValidationError(f"{path}: expected a JSON object")
    return obj


def _field(obj, key, kind):
    if key not in obj:
        raise ValidationError(f"{kind} JSON needs a '{key}' field")
    return obj[key]


def joint_from_json(obj):
    return JointDistribution(_field(obj, "matrix", "joint"))


def adjacency_from_json(obj):
    return AdjacencyProblem(
        _field(obj, "px", "adjacency"), _field(obj, "py", "adjacency"), _field(obj, "support", "adjacency")
    )


def actions_from_json(obj, n_outputs=None):
    return ActionModel(_field(obj, "maps", "actions"), _field(obj, "probs", "actions"), n_outputs=n_outputs)


def joint_to_json(j):
    return {"matrix": j.matrix.tolist()}


def adjacency_to_json(adj):
    return {
        "px": adj.px.probs.tolist(),
        "py": adj.py.probs.tolist(),
        "support": adj.support.astype(int).tolist(),
    }


def channel_to_json(c):
    return {"matrix": c.matrix.tolist()}


def actions_to_json(m):
    return {"maps": m.maps.tolist(), "probs": m.probs.probs.tolist()}


def dumps(obj):
    return json.dumps(obj, sort_keys=True) + "\n"


def read_truth_table(path):
    try:
        with open(path, encoding="ascii") as fh:
            text = fh.read()
    except (OSError, UnicodeDecodeError) as exc:
        raise ValidationError(f"{path}: cannot read truth table ({exc})") from exc
    lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
    if len(lines) != 1:
        raise ValidationError(f"{path}: truth table must be exactly one non-empty line")
    return BooleanFunction.from_bits(lines[0])


def write_truth_table(f):
    return f.to_bits() + "\n"
