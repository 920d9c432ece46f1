"""JSON file reading and writing shared by the command line tools."""
from __future__ import annotations

import json
from pathlib import Path

from .errors import InputError


def read_json(path) -> object:
    """Parse a JSON file; any read or parse failure becomes an InputError."""
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror or exc}") from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"{path} is not valid JSON: {exc}") from exc


def dumps(data) -> str:
    # sorted keys and a trailing newline keep output byte-identical across runs
    return json.dumps(data, sort_keys=True, ensure_ascii=False) + "\n"


def write_json(path, data) -> Path:
    path = Path(path)
    if path.parent and not path.parent.exists():
        path.parent.mkdir(parents=True)
    path.write_text(dumps(data), encoding="utf-8")
    return path


def load_form(data):
    """A bilinear form from its JSON description."""
    from .forms import BilinearForm
    return BilinearForm.from_json(data)


def load_phase_form(data):
    """An alternating form, given directly or derived from a bilinear form description."""
    from .sympl import AlternatingForm, phase_form
    if isinstance(data, dict) and "p" in data:
        return AlternatingForm.from_json(data)
    return phase_form(load_form(data))
